#pragma once

// Bidirectional typechecker.  A context is a value environment (variables
// bound to generic neutrals, dimensions to themselves), a parallel type
// assignment, and a restriction face: judgments under a restricted context
// are ordinary judgments whose conversions run under the face.  check and
// infer return elaborated terms: ascriptions are unfolded and constructor
// parameters filled in, so elaborated terms evaluate without further
// bookkeeping.

#include <string>
#include <utility>
#include <vector>

#include "chit/convert.hpp"
#include "chit/eval.hpp"
#include "chit/hit.hpp"
#include "chit/parser.hpp"
#include "chit/pretty.hpp"

namespace chit {

enum class ErrKind {
  Mismatch,
  BoundaryMismatch,
  SystemIncompatible,
  ConstancyViolation,
  ScopeError,
  UnsupportedUniverseKan,
  SchemaViolation,
};

inline const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::Mismatch: return "Mismatch";
    case ErrKind::BoundaryMismatch: return "BoundaryMismatch";
    case ErrKind::SystemIncompatible: return "SystemIncompatible";
    case ErrKind::ConstancyViolation: return "ConstancyViolation";
    case ErrKind::ScopeError: return "ScopeError";
    case ErrKind::UnsupportedUniverseKan: return "UnsupportedUniverseKan";
    case ErrKind::SchemaViolation: return "SchemaViolation";
  }
  return "Error";
}

struct TypeError {
  ErrKind kind;
  Pos pos;
  std::string msg;
};

inline std::string render_error(const TypeError& e, const std::string& file) {
  std::string loc = file.empty() ? "" : file + ":";
  loc += std::to_string(e.pos.line) + ":" + std::to_string(e.pos.col) + ": ";
  return loc + err_kind_name(e.kind) + ": " + e.msg;
}

[[noreturn]] inline void tc_fail(ErrKind k, Pos pos, std::string msg) {
  throw TypeError{k, pos, std::move(msg)};
}

// ---------------------------------------------------------------------------
// Contexts

struct Ctx {
  Env env;
  std::vector<std::pair<TermName, ValuePtr>> types;
  FaceFormula face = FaceFormula::one();

  Ctx bind(const TermName& x, const ValuePtr& ty) const {
    Ctx c = *this;
    c.env = env.bind(x, var_value(x, ty));
    c.types.emplace_back(x, ty);
    return c;
  }

  Ctx bind_value(const TermName& x, const ValuePtr& ty, const ValuePtr& v) const {
    Ctx c = *this;
    c.env = env.bind(x, v);
    c.types.emplace_back(x, ty);
    return c;
  }

  Ctx bind_dim(const DimName& i) const {
    Ctx c = *this;
    c.env = env.bind_dim(i, dim_atom(i));
    return c;
  }

  Ctx restrict(const FaceFormula& phi) const {
    Ctx c = *this;
    c.face = face_and(face, phi);
    return c;
  }

  const ValuePtr* lookup(const TermName& x) const {
    for (auto it = types.rbegin(); it != types.rend(); ++it)
      if (it->first == x) return &it->second;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Helpers

inline bool kan_admissible(const ValuePtr& ty) {
  return std::visit(
      overloaded{
          [&](const VU&) { return false; },
          [&](const VPi& n) {
            if (!kan_admissible(n.dom)) return false;
            ValuePtr x = var_value(fresh_var("x"), n.dom);
            return kan_admissible(apply_closure(n.cod, x));
          },
          [&](const VSigma& n) {
            if (!kan_admissible(n.fst)) return false;
            ValuePtr x = var_value(fresh_var("x"), n.fst);
            return kan_admissible(apply_closure(n.snd, x));
          },
          [&](const VPathP& n) {
            DimName i = fresh_dim("i");
            return kan_admissible(line_at(n.ty, dim_atom(i)));
          },
          [&](const VHitTy&) { return true; },
          [&](const VNe&) { return true; },
          [&](const auto&) { return false; },
      },
      ty->v);
}

inline std::string show_type(const ValuePtr& ty) { return pretty(readback_type(ty)); }

inline bool conv_v(const Ctx& ctx, const FaceFormula& extra, const ValuePtr& ty,
                   const ValuePtr& a, const ValuePtr& b) {
  return convert_under(face_and(ctx.face, extra), ty, a, b);
}

inline bool conv_ty(const Ctx& ctx, const ValuePtr& a, const ValuePtr& b) {
  return convert_type_under(ctx.face, a, b);
}

// ---------------------------------------------------------------------------
// Checking

inline TermPtr check(const Ctx& ctx, const TermPtr& t, const ValuePtr& ty);
inline std::pair<TermPtr, ValuePtr> infer(const Ctx& ctx, const TermPtr& t);
inline TermPtr check_type(const Ctx& ctx, const TermPtr& t);

namespace detail {

inline std::vector<TermPtr> check_params(const Ctx& ctx, const HITDecl* d,
                                         const std::vector<TermPtr>& params, Pos pos,
                                         std::vector<ValuePtr>* vals_out = nullptr) {
  if (params.size() != d->params.size())
    tc_fail(ErrKind::Mismatch, pos,
            "type '" + d->name + "' expects " + std::to_string(d->params.size()) +
                " parameter(s), got " + std::to_string(params.size()));
  std::vector<TermPtr> out;
  Env tel_env;
  for (std::size_t p = 0; p < params.size(); ++p) {
    ValuePtr pty = eval(tel_env, d->params[p].type);
    TermPtr pe = check(ctx, params[p], pty);
    ValuePtr pv = eval(ctx.env, pe);
    tel_env = tel_env.bind(d->params[p].var, pv);
    if (vals_out) vals_out->push_back(pv);
    out.push_back(pe);
  }
  return out;
}

inline std::pair<TermPtr, ValuePtr> infer_ctor(const Ctx& ctx, const TCtor& n, Pos pos) {
  const HITDecl* d = n.decl;
  const CtorDecl& cd = d->ctors[n.ctor];
  if (n.params.size() != d->params.size())
    tc_fail(ErrKind::Mismatch, pos,
            "cannot resolve the parameters of constructor '" + cd.name +
                "'; ascribe it with its type");
  std::vector<ValuePtr> param_vals;
  std::vector<TermPtr> params = check_params(ctx, d, n.params, pos, &param_vals);

  Env tel_env;
  for (std::size_t p = 0; p < param_vals.size(); ++p)
    tel_env = tel_env.bind(d->params[p].var, param_vals[p]);

  if (n.args.size() != cd.args.size())
    tc_fail(ErrKind::Mismatch, pos,
            "constructor '" + cd.name + "' expects " + std::to_string(cd.args.size()) +
                " argument(s), got " + std::to_string(n.args.size()));
  std::vector<TermPtr> args;
  for (std::size_t m = 0; m < cd.args.size(); ++m) {
    ValuePtr aty = eval(tel_env, cd.args[m].type);
    TermPtr ae = check(ctx, n.args[m], aty);
    ValuePtr av = eval(ctx.env, ae);
    tel_env = tel_env.bind(cd.args[m].var, av);
    args.push_back(ae);
  }
  if (n.dims.size() != cd.dims.size())
    tc_fail(ErrKind::Mismatch, pos,
            "constructor '" + cd.name + "' expects " + std::to_string(cd.dims.size()) +
                " dimension argument(s), got " + std::to_string(n.dims.size()));
  ValuePtr hty = mkv(VHitTy{d, param_vals});
  return {mk(TCtor{d, n.ctor, std::move(params), std::move(args), n.dims}, pos), hty};
}

// fill constructor parameters from an expected type by reading its parameter
// values back against the declaration telescope
inline std::vector<TermPtr> params_from_type(const VHitTy& h) {
  std::vector<TermPtr> out;
  Env tel_env;
  for (std::size_t p = 0; p < h.params.size(); ++p) {
    ValuePtr pty = eval(tel_env, h.decl->params[p].type);
    out.push_back(readback(pty, h.params[p]));
    tel_env = tel_env.bind(h.decl->params[p].var, h.params[p]);
  }
  return out;
}

inline std::pair<TermPtr, ValuePtr> infer_hcomp(const Ctx& ctx, const THcomp& n, Pos pos) {
  TermPtr tye = check_type(ctx, n.ty);
  ValuePtr tyv = eval(ctx.env, tye);
  if (!kan_admissible(tyv))
    tc_fail(ErrKind::UnsupportedUniverseKan, pos,
            "homogeneous composition at type '" + show_type(tyv) +
                "' is not supported (no Kan structure for the universe)");
  TermPtr cape = check(ctx, n.cap, tyv);
  ValuePtr capv = eval(ctx.env, cape);

  struct Side {
    FaceFormula face;
    TermPtr tm;
    ValuePtr line;  // open in the bound direction
  };
  std::vector<Side> sides;
  Ctx under = ctx.bind_dim(n.dim);
  for (const auto& [f, u] : n.sides) {
    for (const auto& fn : face_free_names(f))
      if (fn == n.dim)
        tc_fail(ErrKind::ScopeError, pos,
                "a side face mentions the direction bound by the composition");
    if (f.is_zero()) continue;  // vacuous side: never checked, never evaluated
    TermPtr ue = check(under.restrict(f), u, tyv);
    sides.push_back(Side{f, ue, eval(under.env, ue)});
  }
  for (std::size_t k = 0; k < sides.size(); ++k)
    for (std::size_t l = k + 1; l < sides.size(); ++l) {
      FaceFormula both = face_and(sides[k].face, sides[l].face);
      if (!conv_v(ctx, both, tyv, sides[k].line, sides[l].line))
        tc_fail(ErrKind::SystemIncompatible, pos,
                "sides '" + pretty_face(sides[k].face) + "' and '" +
                    pretty_face(sides[l].face) + "' disagree on their overlap");
    }
  DimSubst at0 = DimSubst::single(n.dim, dim0());
  for (const auto& s : sides) {
    if (!conv_v(ctx, s.face, tyv, act(s.line, at0), capv))
      tc_fail(ErrKind::BoundaryMismatch, pos,
              "side '" + pretty_face(s.face) + "' does not agree with the cap at 0");
  }
  THcomp out{n.dim, tye, {}, cape};
  for (auto& s : sides) out.sides.emplace_back(s.face, s.tm);
  return {mk(std::move(out), pos), tyv};
}

inline std::pair<TermPtr, ValuePtr> infer_trans(const Ctx& ctx, const TTrans& n, Pos pos) {
  Ctx under = ctx.bind_dim(n.dim);
  TermPtr tye = check_type(under, n.ty);
  Line line{n.dim, eval(under.env, tye)};
  for (const auto& fn : face_free_names(n.phi))
    if (fn == n.dim)
      tc_fail(ErrKind::ScopeError, pos,
              "the constancy face mentions the transport direction");
  if (!kan_admissible(line.body))
    tc_fail(ErrKind::UnsupportedUniverseKan, pos,
            "transport along '" + show_type(line.body) +
                "' is not supported (no Kan structure for the universe)");
  ValuePtr ty0 = line_at(line, dim0());
  TermPtr cape = check(ctx, n.cap, ty0);
  if (!n.phi.is_zero() && !convert_type_under(face_and(ctx.face, n.phi), line.body, ty0))
    tc_fail(ErrKind::ConstancyViolation, pos,
            "the type line must be degenerate on '" + pretty_face(n.phi) + "'");
  return {mk(TTrans{n.dim, tye, n.phi, cape}, pos), line_at(line, dim1())};
}

inline std::pair<TermPtr, ValuePtr> infer_elim(const Ctx& ctx, const TElim& n, Pos pos) {
  auto [scrute, sty] = infer(ctx, n.scrut);
  const auto* h = vas<VHitTy>(sty);
  if (!h || h->decl != n.decl)
    tc_fail(ErrKind::Mismatch, pos,
            "the scrutinee has type '" + show_type(sty) + "', expected '" +
                n.decl->name + " ...'");
  const HITDecl* d = h->decl;

  Ctx ctx_z = ctx.bind(n.motive_var, sty);
  TermPtr mot = check_type(ctx_z, n.motive);
  ValuePtr mot_generic = eval(ctx_z.env, mot);
  if (!kan_admissible(mot_generic))
    tc_fail(ErrKind::UnsupportedUniverseKan, pos,
            "the motive '" + show_type(mot_generic) +
                "' has no Kan structure; large elimination is not supported");

  // order the branches by declaration, requiring exactly one per constructor
  std::vector<const ElimBranch*> by_ctor(d->ctors.size(), nullptr);
  for (const auto& b : n.branches) {
    if (b.ctor < 0 || b.ctor >= static_cast<int>(d->ctors.size()))
      tc_fail(ErrKind::Mismatch, pos, "branch for an unknown constructor");
    if (by_ctor[b.ctor])
      tc_fail(ErrKind::Mismatch, pos,
              "duplicate branch for constructor '" + d->ctors[b.ctor].name + "'");
    by_ctor[b.ctor] = &b;
  }
  for (std::size_t c = 0; c < d->ctors.size(); ++c)
    if (!by_ctor[c])
      tc_fail(ErrKind::Mismatch, pos,
              "missing branch for constructor '" + d->ctors[c].name + "'");

  std::vector<ElimBranch> done;
  for (std::size_t c = 0; c < d->ctors.size(); ++c) {
    const ElimBranch& b = *by_ctor[c];
    const CtorDecl& cd = d->ctors[c];
    std::size_t rec = 0;
    for (const auto& a : cd.args) rec += a.recursive ? 1 : 0;
    if (b.args.size() != cd.args.size() || b.ihs.size() != rec ||
        b.dims.size() != cd.dims.size())
      tc_fail(ErrKind::Mismatch, pos,
              "branch for '" + cd.name + "' binds the wrong number of variables");

    // the eliminator restricted to the branches checked so far; boundaries
    // only mention earlier constructors
    auto ec = std::make_shared<const ElimClosure>(
        ElimClosure{n.motive_var, mot, done, ctx.env});

    Ctx bctx = ctx;
    Env tel_env;
    for (std::size_t p = 0; p < h->params.size(); ++p)
      tel_env = tel_env.bind(d->params[p].var, h->params[p]);
    Env benv = tel_env;
    std::vector<ValuePtr> arg_vals;
    std::size_t ih = 0;
    for (std::size_t m = 0; m < cd.args.size(); ++m) {
      ValuePtr aty = eval(tel_env, cd.args[m].type);
      bctx = bctx.bind(b.args[m], aty);
      ValuePtr av = *bctx.env.lookup(b.args[m]);
      arg_vals.push_back(av);
      tel_env = tel_env.bind(cd.args[m].var, av);
      benv = benv.bind(cd.args[m].var, av);
      if (cd.args[m].recursive) {
        ValuePtr ihty = eval(ctx.env.bind(n.motive_var, av), mot);
        bctx = bctx.bind_value(b.ihs[ih], ihty, elim_apply(ec, av));
        ++ih;
      }
    }
    std::vector<DimExpr> dim_vals;
    for (std::size_t m = 0; m < cd.dims.size(); ++m) {
      bctx = bctx.bind_dim(b.dims[m]);
      benv = benv.bind_dim(cd.dims[m], dim_atom(b.dims[m]));
      dim_vals.push_back(dim_atom(b.dims[m]));
    }

    ValuePtr cval = make_constructor(d, static_cast<int>(c), h->params, arg_vals, dim_vals);
    ValuePtr bty = eval(ctx.env.bind(n.motive_var, cval), mot);
    TermPtr bodye = check(bctx, b.body, bty);
    ValuePtr bodyv = eval(bctx.env, bodye);

    for (const auto& [psi, e] : cd.boundary) {
      DimSubst s;
      for (std::size_t m = 0; m < cd.dims.size(); ++m)
        s.bind(cd.dims[m], dim_vals[m]);
      FaceFormula psi2 = face_subst(psi, s);
      if (psi2.is_zero()) continue;
      ValuePtr bval = eval(benv, e);
      ValuePtr rhs = elim_apply(ec, bval);
      if (!conv_v(bctx, psi2, bty, bodyv, rhs))
        tc_fail(ErrKind::BoundaryMismatch, pos,
                "branch for '" + cd.name + "' breaks the boundary on '" +
                    pretty_face(psi2) + "'");
    }
    done.push_back(ElimBranch{static_cast<int>(c), b.args, b.ihs, b.dims, bodye});
  }

  ValuePtr scrutv = eval(ctx.env, scrute);
  ValuePtr rty = eval(ctx.env.bind(n.motive_var, scrutv), mot);
  return {mk(TElim{d, n.motive_var, mot, std::move(done), scrute}, pos), rty};
}

}  // namespace detail

inline std::pair<TermPtr, ValuePtr> infer(const Ctx& ctx, const TermPtr& t) {
  using R = std::pair<TermPtr, ValuePtr>;
  Pos pos = t->pos;
  return std::visit(
      overloaded{
          [&](const TVar& n) -> R {
            const ValuePtr* ty = ctx.lookup(n.name);
            if (!ty)
              tc_fail(ErrKind::ScopeError, pos,
                      "variable '" + n.name.hint + "' is not in scope");
            return {t, *ty};
          },
          [&](const TGlobal& n) -> R {
            const GlobalEnv* g = ctx.env.globals();
            const GlobalDef* def = g ? g->lookup(n.name) : nullptr;
            if (!def)
              tc_fail(ErrKind::ScopeError, pos, "'" + n.name + "' is not defined");
            return {t, def->type};
          },
          [&](const TU&) -> R {
            tc_fail(ErrKind::Mismatch, pos, "U is a type, not a term to infer");
          },
          [&](const TPi&) -> R { return {check_type(ctx, t), mkv(VU{})}; },
          [&](const TSigma&) -> R { return {check_type(ctx, t), mkv(VU{})}; },
          [&](const TPathP&) -> R { return {check_type(ctx, t), mkv(VU{})}; },
          [&](const THitTy&) -> R { return {check_type(ctx, t), mkv(VU{})}; },
          [&](const TLam&) -> R {
            tc_fail(ErrKind::Mismatch, pos, "cannot infer the type of a lambda");
          },
          [&](const TPLam&) -> R {
            tc_fail(ErrKind::Mismatch, pos, "cannot infer the type of a path abstraction");
          },
          [&](const TPair&) -> R {
            tc_fail(ErrKind::Mismatch, pos, "cannot infer the type of a pair");
          },
          [&](const TApp& n) -> R {
            auto [fe, fty] = infer(ctx, n.fn);
            const auto* pi = vas<VPi>(fty);
            if (!pi)
              tc_fail(ErrKind::Mismatch, n.fn->pos,
                      "applied a value of type '" + show_type(fty) + "', not a function");
            TermPtr ae = check(ctx, n.arg, pi->dom);
            return {mk(TApp{fe, ae}, pos), apply_closure(pi->cod, eval(ctx.env, ae))};
          },
          [&](const TFst& n) -> R {
            auto [pe, pty] = infer(ctx, n.pair);
            const auto* sg = vas<VSigma>(pty);
            if (!sg)
              tc_fail(ErrKind::Mismatch, pos,
                      "projected from a value of type '" + show_type(pty) + "', not a pair");
            return {mk(TFst{pe}, pos), sg->fst};
          },
          [&](const TSnd& n) -> R {
            auto [pe, pty] = infer(ctx, n.pair);
            const auto* sg = vas<VSigma>(pty);
            if (!sg)
              tc_fail(ErrKind::Mismatch, pos,
                      "projected from a value of type '" + show_type(pty) + "', not a pair");
            ValuePtr fv = fst_val(eval(ctx.env, pe));
            return {mk(TSnd{pe}, pos), apply_closure(sg->snd, fv)};
          },
          [&](const TPApp& n) -> R {
            auto [pe, pty] = infer(ctx, n.path);
            const auto* pa = vas<VPathP>(pty);
            if (!pa)
              tc_fail(ErrKind::Mismatch, pos,
                      "applied a value of type '" + show_type(pty) + "' to a dimension");
            DimExpr r = eval_dim(ctx.env, n.arg);
            return {mk(TPApp{pe, n.arg}, pos), line_at(pa->ty, r)};
          },
          [&](const TCtor& n) -> R { return detail::infer_ctor(ctx, n, pos); },
          [&](const THcomp& n) -> R { return detail::infer_hcomp(ctx, n, pos); },
          [&](const TTrans& n) -> R { return detail::infer_trans(ctx, n, pos); },
          [&](const TElim& n) -> R { return detail::infer_elim(ctx, n, pos); },
          [&](const TAsc& n) -> R {
            TermPtr tye = check_type(ctx, n.ty);
            ValuePtr tyv = eval(ctx.env, tye);
            return {check(ctx, n.tm, tyv), tyv};
          },
      },
      t->v);
}

inline TermPtr check(const Ctx& ctx, const TermPtr& t, const ValuePtr& ty) {
  Pos pos = t->pos;
  if (const auto* n = as<TLam>(t)) {
    const auto* pi = vas<VPi>(ty);
    if (!pi)
      tc_fail(ErrKind::Mismatch, pos,
              "a lambda cannot have type '" + show_type(ty) + "'");
    Ctx ctx2 = ctx.bind(n->var, pi->dom);
    ValuePtr cod = apply_closure(pi->cod, *ctx2.env.lookup(n->var));
    return mk(TLam{n->var, check(ctx2, n->body, cod)}, pos);
  }
  if (const auto* n = as<TPair>(t)) {
    const auto* sg = vas<VSigma>(ty);
    if (!sg)
      tc_fail(ErrKind::Mismatch, pos, "a pair cannot have type '" + show_type(ty) + "'");
    TermPtr fe = check(ctx, n->fst, sg->fst);
    ValuePtr fv = eval(ctx.env, fe);
    TermPtr se = check(ctx, n->snd, apply_closure(sg->snd, fv));
    return mk(TPair{fe, se}, pos);
  }
  if (const auto* n = as<TPLam>(t)) {
    const auto* pa = vas<VPathP>(ty);
    if (!pa)
      tc_fail(ErrKind::Mismatch, pos,
              "a path abstraction cannot have type '" + show_type(ty) + "'");
    Ctx ctx2 = ctx.bind_dim(n->dim);
    TermPtr be = check(ctx2, n->body, line_at(pa->ty, dim_atom(n->dim)));
    Line bline{n->dim, eval(ctx2.env, be)};
    if (!conv_v(ctx, FaceFormula::one(), line_at(pa->ty, dim0()),
                line_at(bline, dim0()), pa->lhs))
      tc_fail(ErrKind::BoundaryMismatch, pos, "the left endpoint of the path is wrong");
    if (!conv_v(ctx, FaceFormula::one(), line_at(pa->ty, dim1()),
                line_at(bline, dim1()), pa->rhs))
      tc_fail(ErrKind::BoundaryMismatch, pos, "the right endpoint of the path is wrong");
    return mk(TPLam{n->dim, be}, pos);
  }
  if (const auto* n = as<TCtor>(t)) {
    if (n->params.empty() && !n->decl->params.empty()) {
      if (const auto* h = vas<VHitTy>(ty); h && h->decl == n->decl) {
        TCtor filled = *n;
        filled.params = detail::params_from_type(*h);
        auto [e, ity] = detail::infer_ctor(ctx, filled, pos);
        if (!conv_ty(ctx, ity, ty))
          tc_fail(ErrKind::Mismatch, pos,
                  "expected '" + show_type(ty) + "', found '" + show_type(ity) + "'");
        return e;
      }
    }
  }
  if (as<TU>(t) || as<TPi>(t) || as<TSigma>(t) || as<TPathP>(t)) {
    if (!vas<VU>(ty))
      tc_fail(ErrKind::Mismatch, pos, "a type cannot have type '" + show_type(ty) + "'");
    return check_type(ctx, t);
  }
  auto [e, ity] = infer(ctx, t);
  if (!conv_ty(ctx, ity, ty))
    tc_fail(ErrKind::Mismatch, pos,
            "expected '" + show_type(ty) + "', found '" + show_type(ity) + "'");
  return e;
}

inline TermPtr check_type(const Ctx& ctx, const TermPtr& t) {
  Pos pos = t->pos;
  if (as<TU>(t)) return t;
  if (const auto* n = as<TPi>(t)) {
    TermPtr dome = check_type(ctx, n->dom);
    Ctx ctx2 = ctx.bind(n->var, eval(ctx.env, dome));
    return mk(TPi{n->var, dome, check_type(ctx2, n->cod)}, pos);
  }
  if (const auto* n = as<TSigma>(t)) {
    TermPtr fste = check_type(ctx, n->fst);
    Ctx ctx2 = ctx.bind(n->var, eval(ctx.env, fste));
    return mk(TSigma{n->var, fste, check_type(ctx2, n->snd)}, pos);
  }
  if (const auto* n = as<TPathP>(t)) {
    Ctx ctx2 = ctx.bind_dim(n->dim);
    TermPtr tye = check_type(ctx2, n->ty);
    Line line{n->dim, eval(ctx2.env, tye)};
    TermPtr le = check(ctx, n->lhs, line_at(line, dim0()));
    TermPtr re = check(ctx, n->rhs, line_at(line, dim1()));
    return mk(TPathP{n->dim, tye, le, re}, pos);
  }
  if (const auto* n = as<THitTy>(t)) {
    return mk(THitTy{n->decl, detail::check_params(ctx, n->decl, n->params, pos)}, pos);
  }
  return check(ctx, t, mkv(VU{}));
}

// ---------------------------------------------------------------------------
// Modules

inline void check_module(const ParsedModule& m, GlobalEnv& globals) {
  for (const auto& d : m.defs) {
    if (globals.defined(d.name))
      tc_fail(ErrKind::ScopeError, d.pos, "duplicate definition of '" + d.name + "'");
    Ctx ctx;
    ctx.env = Env(&globals);
    TermPtr tye = check_type(ctx, d.type);
    ValuePtr tyv = eval(ctx.env, tye);
    TermPtr bodye = check(ctx, d.body, tyv);
    ValuePtr bodyv = eval(ctx.env, bodye);
    globals.define(d.name, GlobalDef{tyv, bodyv, tye, bodye});
  }
}

}  // namespace chit
