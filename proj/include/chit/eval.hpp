#pragma once

// Evaluation, the dimension action, the Kan operations, and readback.
//
// The dimension action (act) is the semantic counterpart of composing with a
// cube-category map: it pushes an interval substitution through a value and
// re-runs every smart constructor on the way, so boundaries and Kan
// reductions that become enabled by the substitution fire immediately.
// Evaluation requires every free variable and free dimension of the term to
// be bound in the environment; context dimensions are bound to themselves.

#include <string>
#include <vector>

#include "chit/value.hpp"

namespace chit {

ValuePtr act(const ValuePtr& v, const DimSubst& s);
Line act_line(const Line& l, const DimSubst& s);
Env act_env(const Env& e, const DimSubst& s);
ValuePtr line_at(const Line& l, const DimExpr& r);

ValuePtr eval(const Env& env, const TermPtr& t);
ValuePtr apply_closure(const Closure& c, const ValuePtr& v);
ValuePtr apply_val(const ValuePtr& f, const ValuePtr& a);
ValuePtr fst_val(const ValuePtr& p);
ValuePtr snd_val(const ValuePtr& p);
ValuePtr papp(const ValuePtr& p, const DimExpr& r);
ValuePtr elim_apply(const std::shared_ptr<const ElimClosure>& ec, const ValuePtr& v);

ValuePtr make_constructor(const HITDecl* decl, int ctor, std::vector<ValuePtr> params,
                          std::vector<ValuePtr> args, std::vector<DimExpr> dims);
ValuePtr hcomp_value(const ValuePtr& ty, std::vector<VSide> sides, const ValuePtr& cap);
ValuePtr trans_value(const Line& line, const FaceFormula& phi, const ValuePtr& cap);

Line squeeze_line(const Line& ty, const FaceFormula& phi, const Line& u);
ValuePtr comp_value(const Line& line, const std::vector<VSide>& sides, const ValuePtr& cap);
Line hfill_line(const ValuePtr& ty, const std::vector<VSide>& sides, const ValuePtr& cap);
Line trans_fill_line(const Line& line, const FaceFormula& phi, const ValuePtr& cap);
ValuePtr ctrans_value(const Line& line, const FaceFormula& phi, const ValuePtr& cap);
Line ctrans_fill_line(const Line& line, const FaceFormula& phi, const ValuePtr& cap);
ValuePtr generic_trans_ctor(const Line& line, const FaceFormula& phi, const VCtor& cap);

TermPtr readback(const ValuePtr& ty, const ValuePtr& v);
TermPtr readback_type(const ValuePtr& ty);
std::pair<TermPtr, ValuePtr> readback_neutral(const NePtr& ne);

// Switches transport at parameterized HITs from the per-type rules to the
// schema-generic algorithm.
inline bool& generic_transport_enabled() {
  static bool flag = false;
  return flag;
}

// ---------------------------------------------------------------------------
// Small helpers

inline Line const_line(const ValuePtr& v, const std::string& hint = "_") {
  return Line{fresh_dim(hint), v};
}

// Reverse the direction of a line: out(i) = in(1-i).
inline Line reverse_line(const Line& l) {
  DimName i = fresh_dim(l.var.hint);
  return Line{i, act(l.body, DimSubst::single(l.var, dim_neg(dim_atom(i))))};
}

namespace detail {

inline DimSubst subst_drop(const DimSubst& s, const DimName& n) {
  DimSubst out;
  for (const auto& [id, r] : s.entries())
    if (id != n.id) out.bind(DimName{id, ""}, r);
  return out;
}

inline bool subst_range_mentions(const DimSubst& s, const DimName& n) {
  for (const auto& [id, r] : s.entries())
    for (const auto& m : dim_free_names(r))
      if (m.id == n.id) return true;
  return false;
}

}  // namespace detail

inline Line act_line(const Line& l, const DimSubst& s) {
  DimSubst s2 = detail::subst_drop(s, l.var);
  if (s2.empty()) return l;
  if (!detail::subst_range_mentions(s2, l.var)) return Line{l.var, act(l.body, s2)};
  DimName f = fresh_dim(l.var.hint);
  return Line{f, act(act(l.body, DimSubst::single(l.var, dim_atom(f))), s2)};
}

inline ValuePtr line_at(const Line& l, const DimExpr& r) {
  if (r.is_atom() && r.name() == l.var) return l.body;
  return act(l.body, DimSubst::single(l.var, r));
}

inline Env act_env(const Env& e, const DimSubst& s) {
  std::vector<const EnvNode*> nodes;
  for (const EnvNode* n = e.head().get(); n; n = n->next.get()) nodes.push_back(n);
  std::shared_ptr<const EnvNode> out = nullptr;
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const EnvNode* n = *it;
    if (n->is_dim)
      out = std::make_shared<EnvNode>(EnvNode{true, {}, n->dvar, nullptr, dim_subst(n->dim, s), out});
    else
      out = std::make_shared<EnvNode>(EnvNode{false, n->tvar, {}, act(n->val, s), {}, out});
  }
  return e.with_head(std::move(out));
}

inline Closure act_closure(const Closure& c, const DimSubst& s) {
  return Closure{c.var, c.body, act_env(c.env, s)};
}

inline std::shared_ptr<const ElimClosure> act_elim(const std::shared_ptr<const ElimClosure>& ec,
                                                   const DimSubst& s) {
  return std::make_shared<const ElimClosure>(
      ElimClosure{ec->motive_var, ec->motive, ec->branches, act_env(ec->env, s)});
}

// ---------------------------------------------------------------------------
// The dimension action

namespace detail {

inline ValuePtr act_neutral(const NePtr& ne, const DimSubst& s) {
  return std::visit(
      overloaded{
          [&](const NVar& n) -> ValuePtr {
            ValuePtr ty = act(n.ty, s);
            return mkv(VNe{mkne(NVar{n.name, ty}), ty});
          },
          [&](const NApp& n) -> ValuePtr { return apply_val(act_neutral(n.fn, s), act(n.arg, s)); },
          [&](const NFst& n) -> ValuePtr { return fst_val(act_neutral(n.pair, s)); },
          [&](const NSnd& n) -> ValuePtr { return snd_val(act_neutral(n.pair, s)); },
          [&](const NPApp& n) -> ValuePtr {
            return papp(act_neutral(n.path, s), dim_subst(n.arg, s));
          },
          [&](const NElim& n) -> ValuePtr {
            return elim_apply(act_elim(n.elim, s), act_neutral(n.scrut, s));
          },
          [&](const NHcompNe& n) -> ValuePtr {
            std::vector<VSide> sides;
            for (const auto& sd : n.sides) {
              FaceFormula f = face_subst(sd.face, s);
              // a side is only meaningful on its face; a vanished face may
              // guard a value that does not restrict, so drop it unevaluated
              if (f.is_zero()) continue;
              sides.push_back(VSide{std::move(f), act_line(sd.line, s)});
            }
            return hcomp_value(act(n.ty, s), std::move(sides), act(n.cap, s));
          },
          [&](const NTrans& n) -> ValuePtr {
            return trans_value(act_line(n.ty, s), face_subst(n.phi, s), act(n.cap, s));
          },
      },
      ne->v);
}

}  // namespace detail

inline ValuePtr act(const ValuePtr& v, const DimSubst& s) {
  if (s.empty()) return v;
  return std::visit(
      overloaded{
          [&](const VU&) { return v; },
          [&](const VPi& n) -> ValuePtr {
            return mkv(VPi{act(n.dom, s), act_closure(n.cod, s)});
          },
          [&](const VSigma& n) -> ValuePtr {
            return mkv(VSigma{act(n.fst, s), act_closure(n.snd, s)});
          },
          [&](const VPathP& n) -> ValuePtr {
            return mkv(VPathP{act_line(n.ty, s), act(n.lhs, s), act(n.rhs, s)});
          },
          [&](const VLam& n) -> ValuePtr { return mkv(VLam{act_closure(n.body, s)}); },
          [&](const VPair& n) -> ValuePtr { return mkv(VPair{act(n.fst, s), act(n.snd, s)}); },
          [&](const VPLam& n) -> ValuePtr { return mkv(VPLam{act_line(n.body, s)}); },
          [&](const VHitTy& n) -> ValuePtr {
            VHitTy m{n.decl, {}};
            m.params.reserve(n.params.size());
            for (const auto& p : n.params) m.params.push_back(act(p, s));
            return mkv(std::move(m));
          },
          [&](const VCtor& n) -> ValuePtr {
            std::vector<ValuePtr> params, args;
            std::vector<DimExpr> dims;
            params.reserve(n.params.size());
            args.reserve(n.args.size());
            dims.reserve(n.dims.size());
            for (const auto& p : n.params) params.push_back(act(p, s));
            for (const auto& a : n.args) args.push_back(act(a, s));
            for (const auto& r : n.dims) dims.push_back(dim_subst(r, s));
            return make_constructor(n.decl, n.ctor, std::move(params), std::move(args),
                                    std::move(dims));
          },
          [&](const VHcomp& n) -> ValuePtr {
            std::vector<VSide> sides;
            for (const auto& sd : n.sides) {
              FaceFormula f = face_subst(sd.face, s);
              if (f.is_zero()) continue;
              sides.push_back(VSide{std::move(f), act_line(sd.line, s)});
            }
            return hcomp_value(act(n.ty, s), std::move(sides), act(n.cap, s));
          },
          [&](const VTrans& n) -> ValuePtr {
            return trans_value(act_line(n.ty, s), face_subst(n.phi, s), act(n.cap, s));
          },
          [&](const VNe& n) -> ValuePtr { return detail::act_neutral(n.ne, s); },
      },
      v->v);
}

// ---------------------------------------------------------------------------
// Evaluation

inline DimExpr eval_dim(const Env& env, const DimExpr& r) {
  DimSubst s;
  for (const auto& n : dim_free_names(r)) {
    auto b = env.lookup_dim(n);
    if (!b) eval_fail(EvalError::Kind::Internal, "unbound dimension " + n.hint);
    s.bind(n, *b);
  }
  return dim_subst(r, s);
}

inline FaceFormula eval_face(const Env& env, const FaceFormula& f) {
  DimSubst s;
  for (const auto& n : face_free_names(f)) {
    auto b = env.lookup_dim(n);
    if (!b) eval_fail(EvalError::Kind::Internal, "unbound dimension " + n.hint);
    s.bind(n, *b);
  }
  return face_subst(f, s);
}

inline ValuePtr eval(const Env& env, const TermPtr& t) {
  return std::visit(
      overloaded{
          [&](const TVar& n) -> ValuePtr {
            const ValuePtr* v = env.lookup(n.name);
            if (!v) eval_fail(EvalError::Kind::Internal, "unbound variable " + n.name.hint);
            return *v;
          },
          [&](const TGlobal& n) -> ValuePtr {
            const GlobalDef* d = env.globals() ? env.globals()->lookup(n.name) : nullptr;
            if (!d) eval_fail(EvalError::Kind::Internal, "unbound global " + n.name);
            return d->value;
          },
          [&](const TU&) -> ValuePtr { return mkv(VU{}); },
          [&](const TPi& n) -> ValuePtr {
            return mkv(VPi{eval(env, n.dom), Closure{n.var, n.cod, env}});
          },
          [&](const TLam& n) -> ValuePtr { return mkv(VLam{Closure{n.var, n.body, env}}); },
          [&](const TApp& n) -> ValuePtr { return apply_val(eval(env, n.fn), eval(env, n.arg)); },
          [&](const TSigma& n) -> ValuePtr {
            return mkv(VSigma{eval(env, n.fst), Closure{n.var, n.snd, env}});
          },
          [&](const TPair& n) -> ValuePtr {
            return mkv(VPair{eval(env, n.fst), eval(env, n.snd)});
          },
          [&](const TFst& n) -> ValuePtr { return fst_val(eval(env, n.pair)); },
          [&](const TSnd& n) -> ValuePtr { return snd_val(eval(env, n.pair)); },
          [&](const TPathP& n) -> ValuePtr {
            DimName i = fresh_dim(n.dim.hint);
            ValuePtr ty = eval(env.bind_dim(n.dim, dim_atom(i)), n.ty);
            return mkv(VPathP{Line{i, ty}, eval(env, n.lhs), eval(env, n.rhs)});
          },
          [&](const TPLam& n) -> ValuePtr {
            DimName i = fresh_dim(n.dim.hint);
            return mkv(VPLam{Line{i, eval(env.bind_dim(n.dim, dim_atom(i)), n.body)}});
          },
          [&](const TPApp& n) -> ValuePtr {
            return papp(eval(env, n.path), eval_dim(env, n.arg));
          },
          [&](const THitTy& n) -> ValuePtr {
            VHitTy m{n.decl, {}};
            for (const auto& p : n.params) m.params.push_back(eval(env, p));
            return mkv(std::move(m));
          },
          [&](const TCtor& n) -> ValuePtr {
            if (n.params.size() != n.decl->params.size())
              eval_fail(EvalError::Kind::Internal,
                        "unelaborated constructor " + n.decl->ctors[n.ctor].name);
            std::vector<ValuePtr> params, args;
            std::vector<DimExpr> dims;
            for (const auto& p : n.params) params.push_back(eval(env, p));
            for (const auto& a : n.args) args.push_back(eval(env, a));
            for (const auto& r : n.dims) dims.push_back(eval_dim(env, r));
            return make_constructor(n.decl, n.ctor, std::move(params), std::move(args),
                                    std::move(dims));
          },
          [&](const THcomp& n) -> ValuePtr {
            ValuePtr ty = eval(env, n.ty);
            std::vector<VSide> sides;
            for (const auto& [f, u] : n.sides) {
              FaceFormula fv = eval_face(env, f);
              // sides are only checked on their faces; never evaluate a body
              // whose face has vanished
              if (fv.is_zero()) continue;
              DimName j = fresh_dim(n.dim.hint);
              sides.push_back(
                  VSide{std::move(fv), Line{j, eval(env.bind_dim(n.dim, dim_atom(j)), u)}});
            }
            return hcomp_value(ty, std::move(sides), eval(env, n.cap));
          },
          [&](const TTrans& n) -> ValuePtr {
            DimName i = fresh_dim(n.dim.hint);
            Line line{i, eval(env.bind_dim(n.dim, dim_atom(i)), n.ty)};
            return trans_value(line, eval_face(env, n.phi), eval(env, n.cap));
          },
          [&](const TElim& n) -> ValuePtr {
            auto ec = std::make_shared<const ElimClosure>(
                ElimClosure{n.motive_var, n.motive, n.branches, env});
            return elim_apply(ec, eval(env, n.scrut));
          },
          [&](const TAsc& n) -> ValuePtr { return eval(env, n.tm); },
      },
      t->v);
}

inline ValuePtr apply_closure(const Closure& c, const ValuePtr& v) {
  return eval(c.env.bind(c.var, v), c.body);
}

// ---------------------------------------------------------------------------
// Eliminators

inline ValuePtr apply_val(const ValuePtr& f, const ValuePtr& a) {
  if (const auto* lam = vas<VLam>(f)) return apply_closure(lam->body, a);
  if (const auto* ne = vas<VNe>(f)) {
    const auto* pi = vas<VPi>(ne->ty);
    if (!pi) eval_fail(EvalError::Kind::Internal, "application of a non-function neutral");
    return mkv(VNe{mkne(NApp{ne->ne, a}), apply_closure(pi->cod, a)});
  }
  if (const auto* hc = vas<VHcomp>(f)) {
    const auto* pi = vas<VPi>(hc->ty);
    if (!pi) eval_fail(EvalError::Kind::Internal, "application of a non-function composition");
    // (hcomp [psi -> u] u0) a = hcomp [psi -> u a] (u0 a); a is constant in
    // the composition direction, which never escapes the sides
    std::vector<VSide> sides;
    sides.reserve(hc->sides.size());
    for (const auto& sd : hc->sides)
      sides.push_back(VSide{sd.face, Line{sd.line.var, apply_val(sd.line.body, a)}});
    return hcomp_value(apply_closure(pi->cod, a), std::move(sides), apply_val(hc->cap, a));
  }
  if (const auto* tr = vas<VTrans>(f)) {
    const auto* pi = vas<VPi>(tr->ty.body);
    if (!pi) eval_fail(EvalError::Kind::Internal, "application of a non-function transport");
    const DimName& i = tr->ty.var;
    // transport the argument backwards along the domain line:
    // w(r) = trans^j dom(1-((1-r)/\j)) (phi \/ (r=1)) a, so w(1) = a
    auto w_at = [&](const DimExpr& r) -> ValuePtr {
      DimName j = fresh_dim("j");
      DimExpr path = dim_neg(dim_meet(dim_neg(r), dim_atom(j)));
      Line dom_line{j, act(pi->dom, DimSubst::single(i, path))};
      return trans_value(dom_line, face_or(tr->phi, face_of_dim(r, true)), a);
    };
    Line cod_line{i, apply_closure(pi->cod, w_at(dim_atom(i)))};
    return trans_value(cod_line, tr->phi, apply_val(tr->cap, w_at(dim0())));
  }
  eval_fail(EvalError::Kind::Internal, "application of a non-function value");
}

inline ValuePtr fst_val(const ValuePtr& p) {
  if (const auto* pr = vas<VPair>(p)) return pr->fst;
  if (const auto* ne = vas<VNe>(p)) {
    const auto* sg = vas<VSigma>(ne->ty);
    if (!sg) eval_fail(EvalError::Kind::Internal, "projection from a non-pair neutral");
    return mkv(VNe{mkne(NFst{ne->ne}), sg->fst});
  }
  if (const auto* hc = vas<VHcomp>(p)) {
    const auto* sg = vas<VSigma>(hc->ty);
    if (!sg) eval_fail(EvalError::Kind::Internal, "projection from a non-pair composition");
    std::vector<VSide> sides;
    sides.reserve(hc->sides.size());
    for (const auto& sd : hc->sides)
      sides.push_back(VSide{sd.face, Line{sd.line.var, fst_val(sd.line.body)}});
    return hcomp_value(sg->fst, std::move(sides), fst_val(hc->cap));
  }
  if (const auto* tr = vas<VTrans>(p)) {
    const auto* sg = vas<VSigma>(tr->ty.body);
    if (!sg) eval_fail(EvalError::Kind::Internal, "projection from a non-pair transport");
    return trans_value(Line{tr->ty.var, sg->fst}, tr->phi, fst_val(tr->cap));
  }
  eval_fail(EvalError::Kind::Internal, "projection from a non-pair value");
}

inline ValuePtr snd_val(const ValuePtr& p) {
  if (const auto* pr = vas<VPair>(p)) return pr->snd;
  if (const auto* ne = vas<VNe>(p)) {
    const auto* sg = vas<VSigma>(ne->ty);
    if (!sg) eval_fail(EvalError::Kind::Internal, "projection from a non-pair neutral");
    ValuePtr first = mkv(VNe{mkne(NFst{ne->ne}), sg->fst});
    return mkv(VNe{mkne(NSnd{ne->ne}), apply_closure(sg->snd, first)});
  }
  if (const auto* hc = vas<VHcomp>(p)) {
    const auto* sg = vas<VSigma>(hc->ty);
    if (!sg) eval_fail(EvalError::Kind::Internal, "projection from a non-pair composition");
    // second component composes over the line of second-component types
    // above the filler of the first components
    std::vector<VSide> fst_sides, snd_sides;
    for (const auto& sd : hc->sides) {
      fst_sides.push_back(VSide{sd.face, Line{sd.line.var, fst_val(sd.line.body)}});
      snd_sides.push_back(VSide{sd.face, Line{sd.line.var, snd_val(sd.line.body)}});
    }
    Line fill = hfill_line(sg->fst, fst_sides, fst_val(hc->cap));
    Line ty_line{fill.var, apply_closure(sg->snd, fill.body)};
    return comp_value(ty_line, snd_sides, snd_val(hc->cap));
  }
  if (const auto* tr = vas<VTrans>(p)) {
    const auto* sg = vas<VSigma>(tr->ty.body);
    if (!sg) eval_fail(EvalError::Kind::Internal, "projection from a non-pair transport");
    Line fill = trans_fill_line(Line{tr->ty.var, sg->fst}, tr->phi, fst_val(tr->cap));
    ValuePtr aligned = act(fill.body, DimSubst::single(fill.var, dim_atom(tr->ty.var)));
    Line ty_line{tr->ty.var, apply_closure(sg->snd, aligned)};
    return trans_value(ty_line, tr->phi, snd_val(tr->cap));
  }
  eval_fail(EvalError::Kind::Internal, "projection from a non-pair value");
}

inline ValuePtr papp(const ValuePtr& p, const DimExpr& r) {
  if (const auto* pl = vas<VPLam>(p)) return line_at(pl->body, r);
  if (const auto* ne = vas<VNe>(p)) {
    const auto* pa = vas<VPathP>(ne->ty);
    if (!pa) eval_fail(EvalError::Kind::Internal, "path application of a non-path neutral");
    if (dim_is_zero(r)) return pa->lhs;
    if (dim_is_one(r)) return pa->rhs;
    return mkv(VNe{mkne(NPApp{ne->ne, r}), line_at(pa->ty, r)});
  }
  if (const auto* hc = vas<VHcomp>(p)) {
    const auto* pa = vas<VPathP>(hc->ty);
    if (!pa) eval_fail(EvalError::Kind::Internal, "path application of a non-path composition");
    std::vector<VSide> sides;
    for (const auto& sd : hc->sides)
      sides.push_back(VSide{sd.face, Line{sd.line.var, papp(sd.line.body, r)}});
    sides.push_back(VSide{face_of_dim(r, false), const_line(pa->lhs)});
    sides.push_back(VSide{face_of_dim(r, true), const_line(pa->rhs)});
    return hcomp_value(line_at(pa->ty, r), std::move(sides), papp(hc->cap, r));
  }
  if (const auto* tr = vas<VTrans>(p)) {
    const auto* pa = vas<VPathP>(tr->ty.body);
    if (!pa) eval_fail(EvalError::Kind::Internal, "path application of a non-path transport");
    const DimName& i = tr->ty.var;
    ValuePtr cap_at = papp(tr->cap, r);
    std::vector<VSide> sides;
    sides.push_back(VSide{face_of_dim(r, false), Line{i, pa->lhs}});
    sides.push_back(VSide{face_of_dim(r, true), Line{i, pa->rhs}});
    if (!tr->phi.is_zero()) sides.push_back(VSide{tr->phi, const_line(cap_at)});
    return comp_value(Line{i, line_at(pa->ty, r)}, sides, cap_at);
  }
  eval_fail(EvalError::Kind::Internal, "path application of a non-path value");
}

inline ValuePtr elim_apply(const std::shared_ptr<const ElimClosure>& ec, const ValuePtr& v) {
  if (const auto* c = vas<VCtor>(v)) {
    const ElimBranch* br = nullptr;
    for (const auto& b : ec->branches)
      if (b.ctor == c->ctor) { br = &b; break; }
    const CtorDecl& cd = c->decl->ctors[c->ctor];
    if (!br || br->args.size() != c->args.size() || br->dims.size() != c->dims.size())
      eval_fail(EvalError::Kind::Internal, "eliminator does not cover " + cd.name);
    Env env = ec->env;
    std::size_t ih = 0;
    for (std::size_t m = 0; m < c->args.size(); ++m) {
      env = env.bind(br->args[m], c->args[m]);
      if (cd.args[m].recursive) {
        if (ih >= br->ihs.size())
          eval_fail(EvalError::Kind::Internal, "eliminator branch arity mismatch");
        env = env.bind(br->ihs[ih++], elim_apply(ec, c->args[m]));
      }
    }
    for (std::size_t m = 0; m < c->dims.size(); ++m)
      env = env.bind_dim(br->dims[m], c->dims[m]);
    return eval(env, br->body);
  }
  if (const auto* hc = vas<VHcomp>(v)) {
    // elim (hcomp [psi -> u] u0) = comp^j P(hfill j) [psi -> elim u] (elim u0)
    Line fill = hfill_line(hc->ty, hc->sides, hc->cap);
    Line motive{fill.var, eval(ec->env.bind(ec->motive_var, fill.body), ec->motive)};
    std::vector<VSide> sides;
    for (const auto& sd : hc->sides)
      sides.push_back(VSide{sd.face, Line{sd.line.var, elim_apply(ec, sd.line.body)}});
    return comp_value(motive, sides, elim_apply(ec, hc->cap));
  }
  if (vas<VNe>(v)) {
    ValuePtr ty = eval(ec->env.bind(ec->motive_var, v), ec->motive);
    return mkv(VNe{mkne(NElim{ec, vas<VNe>(v)->ne}), ty});
  }
  eval_fail(EvalError::Kind::Internal, "eliminator applied to a non-inductive value");
}

// ---------------------------------------------------------------------------
// Constructors and the two Kan primitives

inline ValuePtr make_constructor(const HITDecl* decl, int ctor, std::vector<ValuePtr> params,
                                 std::vector<ValuePtr> args, std::vector<DimExpr> dims) {
  const CtorDecl& c = decl->ctors[ctor];
  if (!c.boundary.empty()) {
    DimSubst s;
    for (std::size_t m = 0; m < c.dims.size(); ++m) s.bind(c.dims[m], dims[m]);
    for (const auto& [f, e] : c.boundary) {
      if (!face_subst(f, s).is_one()) continue;
      // boundary terms mention only parameters, arguments, dimension
      // arguments and earlier constructors, so this environment is complete
      Env env;
      for (std::size_t p = 0; p < params.size(); ++p) env = env.bind(decl->params[p].var, params[p]);
      for (std::size_t m = 0; m < args.size(); ++m) env = env.bind(c.args[m].var, args[m]);
      for (std::size_t m = 0; m < dims.size(); ++m) env = env.bind_dim(c.dims[m], dims[m]);
      return eval(env, e);
    }
  }
  return mkv(VCtor{decl, ctor, std::move(params), std::move(args), std::move(dims)});
}

inline ValuePtr hcomp_value(const ValuePtr& ty, std::vector<VSide> sides, const ValuePtr& cap) {
  std::vector<VSide> keep;
  keep.reserve(sides.size());
  for (auto& sd : sides) {
    if (sd.face.is_zero()) continue;
    if (sd.face.is_one()) return line_at(sd.line, dim1());
    keep.push_back(std::move(sd));
  }
  if (vas<VU>(ty))
    eval_fail(EvalError::Kind::UnsupportedUniverseKan, "composition at the universe");
  if (vas<VNe>(ty)) return mkv(VNe{mkne(NHcompNe{ty, std::move(keep), cap}), ty});
  if (vas<VPi>(ty) || vas<VSigma>(ty) || vas<VPathP>(ty) || vas<VHitTy>(ty))
    return mkv(VHcomp{ty, std::move(keep), cap});
  eval_fail(EvalError::Kind::Internal, "composition at a non-type value");
}

namespace detail {

inline Line hit_param_line(const Line& line, std::size_t k) {
  return Line{line.var, vas<VHitTy>(line.body)->params[k]};
}

// Per-declaration transport rules for the built-in parameterized HITs.
inline ValuePtr trans_ctor_direct(const Line& line, const FaceFormula& phi, const VCtor& c) {
  const auto* h = vas<VHitTy>(line.body);
  const HITDecl* d = c.decl;
  std::vector<ValuePtr> params1;
  for (const auto& p : h->params)
    params1.push_back(act(p, DimSubst::single(line.var, dim1())));

  if (d->name == "Susp") {
    // N and S are fixed; merid transports its point argument
    if (c.args.empty()) return make_constructor(d, c.ctor, params1, {}, c.dims);
    ValuePtr a1 = ctrans_value(hit_param_line(line, 0), phi, c.args[0]);
    return make_constructor(d, c.ctor, params1, {a1}, c.dims);
  }
  if (d->name == "Trunc") {
    if (c.ctor == 0) {  // inc
      ValuePtr a1 = ctrans_value(hit_param_line(line, 0), phi, c.args[0]);
      return make_constructor(d, 0, params1, {a1}, c.dims);
    }
    // sq: both arguments are recursive and transport along the same line
    ValuePtr v1 = trans_value(line, phi, c.args[0]);
    ValuePtr w1 = trans_value(line, phi, c.args[1]);
    return make_constructor(d, 1, params1, {v1, w1}, c.dims);
  }
  if (d->name == "Push") {
    if (c.ctor == 0 || c.ctor == 1) {  // inl / inr
      Line arg_line = hit_param_line(line, c.ctor == 0 ? 0 : 1);
      ValuePtr a1 = ctrans_value(arg_line, phi, c.args[0]);
      return make_constructor(d, c.ctor, params1, {a1}, c.dims);
    }
    // push c r: transport the point of the span apex, then correct the two
    // endpoint mismatches with a composition
    const DimExpr& r = c.dims[0];
    Line c_fill = ctrans_fill_line(hit_param_line(line, 2), phi, c.args[0]);
    ValuePtr c1 = line_at(c_fill, dim1());
    ValuePtr core = make_constructor(d, 2, params1, {c1}, c.dims);

    auto endpoint_line = [&](int ctor, std::size_t fn_param) {
      DimName i2 = fresh_dim(line.var.hint);
      DimSubst to_i2 = DimSubst::single(line.var, dim_atom(i2));
      std::vector<ValuePtr> ps;
      for (const auto& p : h->params) ps.push_back(act(p, to_i2));
      ValuePtr fn = ps[fn_param];
      ValuePtr point = act(c_fill.body, DimSubst::single(c_fill.var, dim_atom(i2)));
      return Line{i2, make_constructor(d, ctor, ps, {apply_val(fn, point)}, {})};
    };
    std::vector<VSide> sides;
    sides.push_back(VSide{face_of_dim(r, false),
                          reverse_line(squeeze_line(line, phi, endpoint_line(0, 3)))});
    sides.push_back(VSide{face_of_dim(r, true),
                          reverse_line(squeeze_line(line, phi, endpoint_line(1, 4)))});
    if (!phi.is_zero())
      sides.push_back(VSide{phi, const_line(mkv(VCtor{c.decl, c.ctor, c.params, c.args, c.dims}))});
    return hcomp_value(line_at(line, dim1()), std::move(sides), core);
  }
  // no specialized rule: fall back to the schema-generic algorithm
  return generic_trans_ctor(line, phi, c);
}

}  // namespace detail

inline ValuePtr trans_value(const Line& line, const FaceFormula& phi, const ValuePtr& cap) {
  if (phi.is_one()) return cap;  // the line is constant on phi
  return std::visit(
      overloaded{
          [&](const VU&) -> ValuePtr {
            eval_fail(EvalError::Kind::UnsupportedUniverseKan, "transport at the universe");
          },
          [&](const VPi&) -> ValuePtr { return mkv(VTrans{line, phi, cap}); },
          [&](const VSigma&) -> ValuePtr { return mkv(VTrans{line, phi, cap}); },
          [&](const VPathP&) -> ValuePtr { return mkv(VTrans{line, phi, cap}); },
          [&](const VHitTy& h) -> ValuePtr {
            if (h.decl->params.empty()) return cap;  // the line is degenerate
            if (const auto* c = vas<VCtor>(cap)) {
              if (generic_transport_enabled()) return generic_trans_ctor(line, phi, *c);
              return detail::trans_ctor_direct(line, phi, *c);
            }
            if (const auto* hc = vas<VHcomp>(cap)) {
              // transport commutes with composition, side by side
              std::vector<VSide> sides;
              for (const auto& sd : hc->sides)
                sides.push_back(
                    VSide{sd.face, Line{sd.line.var, trans_value(line, phi, sd.line.body)}});
              return hcomp_value(line_at(line, dim1()), std::move(sides),
                                 trans_value(line, phi, hc->cap));
            }
            if (vas<VNe>(cap))
              return mkv(VNe{mkne(NTrans{line, phi, cap}), line_at(line, dim1())});
            eval_fail(EvalError::Kind::Internal, "transport of a non-value at an inductive type");
          },
          [&](const VNe&) -> ValuePtr {
            return mkv(VNe{mkne(NTrans{line, phi, cap}), line_at(line, dim1())});
          },
          [&](const auto&) -> ValuePtr {
            eval_fail(EvalError::Kind::Internal, "transport along a non-type line");
          },
      },
      line.body->v);
}

// ---------------------------------------------------------------------------
// Derived Kan operations, at the value level

// squeeze^i A phi u : a line from u(0) transported all the way to A(1), to
// u(1) untouched.  out(i) = trans^j A(i \/ j) (phi \/ (i=1)) u(i).
inline Line squeeze_line(const Line& ty, const FaceFormula& phi, const Line& u) {
  DimName i = fresh_dim(ty.var.hint);
  DimName j = fresh_dim("j");
  ValuePtr at = act(ty.body, DimSubst::single(ty.var, dim_join(dim_atom(i), dim_atom(j))));
  FaceFormula face = face_or(phi, FaceFormula::eq(i, true));
  return Line{i, trans_value(Line{j, at}, face, line_at(u, dim_atom(i)))};
}

// comp^i A [psi -> u] u0 = hcomp_{A(1)} [psi -> squeeze u] (trans A u0)
inline ValuePtr comp_value(const Line& line, const std::vector<VSide>& sides,
                           const ValuePtr& cap) {
  std::vector<VSide> squeezed;
  squeezed.reserve(sides.size());
  for (const auto& sd : sides)
    squeezed.push_back(VSide{sd.face, squeeze_line(line, FaceFormula::zero(), sd.line)});
  return hcomp_value(line_at(line, dim1()), std::move(squeezed),
                     trans_value(line, FaceFormula::zero(), cap));
}

// hfill^j [psi -> u] u0 : the filler line of a composition.
// out(j) = hcomp^k [psi -> u(j /\ k), (j=0) -> u0] u0.
inline Line hfill_line(const ValuePtr& ty, const std::vector<VSide>& sides, const ValuePtr& cap) {
  DimName j = fresh_dim("j");
  std::vector<VSide> cut;
  cut.reserve(sides.size() + 1);
  for (const auto& sd : sides) {
    DimName k = fresh_dim("k");
    cut.push_back(VSide{
        sd.face,
        Line{k, act(sd.line.body,
                    DimSubst::single(sd.line.var, dim_meet(dim_atom(j), dim_atom(k))))}});
  }
  cut.push_back(VSide{FaceFormula::eq(j, false), const_line(cap)});
  return Line{j, hcomp_value(ty, std::move(cut), cap)};
}

// transFill^i A phi u0 : the transport filler.
// out(i) = trans^j A(i /\ j) (phi \/ (i=0)) u0.
inline Line trans_fill_line(const Line& line, const FaceFormula& phi, const ValuePtr& cap) {
  DimName i = fresh_dim(line.var.hint);
  DimName j = fresh_dim("j");
  ValuePtr at = act(line.body, DimSubst::single(line.var, dim_meet(dim_atom(i), dim_atom(j))));
  return Line{i, trans_value(Line{j, at}, face_or(phi, FaceFormula::eq(i, false)), cap)};
}

// ctrans: transport constant on phi in the cap only (the line itself need not
// be constant there): comp^i A [phi -> u0] u0.
inline ValuePtr ctrans_value(const Line& line, const FaceFormula& phi, const ValuePtr& cap) {
  std::vector<VSide> sides;
  if (!phi.is_zero()) sides.push_back(VSide{phi, const_line(cap)});
  return comp_value(line, sides, cap);
}

inline Line ctrans_fill_line(const Line& line, const FaceFormula& phi, const ValuePtr& cap) {
  DimName i = fresh_dim(line.var.hint);
  DimName j = fresh_dim("j");
  ValuePtr at = act(line.body, DimSubst::single(line.var, dim_meet(dim_atom(i), dim_atom(j))));
  return Line{i, ctrans_value(Line{j, at}, face_or(phi, FaceFormula::eq(i, false)), cap)};
}

// ---------------------------------------------------------------------------
// Schema-generic transport of a constructor along a line of its type

inline ValuePtr generic_trans_ctor(const Line& line, const FaceFormula& phi, const VCtor& c) {
  const auto* h = vas<VHitTy>(line.body);
  const HITDecl* d = c.decl;
  const CtorDecl& cd = d->ctors[c.ctor];

  auto params_at = [&](const DimExpr& r) {
    std::vector<ValuePtr> out;
    for (const auto& p : h->params) out.push_back(act(p, DimSubst::single(line.var, r)));
    return out;
  };

  // transport fillers for the telescope: recursive entries ride the declared
  // line, the others ride their own instantiated type lines
  std::vector<Line> fills;
  for (std::size_t m = 0; m < cd.args.size(); ++m) {
    const TeleEntry& e = cd.args[m];
    if (e.recursive) {
      fills.push_back(trans_fill_line(line, phi, c.args[m]));
      continue;
    }
    DimName i2 = fresh_dim(line.var.hint);
    Env env;
    DimSubst to_i2 = DimSubst::single(line.var, dim_atom(i2));
    for (std::size_t p = 0; p < h->params.size(); ++p)
      env = env.bind(d->params[p].var, act(h->params[p], to_i2));
    for (std::size_t k = 0; k < m; ++k)
      env = env.bind(cd.args[k].var,
                     act(fills[k].body, DimSubst::single(fills[k].var, dim_atom(i2))));
    fills.push_back(ctrans_fill_line(Line{i2, eval(env, e.type)}, phi, c.args[m]));
  }

  std::vector<ValuePtr> args1;
  for (std::size_t m = 0; m < fills.size(); ++m) args1.push_back(line_at(fills[m], dim1()));
  ValuePtr core = make_constructor(d, c.ctor, params_at(dim1()), std::move(args1), c.dims);

  // one correcting side per boundary entry, built from the squeeze of the
  // boundary term over the telescope fillers
  DimSubst formal_to_actual;
  for (std::size_t m = 0; m < cd.dims.size(); ++m) formal_to_actual.bind(cd.dims[m], c.dims[m]);
  std::vector<VSide> sides;
  for (const auto& [f, e] : cd.boundary) {
    FaceFormula fs = face_subst(f, formal_to_actual);
    if (fs.is_zero()) continue;
    DimName i2 = fresh_dim(line.var.hint);
    Env env;
    DimSubst to_i2 = DimSubst::single(line.var, dim_atom(i2));
    for (std::size_t p = 0; p < h->params.size(); ++p)
      env = env.bind(d->params[p].var, act(h->params[p], to_i2));
    for (std::size_t m = 0; m < cd.args.size(); ++m)
      env = env.bind(cd.args[m].var,
                     act(fills[m].body, DimSubst::single(fills[m].var, dim_atom(i2))));
    for (std::size_t m = 0; m < cd.dims.size(); ++m) env = env.bind_dim(cd.dims[m], c.dims[m]);
    Line boundary_line{i2, eval(env, e)};
    sides.push_back(VSide{fs, reverse_line(squeeze_line(line, phi, boundary_line))});
  }
  // the constancy side neutralizes the boundary corrections on phi; without
  // them the argument fillers are already exact there and the bare
  // constructor is the answer
  if (sides.empty()) return core;
  if (!phi.is_zero())
    sides.push_back(VSide{phi, const_line(mkv(VCtor{c.decl, c.ctor, c.params, c.args, c.dims}))});
  return hcomp_value(line_at(line, dim1()), std::move(sides), core);
}

// ---------------------------------------------------------------------------
// Readback: type-directed, eta-expanding at functions, pairs and paths

inline TermPtr readback(const ValuePtr& ty, const ValuePtr& v) {
  if (const auto* pi = vas<VPi>(ty)) {
    const auto* lam = vas<VLam>(v);
    TermName x = fresh_var(lam ? lam->body.var.hint : pi->cod.var.hint);
    ValuePtr xv = var_value(x, pi->dom);
    return mk(TLam{x, readback(apply_closure(pi->cod, xv), apply_val(v, xv))});
  }
  if (const auto* sg = vas<VSigma>(ty)) {
    ValuePtr a = fst_val(v);
    return mk(TPair{readback(sg->fst, a), readback(apply_closure(sg->snd, a), snd_val(v))});
  }
  if (const auto* pa = vas<VPathP>(ty)) {
    const auto* pl = vas<VPLam>(v);
    DimName i = fresh_dim(pl ? pl->body.var.hint : pa->ty.var.hint);
    return mk(TPLam{i, readback(line_at(pa->ty, dim_atom(i)), papp(v, dim_atom(i)))});
  }
  if (vas<VU>(ty)) return readback_type(v);
  if (const auto* h = vas<VHitTy>(ty)) {
    if (const auto* c = vas<VCtor>(v)) {
      if (c->decl != h->decl)
        eval_fail(EvalError::Kind::Internal, "constructor at a foreign inductive type");
      const CtorDecl& cd = c->decl->ctors[c->ctor];
      TCtor out{c->decl, c->ctor, {}, {}, c->dims};
      Env env;
      for (std::size_t p = 0; p < c->params.size(); ++p) {
        out.params.push_back(readback(eval(env, c->decl->params[p].type), c->params[p]));
        env = env.bind(c->decl->params[p].var, c->params[p]);
      }
      for (std::size_t m = 0; m < c->args.size(); ++m) {
        out.args.push_back(readback(eval(env, cd.args[m].type), c->args[m]));
        env = env.bind(cd.args[m].var, c->args[m]);
      }
      return mk(std::move(out));
    }
    if (const auto* hc = vas<VHcomp>(v)) {
      DimName j = fresh_dim("j");
      THcomp out{j, readback_type(hc->ty), {}, readback(hc->ty, hc->cap)};
      for (const auto& sd : hc->sides)
        out.sides.emplace_back(sd.face,
                               readback(hc->ty, line_at(sd.line, dim_atom(j))));
      return mk(std::move(out));
    }
    if (const auto* ne = vas<VNe>(v)) return readback_neutral(ne->ne).first;
    eval_fail(EvalError::Kind::Internal, "unreadable value at an inductive type");
  }
  if (vas<VNe>(ty)) {
    if (const auto* ne = vas<VNe>(v)) return readback_neutral(ne->ne).first;
    eval_fail(EvalError::Kind::Internal, "unreadable value at a neutral type");
  }
  eval_fail(EvalError::Kind::Internal, "readback at a non-type");
}

inline TermPtr readback_type(const ValuePtr& ty) {
  return std::visit(
      overloaded{
          [&](const VU&) -> TermPtr { return mk_u(); },
          [&](const VPi& n) -> TermPtr {
            TermName x = fresh_var(n.cod.var.hint);
            return mk(TPi{x, readback_type(n.dom),
                          readback_type(apply_closure(n.cod, var_value(x, n.dom)))});
          },
          [&](const VSigma& n) -> TermPtr {
            TermName x = fresh_var(n.snd.var.hint);
            return mk(TSigma{x, readback_type(n.fst),
                             readback_type(apply_closure(n.snd, var_value(x, n.fst)))});
          },
          [&](const VPathP& n) -> TermPtr {
            DimName i = fresh_dim(n.ty.var.hint);
            return mk(TPathP{i, readback_type(line_at(n.ty, dim_atom(i))),
                             readback(line_at(n.ty, dim0()), n.lhs),
                             readback(line_at(n.ty, dim1()), n.rhs)});
          },
          [&](const VHitTy& n) -> TermPtr {
            THitTy out{n.decl, {}};
            Env env;
            for (std::size_t p = 0; p < n.params.size(); ++p) {
              out.params.push_back(readback(eval(env, n.decl->params[p].type), n.params[p]));
              env = env.bind(n.decl->params[p].var, n.params[p]);
            }
            return mk(std::move(out));
          },
          [&](const VNe& n) -> TermPtr { return readback_neutral(n.ne).first; },
          [&](const auto&) -> TermPtr {
            eval_fail(EvalError::Kind::Internal, "readback of a non-type as a type");
          },
      },
      ty->v);
}

inline std::pair<TermPtr, ValuePtr> readback_neutral(const NePtr& ne) {
  using R = std::pair<TermPtr, ValuePtr>;
  return std::visit(
      overloaded{
          [&](const NVar& n) -> R { return {mk_var(n.name), n.ty}; },
          [&](const NApp& n) -> R {
            auto [tf, tyf] = readback_neutral(n.fn);
            const auto* pi = vas<VPi>(tyf);
            if (!pi) eval_fail(EvalError::Kind::Internal, "ill-typed application spine");
            return {mk(TApp{tf, readback(pi->dom, n.arg)}), apply_closure(pi->cod, n.arg)};
          },
          [&](const NFst& n) -> R {
            auto [tp, typ] = readback_neutral(n.pair);
            const auto* sg = vas<VSigma>(typ);
            if (!sg) eval_fail(EvalError::Kind::Internal, "ill-typed projection spine");
            return {mk(TFst{tp}), sg->fst};
          },
          [&](const NSnd& n) -> R {
            auto [tp, typ] = readback_neutral(n.pair);
            const auto* sg = vas<VSigma>(typ);
            if (!sg) eval_fail(EvalError::Kind::Internal, "ill-typed projection spine");
            ValuePtr first = mkv(VNe{mkne(NFst{n.pair}), sg->fst});
            return {mk(TSnd{tp}), apply_closure(sg->snd, first)};
          },
          [&](const NPApp& n) -> R {
            auto [tp, typ] = readback_neutral(n.path);
            const auto* pa = vas<VPathP>(typ);
            if (!pa) eval_fail(EvalError::Kind::Internal, "ill-typed path application spine");
            return {mk(TPApp{tp, n.arg}), line_at(pa->ty, n.arg)};
          },
          [&](const NElim& n) -> R {
            auto [ts, tys] = readback_neutral(n.scrut);
            const auto* h = vas<VHitTy>(tys);
            if (!h) eval_fail(EvalError::Kind::Internal, "ill-typed eliminator spine");
            const ElimClosure& ec = *n.elim;

            TermName mx = fresh_var(ec.motive_var.hint);
            ValuePtr mxv = var_value(mx, tys);
            TermPtr motive = readback_type(eval(ec.env.bind(ec.motive_var, mxv), ec.motive));

            TElim out{h->decl, mx, motive, {}, ts};
            for (const auto& b : ec.branches) {
              const CtorDecl& cd = h->decl->ctors[b.ctor];
              Env tel_env;
              for (std::size_t p = 0; p < h->params.size(); ++p)
                tel_env = tel_env.bind(h->decl->params[p].var, h->params[p]);
              ElimBranch rb{b.ctor, {}, {}, {}, nullptr};
              Env benv = ec.env;
              std::vector<ValuePtr> arg_vals;
              std::size_t ih = 0;
              for (std::size_t m = 0; m < cd.args.size(); ++m) {
                ValuePtr aty = eval(tel_env, cd.args[m].type);
                TermName ax = fresh_var(b.args[m].hint);
                ValuePtr av = var_value(ax, aty);
                rb.args.push_back(ax);
                arg_vals.push_back(av);
                benv = benv.bind(b.args[m], av);
                tel_env = tel_env.bind(cd.args[m].var, av);
                if (cd.args[m].recursive) {
                  ValuePtr ihty = eval(ec.env.bind(ec.motive_var, av), ec.motive);
                  TermName ix = fresh_var(b.ihs[ih].hint);
                  rb.ihs.push_back(ix);
                  benv = benv.bind(b.ihs[ih], var_value(ix, ihty));
                  ++ih;
                }
              }
              std::vector<DimExpr> dim_vals;
              for (std::size_t m = 0; m < cd.dims.size(); ++m) {
                DimName dx = fresh_dim(b.dims[m].hint);
                rb.dims.push_back(dx);
                dim_vals.push_back(dim_atom(dx));
                benv = benv.bind_dim(b.dims[m], dim_atom(dx));
              }
              ValuePtr generic = make_constructor(h->decl, b.ctor, h->params, arg_vals, dim_vals);
              ValuePtr bty = eval(ec.env.bind(ec.motive_var, generic), ec.motive);
              rb.body = readback(bty, eval(benv, b.body));
              out.branches.push_back(std::move(rb));
            }
            ValuePtr scrut_val = mkv(VNe{n.scrut, tys});
            ValuePtr res_ty = eval(ec.env.bind(ec.motive_var, scrut_val), ec.motive);
            return {mk(std::move(out)), res_ty};
          },
          [&](const NHcompNe& n) -> R {
            DimName j = fresh_dim("j");
            THcomp out{j, readback_type(n.ty), {}, readback(n.ty, n.cap)};
            for (const auto& sd : n.sides)
              out.sides.emplace_back(sd.face, readback(n.ty, line_at(sd.line, dim_atom(j))));
            return {mk(std::move(out)), n.ty};
          },
          [&](const NTrans& n) -> R {
            DimName i = fresh_dim(n.ty.var.hint);
            TTrans out{i, readback_type(line_at(n.ty, dim_atom(i))), n.phi,
                       readback(line_at(n.ty, dim0()), n.cap)};
            return {mk(std::move(out)), line_at(n.ty, dim1())};
          },
      },
      ne->v);
}

}  // namespace chit
