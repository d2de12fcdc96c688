#pragma once

// Type-directed conversion checking.  Eta-expands at functions, pairs and
// paths (which also forces the lazy Kan values there), compares neutral
// spines structurally, and implements restricted conversion — equality in a
// context constrained by a face formula — by substituting each conjunction
// of the face and comparing the restrictions.

#include <optional>

#include "chit/eval.hpp"

namespace chit {

bool convert(const ValuePtr& ty, const ValuePtr& a, const ValuePtr& b);
bool convert_type(const ValuePtr& a, const ValuePtr& b);
std::optional<ValuePtr> convert_neutral(const NePtr& x, const NePtr& y);

namespace detail {

inline bool convert_sides(const ValuePtr& ty, const std::vector<VSide>& xs,
                          const std::vector<VSide>& ys) {
  if (xs.size() != ys.size()) return false;
  std::vector<bool> used(ys.size(), false);
  for (const auto& sx : xs) {
    bool found = false;
    for (std::size_t k = 0; k < ys.size() && !found; ++k) {
      if (used[k] || !(sx.face == ys[k].face)) continue;
      DimName j = fresh_dim("j");
      if (convert(ty, line_at(sx.line, dim_atom(j)), line_at(ys[k].line, dim_atom(j)))) {
        used[k] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline bool convert_telescope(const HITDecl* decl, const VCtor& a, const VCtor& b) {
  Env env;
  for (std::size_t p = 0; p < a.params.size(); ++p) {
    if (!convert(eval(env, decl->params[p].type), a.params[p], b.params[p])) return false;
    env = env.bind(decl->params[p].var, a.params[p]);
  }
  const CtorDecl& cd = decl->ctors[a.ctor];
  for (std::size_t m = 0; m < a.args.size(); ++m) {
    if (!convert(eval(env, cd.args[m].type), a.args[m], b.args[m])) return false;
    env = env.bind(cd.args[m].var, a.args[m]);
  }
  for (std::size_t m = 0; m < a.dims.size(); ++m)
    if (!dim_eq(a.dims[m], b.dims[m])) return false;
  return true;
}

}  // namespace detail

inline bool convert(const ValuePtr& ty, const ValuePtr& a, const ValuePtr& b) {
  if (a.get() == b.get()) return true;
  if (const auto* pi = vas<VPi>(ty)) {
    ValuePtr xv = var_value(fresh_var(pi->cod.var.hint), pi->dom);
    return convert(apply_closure(pi->cod, xv), apply_val(a, xv), apply_val(b, xv));
  }
  if (const auto* sg = vas<VSigma>(ty)) {
    ValuePtr fa = fst_val(a);
    if (!convert(sg->fst, fa, fst_val(b))) return false;
    return convert(apply_closure(sg->snd, fa), snd_val(a), snd_val(b));
  }
  if (const auto* pa = vas<VPathP>(ty)) {
    DimExpr i = dim_atom(fresh_dim(pa->ty.var.hint));
    return convert(line_at(pa->ty, i), papp(a, i), papp(b, i));
  }
  if (vas<VU>(ty)) return convert_type(a, b);
  if (vas<VHitTy>(ty)) {
    if (const auto* ca = vas<VCtor>(a)) {
      const auto* cb = vas<VCtor>(b);
      if (!cb || ca->decl != cb->decl || ca->ctor != cb->ctor) return false;
      return detail::convert_telescope(ca->decl, *ca, *cb);
    }
    if (const auto* ha = vas<VHcomp>(a)) {
      const auto* hb = vas<VHcomp>(b);
      if (!hb || !convert(ty, ha->cap, hb->cap)) return false;
      return detail::convert_sides(ty, ha->sides, hb->sides);
    }
    if (const auto* na = vas<VNe>(a)) {
      const auto* nb = vas<VNe>(b);
      return nb && convert_neutral(na->ne, nb->ne).has_value();
    }
    return false;
  }
  if (vas<VNe>(ty)) {
    const auto* na = vas<VNe>(a);
    const auto* nb = vas<VNe>(b);
    return na && nb && convert_neutral(na->ne, nb->ne).has_value();
  }
  return false;
}

inline bool convert_type(const ValuePtr& a, const ValuePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  if (vas<VU>(a)) return true;
  if (const auto* pa = vas<VPi>(a)) {
    const auto* pb = vas<VPi>(b);
    if (!convert_type(pa->dom, pb->dom)) return false;
    ValuePtr xv = var_value(fresh_var(pa->cod.var.hint), pa->dom);
    return convert_type(apply_closure(pa->cod, xv), apply_closure(pb->cod, xv));
  }
  if (const auto* sa = vas<VSigma>(a)) {
    const auto* sb = vas<VSigma>(b);
    if (!convert_type(sa->fst, sb->fst)) return false;
    ValuePtr xv = var_value(fresh_var(sa->snd.var.hint), sa->fst);
    return convert_type(apply_closure(sa->snd, xv), apply_closure(sb->snd, xv));
  }
  if (const auto* la = vas<VPathP>(a)) {
    const auto* lb = vas<VPathP>(b);
    DimExpr i = dim_atom(fresh_dim(la->ty.var.hint));
    if (!convert_type(line_at(la->ty, i), line_at(lb->ty, i))) return false;
    return convert(line_at(la->ty, dim0()), la->lhs, lb->lhs) &&
           convert(line_at(la->ty, dim1()), la->rhs, lb->rhs);
  }
  if (const auto* ha = vas<VHitTy>(a)) {
    const auto* hb = vas<VHitTy>(b);
    if (ha->decl != hb->decl) return false;
    Env env;
    for (std::size_t p = 0; p < ha->params.size(); ++p) {
      if (!convert(eval(env, ha->decl->params[p].type), ha->params[p], hb->params[p]))
        return false;
      env = env.bind(ha->decl->params[p].var, ha->params[p]);
    }
    return true;
  }
  if (const auto* na = vas<VNe>(a))
    return convert_neutral(na->ne, vas<VNe>(b)->ne).has_value();
  return false;
}

inline std::optional<ValuePtr> convert_neutral(const NePtr& x, const NePtr& y) {
  using R = std::optional<ValuePtr>;
  if (x->v.index() != y->v.index()) return std::nullopt;
  return std::visit(
      overloaded{
          [&](const NVar& n) -> R {
            const auto& m = std::get<NVar>(y->v);
            if (n.name != m.name) return std::nullopt;
            return n.ty;
          },
          [&](const NApp& n) -> R {
            const auto& m = std::get<NApp>(y->v);
            auto fn_ty = convert_neutral(n.fn, m.fn);
            if (!fn_ty) return std::nullopt;
            const auto* pi = vas<VPi>(*fn_ty);
            if (!pi || !convert(pi->dom, n.arg, m.arg)) return std::nullopt;
            return apply_closure(pi->cod, n.arg);
          },
          [&](const NFst& n) -> R {
            const auto& m = std::get<NFst>(y->v);
            auto pty = convert_neutral(n.pair, m.pair);
            if (!pty) return std::nullopt;
            return vas<VSigma>(*pty)->fst;
          },
          [&](const NSnd& n) -> R {
            const auto& m = std::get<NSnd>(y->v);
            auto pty = convert_neutral(n.pair, m.pair);
            if (!pty) return std::nullopt;
            const auto* sg = vas<VSigma>(*pty);
            return apply_closure(sg->snd, mkv(VNe{mkne(NFst{n.pair}), sg->fst}));
          },
          [&](const NPApp& n) -> R {
            const auto& m = std::get<NPApp>(y->v);
            auto pty = convert_neutral(n.path, m.path);
            if (!pty || !dim_eq(n.arg, m.arg)) return std::nullopt;
            return line_at(vas<VPathP>(*pty)->ty, n.arg);
          },
          [&](const NElim& n) -> R {
            const auto& m = std::get<NElim>(y->v);
            auto sty = convert_neutral(n.scrut, m.scrut);
            if (!sty) return std::nullopt;
            const auto* h = vas<VHitTy>(*sty);
            if (!h) return std::nullopt;
            const ElimClosure& ea = *n.elim;
            const ElimClosure& eb = *m.elim;
            auto result_ty = [&] {
              return eval(ea.env.bind(ea.motive_var, mkv(VNe{n.scrut, *sty})), ea.motive);
            };
            if (n.elim.get() == m.elim.get()) return result_ty();
            if (ea.branches.size() != eb.branches.size()) return std::nullopt;

            ValuePtr mx = var_value(fresh_var(ea.motive_var.hint), *sty);
            if (!convert_type(eval(ea.env.bind(ea.motive_var, mx), ea.motive),
                              eval(eb.env.bind(eb.motive_var, mx), eb.motive)))
              return std::nullopt;
            for (std::size_t k = 0; k < ea.branches.size(); ++k) {
              const ElimBranch& ba = ea.branches[k];
              const ElimBranch& bb = eb.branches[k];
              if (ba.ctor != bb.ctor || ba.args.size() != bb.args.size() ||
                  ba.ihs.size() != bb.ihs.size() || ba.dims.size() != bb.dims.size())
                return std::nullopt;
              const CtorDecl& cd = h->decl->ctors[ba.ctor];
              Env tel_env;
              for (std::size_t p = 0; p < h->params.size(); ++p)
                tel_env = tel_env.bind(h->decl->params[p].var, h->params[p]);
              Env env_a = ea.env, env_b = eb.env;
              std::vector<ValuePtr> arg_vals;
              std::size_t ih = 0;
              for (std::size_t q = 0; q < cd.args.size(); ++q) {
                ValuePtr aty = eval(tel_env, cd.args[q].type);
                ValuePtr av = var_value(fresh_var(ba.args[q].hint), aty);
                arg_vals.push_back(av);
                env_a = env_a.bind(ba.args[q], av);
                env_b = env_b.bind(bb.args[q], av);
                tel_env = tel_env.bind(cd.args[q].var, av);
                if (cd.args[q].recursive) {
                  ValuePtr ihty = eval(ea.env.bind(ea.motive_var, av), ea.motive);
                  ValuePtr iv = var_value(fresh_var(ba.ihs[ih].hint), ihty);
                  env_a = env_a.bind(ba.ihs[ih], iv);
                  env_b = env_b.bind(bb.ihs[ih], iv);
                  ++ih;
                }
              }
              std::vector<DimExpr> dim_vals;
              for (std::size_t q = 0; q < cd.dims.size(); ++q) {
                DimExpr dv = dim_atom(fresh_dim(ba.dims[q].hint));
                dim_vals.push_back(dv);
                env_a = env_a.bind_dim(ba.dims[q], dv);
                env_b = env_b.bind_dim(bb.dims[q], dv);
              }
              ValuePtr generic = make_constructor(h->decl, ba.ctor, h->params, arg_vals, dim_vals);
              ValuePtr bty = eval(ea.env.bind(ea.motive_var, generic), ea.motive);
              if (!convert(bty, eval(env_a, ba.body), eval(env_b, bb.body)))
                return std::nullopt;
            }
            return result_ty();
          },
          [&](const NHcompNe& n) -> R {
            const auto& m = std::get<NHcompNe>(y->v);
            if (!convert_type(n.ty, m.ty)) return std::nullopt;
            if (!convert(n.ty, n.cap, m.cap)) return std::nullopt;
            if (!detail::convert_sides(n.ty, n.sides, m.sides)) return std::nullopt;
            return n.ty;
          },
          [&](const NTrans& n) -> R {
            const auto& m = std::get<NTrans>(y->v);
            if (!(n.phi == m.phi)) return std::nullopt;
            DimExpr i = dim_atom(fresh_dim(n.ty.var.hint));
            if (!convert_type(line_at(n.ty, i), line_at(m.ty, i))) return std::nullopt;
            if (!convert(line_at(n.ty, dim0()), n.cap, m.cap)) return std::nullopt;
            return line_at(n.ty, dim1());
          },
      },
      x->v);
}

// Equality in the context restricted by a face: check under every
// conjunction.  The empty formula is the empty restriction's vacuous truth;
// the full formula is ordinary conversion.
inline bool convert_under(const FaceFormula& phi, const ValuePtr& ty, const ValuePtr& a,
                          const ValuePtr& b) {
  for (const auto& conj : phi.conjs()) {
    DimSubst s = conj_subst(conj);
    if (!convert(act(ty, s), act(a, s), act(b, s))) return false;
  }
  return true;
}

inline bool convert_type_under(const FaceFormula& phi, const ValuePtr& a, const ValuePtr& b) {
  for (const auto& conj : phi.conjs()) {
    DimSubst s = conj_subst(conj);
    if (!convert_type(act(a, s), act(b, s))) return false;
  }
  return true;
}

}  // namespace chit
