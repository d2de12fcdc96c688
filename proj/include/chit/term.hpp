#pragma once

// Core term syntax: dependent functions, pairs, paths, a single universe,
// the built-in higher inductive types, and the two Kan primitives
// (homogeneous composition and transport).  Derived operations (comp, hfill,
// transFill, ctrans, squeeze) are surface sugar expanded by the parser.

#include <cassert>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chit/dim.hpp"

namespace chit {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct TermName {
  std::uint64_t id = 0;
  std::string hint;
};

inline bool operator==(const TermName& a, const TermName& b) { return a.id == b.id; }
inline bool operator!=(const TermName& a, const TermName& b) { return a.id != b.id; }
inline bool operator<(const TermName& a, const TermName& b) { return a.id < b.id; }

inline TermName fresh_var(const std::string& hint = "x") {
  return TermName{next_name_id(), hint};
}

struct Pos {
  int line = 0, col = 0;  // 0 = synthesized, no source location
  bool known() const { return line > 0; }
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;
struct HITDecl;

using System = std::vector<std::pair<FaceFormula, TermPtr>>;

struct TVar { TermName name; };
struct TGlobal { std::string name; };
struct TU {};
struct TPi { TermName var; TermPtr dom, cod; };
struct TLam { TermName var; TermPtr body; };
struct TApp { TermPtr fn, arg; };
struct TSigma { TermName var; TermPtr fst, snd; };
struct TPair { TermPtr fst, snd; };
struct TFst { TermPtr pair; };
struct TSnd { TermPtr pair; };
struct TPathP { DimName dim; TermPtr ty, lhs, rhs; };  // Path^i A a b
struct TPLam { DimName dim; TermPtr body; };
struct TPApp { TermPtr path; DimExpr arg; };
struct THitTy { const HITDecl* decl; std::vector<TermPtr> params; };

// Constructor applications carry the parameters of their type; the parser
// fills them from an ascription, the checker from the expected type.
struct TCtor {
  const HITDecl* decl;
  int ctor;
  std::vector<TermPtr> params;
  std::vector<TermPtr> args;
  std::vector<DimExpr> dims;
};

struct THcomp {
  DimName dim;  // bound in the sides only
  TermPtr ty;
  System sides;
  TermPtr cap;
};

struct TTrans {
  DimName dim;  // bound in the type line
  TermPtr ty;
  FaceFormula phi;
  TermPtr cap;
};

struct ElimBranch {
  int ctor;
  std::vector<TermName> args;  // one binder per telescope entry
  std::vector<TermName> ihs;   // one binder per recursive entry
  std::vector<DimName> dims;
  TermPtr body;
};

struct TElim {
  const HITDecl* decl;
  TermName motive_var;
  TermPtr motive;
  std::vector<ElimBranch> branches;
  TermPtr scrut;
};

struct TAsc { TermPtr tm, ty; };

using TermV = std::variant<TVar, TGlobal, TU, TPi, TLam, TApp, TSigma, TPair, TFst,
                           TSnd, TPathP, TPLam, TPApp, THitTy, TCtor, THcomp, TTrans,
                           TElim, TAsc>;

struct Term {
  TermV v;
  Pos pos;
};

inline TermPtr mk(TermV v, Pos pos = {}) {
  return std::make_shared<Term>(Term{std::move(v), pos});
}

inline TermPtr mk_var(const TermName& n, Pos pos = {}) { return mk(TVar{n}, pos); }
inline TermPtr mk_u() { return mk(TU{}); }

template <class T>
const T* as(const TermPtr& t) {
  return std::get_if<T>(&t->v);
}

// ---------------------------------------------------------------------------
// Higher inductive type declarations

struct TeleEntry {
  TermName var;
  TermPtr type;
  bool recursive = false;  // entry is exactly the declared type D(params)
};

using Telescope = std::vector<TeleEntry>;

struct CtorDecl {
  std::string name;
  Telescope args;              // over params and earlier entries
  std::vector<DimName> dims;   // formal dimension arguments
  System boundary;             // faces over dims; terms over params/args/dims
};

struct HITDecl {
  std::string name;
  Telescope params;
  std::vector<CtorDecl> ctors;

  int ctor_index(const std::string& c) const {
    for (std::size_t k = 0; k < ctors.size(); ++k)
      if (ctors[k].name == c) return static_cast<int>(k);
    return -1;
  }
};

// ---------------------------------------------------------------------------
// Free variables

inline void term_free_dims_into(const TermPtr& t, std::set<std::uint64_t>& bound,
                                std::vector<DimName>& out) {
  auto dim_into = [&](const DimExpr& r) {
    for (const auto& n : dim_free_names(r))
      if (!bound.count(n.id)) out.push_back(n);
  };
  auto face_into = [&](const FaceFormula& f) {
    for (const auto& n : face_free_names(f))
      if (!bound.count(n.id)) out.push_back(n);
  };
  std::visit(
      overloaded{
          [&](const TVar&) {}, [&](const TGlobal&) {}, [&](const TU&) {},
          [&](const TPi& n) {
            term_free_dims_into(n.dom, bound, out);
            term_free_dims_into(n.cod, bound, out);
          },
          [&](const TLam& n) { term_free_dims_into(n.body, bound, out); },
          [&](const TApp& n) {
            term_free_dims_into(n.fn, bound, out);
            term_free_dims_into(n.arg, bound, out);
          },
          [&](const TSigma& n) {
            term_free_dims_into(n.fst, bound, out);
            term_free_dims_into(n.snd, bound, out);
          },
          [&](const TPair& n) {
            term_free_dims_into(n.fst, bound, out);
            term_free_dims_into(n.snd, bound, out);
          },
          [&](const TFst& n) { term_free_dims_into(n.pair, bound, out); },
          [&](const TSnd& n) { term_free_dims_into(n.pair, bound, out); },
          [&](const TPathP& n) {
            bool fresh = bound.insert(n.dim.id).second;
            term_free_dims_into(n.ty, bound, out);
            if (fresh) bound.erase(n.dim.id);
            term_free_dims_into(n.lhs, bound, out);
            term_free_dims_into(n.rhs, bound, out);
          },
          [&](const TPLam& n) {
            bool fresh = bound.insert(n.dim.id).second;
            term_free_dims_into(n.body, bound, out);
            if (fresh) bound.erase(n.dim.id);
          },
          [&](const TPApp& n) {
            term_free_dims_into(n.path, bound, out);
            dim_into(n.arg);
          },
          [&](const THitTy& n) {
            for (const auto& p : n.params) term_free_dims_into(p, bound, out);
          },
          [&](const TCtor& n) {
            for (const auto& p : n.params) term_free_dims_into(p, bound, out);
            for (const auto& a : n.args) term_free_dims_into(a, bound, out);
            for (const auto& r : n.dims) dim_into(r);
          },
          [&](const THcomp& n) {
            term_free_dims_into(n.ty, bound, out);
            bool fresh = bound.insert(n.dim.id).second;
            for (const auto& [f, s] : n.sides) {
              face_into(f);  // faces never mention the bound direction
              term_free_dims_into(s, bound, out);
            }
            if (fresh) bound.erase(n.dim.id);
            term_free_dims_into(n.cap, bound, out);
          },
          [&](const TTrans& n) {
            bool fresh = bound.insert(n.dim.id).second;
            term_free_dims_into(n.ty, bound, out);
            if (fresh) bound.erase(n.dim.id);
            face_into(n.phi);
            term_free_dims_into(n.cap, bound, out);
          },
          [&](const TElim& n) {
            term_free_dims_into(n.motive, bound, out);
            for (const auto& b : n.branches) {
              std::vector<std::uint64_t> added;
              for (const auto& d : b.dims)
                if (bound.insert(d.id).second) added.push_back(d.id);
              term_free_dims_into(b.body, bound, out);
              for (auto id : added) bound.erase(id);
            }
            term_free_dims_into(n.scrut, bound, out);
          },
          [&](const TAsc& n) {
            term_free_dims_into(n.tm, bound, out);
            term_free_dims_into(n.ty, bound, out);
          },
      },
      t->v);
}

inline std::vector<DimName> term_free_dims(const TermPtr& t) {
  std::set<std::uint64_t> bound;
  std::vector<DimName> out;
  term_free_dims_into(t, bound, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const DimName& a, const DimName& b) { return a.id == b.id; }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Dimension substitution on terms (capture-avoiding)

namespace detail {

inline std::set<std::uint64_t> subst_range_names(const DimSubst& s) {
  std::set<std::uint64_t> out;
  for (const auto& [id, r] : s.entries())
    for (const auto& n : dim_free_names(r)) out.insert(n.id);
  return out;
}

}  // namespace detail

inline TermPtr term_dim_subst(const TermPtr& t, const DimSubst& s);

namespace detail {

// Re-binds a dimension binder when it would capture or be rewritten.
inline std::pair<DimName, DimSubst> freshen_dim_binder(const DimName& d, const DimSubst& s,
                                                       const std::set<std::uint64_t>& range) {
  if (!s.lookup(d) && !range.count(d.id)) return {d, s};
  DimName d2 = fresh_dim(d.hint);
  DimSubst s2 = s;
  s2.bind(d, dim_atom(d2));
  return {d2, s2};
}

inline TermPtr dim_subst_go(const TermPtr& t, const DimSubst& s,
                            const std::set<std::uint64_t>& range) {
  auto go = [&](const TermPtr& u) { return dim_subst_go(u, s, range); };
  return std::visit(
      overloaded{
          [&](const TVar&) { return t; }, [&](const TGlobal&) { return t; },
          [&](const TU&) { return t; },
          [&](const TPi& n) { return mk(TPi{n.var, go(n.dom), go(n.cod)}, t->pos); },
          [&](const TLam& n) { return mk(TLam{n.var, go(n.body)}, t->pos); },
          [&](const TApp& n) { return mk(TApp{go(n.fn), go(n.arg)}, t->pos); },
          [&](const TSigma& n) { return mk(TSigma{n.var, go(n.fst), go(n.snd)}, t->pos); },
          [&](const TPair& n) { return mk(TPair{go(n.fst), go(n.snd)}, t->pos); },
          [&](const TFst& n) { return mk(TFst{go(n.pair)}, t->pos); },
          [&](const TSnd& n) { return mk(TSnd{go(n.pair)}, t->pos); },
          [&](const TPathP& n) {
            auto [d2, s2] = freshen_dim_binder(n.dim, s, range);
            return mk(TPathP{d2, dim_subst_go(n.ty, s2, range), go(n.lhs), go(n.rhs)}, t->pos);
          },
          [&](const TPLam& n) {
            auto [d2, s2] = freshen_dim_binder(n.dim, s, range);
            return mk(TPLam{d2, dim_subst_go(n.body, s2, range)}, t->pos);
          },
          [&](const TPApp& n) { return mk(TPApp{go(n.path), dim_subst(n.arg, s)}, t->pos); },
          [&](const THitTy& n) {
            THitTy m{n.decl, {}};
            for (const auto& p : n.params) m.params.push_back(go(p));
            return mk(std::move(m), t->pos);
          },
          [&](const TCtor& n) {
            TCtor m{n.decl, n.ctor, {}, {}, {}};
            for (const auto& p : n.params) m.params.push_back(go(p));
            for (const auto& a : n.args) m.args.push_back(go(a));
            for (const auto& r : n.dims) m.dims.push_back(dim_subst(r, s));
            return mk(std::move(m), t->pos);
          },
          [&](const THcomp& n) {
            auto [d2, s2] = freshen_dim_binder(n.dim, s, range);
            THcomp m{d2, go(n.ty), {}, go(n.cap)};
            for (const auto& [f, side] : n.sides)
              m.sides.emplace_back(face_subst(f, s), dim_subst_go(side, s2, range));
            return mk(std::move(m), t->pos);
          },
          [&](const TTrans& n) {
            auto [d2, s2] = freshen_dim_binder(n.dim, s, range);
            return mk(TTrans{d2, dim_subst_go(n.ty, s2, range), face_subst(n.phi, s), go(n.cap)},
                      t->pos);
          },
          [&](const TElim& n) {
            TElim m{n.decl, n.motive_var, go(n.motive), {}, go(n.scrut)};
            for (const auto& b : n.branches) {
              ElimBranch b2{b.ctor, b.args, b.ihs, {}, nullptr};
              DimSubst sb = s;
              bool changed = false;
              for (const auto& d : b.dims) {
                auto [d2, sb2] = freshen_dim_binder(d, sb, range);
                sb = sb2;
                changed = changed || d2 != d;
                b2.dims.push_back(d2);
              }
              (void)changed;
              b2.body = dim_subst_go(b.body, sb, range);
              m.branches.push_back(std::move(b2));
            }
            return mk(std::move(m), t->pos);
          },
          [&](const TAsc& n) { return mk(TAsc{go(n.tm), go(n.ty)}, t->pos); },
      },
      t->v);
}

}  // namespace detail

inline TermPtr term_dim_subst(const TermPtr& t, const DimSubst& s) {
  if (s.empty()) return t;
  return detail::dim_subst_go(t, s, detail::subst_range_names(s));
}

// ---------------------------------------------------------------------------
// Term substitution (capture-avoiding, used mostly by tests and validation)

inline void term_free_vars_into(const TermPtr& t, std::set<std::uint64_t>& bound,
                                std::set<std::uint64_t>& out) {
  std::visit(
      overloaded{
          [&](const TVar& n) {
            if (!bound.count(n.name.id)) out.insert(n.name.id);
          },
          [&](const TGlobal&) {}, [&](const TU&) {},
          [&](const TPi& n) {
            term_free_vars_into(n.dom, bound, out);
            bool fresh = bound.insert(n.var.id).second;
            term_free_vars_into(n.cod, bound, out);
            if (fresh) bound.erase(n.var.id);
          },
          [&](const TLam& n) {
            bool fresh = bound.insert(n.var.id).second;
            term_free_vars_into(n.body, bound, out);
            if (fresh) bound.erase(n.var.id);
          },
          [&](const TApp& n) {
            term_free_vars_into(n.fn, bound, out);
            term_free_vars_into(n.arg, bound, out);
          },
          [&](const TSigma& n) {
            term_free_vars_into(n.fst, bound, out);
            bool fresh = bound.insert(n.var.id).second;
            term_free_vars_into(n.snd, bound, out);
            if (fresh) bound.erase(n.var.id);
          },
          [&](const TPair& n) {
            term_free_vars_into(n.fst, bound, out);
            term_free_vars_into(n.snd, bound, out);
          },
          [&](const TFst& n) { term_free_vars_into(n.pair, bound, out); },
          [&](const TSnd& n) { term_free_vars_into(n.pair, bound, out); },
          [&](const TPathP& n) {
            term_free_vars_into(n.ty, bound, out);
            term_free_vars_into(n.lhs, bound, out);
            term_free_vars_into(n.rhs, bound, out);
          },
          [&](const TPLam& n) { term_free_vars_into(n.body, bound, out); },
          [&](const TPApp& n) { term_free_vars_into(n.path, bound, out); },
          [&](const THitTy& n) {
            for (const auto& p : n.params) term_free_vars_into(p, bound, out);
          },
          [&](const TCtor& n) {
            for (const auto& p : n.params) term_free_vars_into(p, bound, out);
            for (const auto& a : n.args) term_free_vars_into(a, bound, out);
          },
          [&](const THcomp& n) {
            term_free_vars_into(n.ty, bound, out);
            for (const auto& [f, side] : n.sides) term_free_vars_into(side, bound, out);
            term_free_vars_into(n.cap, bound, out);
          },
          [&](const TTrans& n) {
            term_free_vars_into(n.ty, bound, out);
            term_free_vars_into(n.cap, bound, out);
          },
          [&](const TElim& n) {
            bool fresh = bound.insert(n.motive_var.id).second;
            term_free_vars_into(n.motive, bound, out);
            if (fresh) bound.erase(n.motive_var.id);
            for (const auto& b : n.branches) {
              std::vector<std::uint64_t> added;
              for (const auto& x : b.args)
                if (bound.insert(x.id).second) added.push_back(x.id);
              for (const auto& x : b.ihs)
                if (bound.insert(x.id).second) added.push_back(x.id);
              term_free_vars_into(b.body, bound, out);
              for (auto id : added) bound.erase(id);
            }
            term_free_vars_into(n.scrut, bound, out);
          },
          [&](const TAsc& n) {
            term_free_vars_into(n.tm, bound, out);
            term_free_vars_into(n.ty, bound, out);
          },
      },
      t->v);
}

inline std::set<std::uint64_t> term_free_vars(const TermPtr& t) {
  std::set<std::uint64_t> bound, out;
  term_free_vars_into(t, bound, out);
  return out;
}

inline TermPtr term_subst(const TermPtr& t, const TermName& x, const TermPtr& s);

namespace detail {

inline std::pair<TermName, bool> freshen_var_binder(const TermName& v, const TermName& x,
                                                    const std::set<std::uint64_t>& fvs) {
  if (v == x) return {v, false};           // shadowed: stop substituting below
  if (!fvs.count(v.id)) return {v, true};  // no capture possible
  return {fresh_var(v.hint), true};
}

inline TermPtr term_subst_go(const TermPtr& t, const TermName& x, const TermPtr& s,
                             const std::set<std::uint64_t>& fvs) {
  auto go = [&](const TermPtr& u) { return term_subst_go(u, x, s, fvs); };
  auto under = [&](const TermName& v, const TermPtr& body) -> std::pair<TermName, TermPtr> {
    auto [v2, descend] = freshen_var_binder(v, x, fvs);
    if (!descend) return {v, body};
    TermPtr b = body;
    if (v2 != v) b = term_subst(b, v, mk_var(v2));
    return {v2, term_subst_go(b, x, s, fvs)};
  };
  return std::visit(
      overloaded{
          [&](const TVar& n) { return n.name == x ? s : t; },
          [&](const TGlobal&) { return t; }, [&](const TU&) { return t; },
          [&](const TPi& n) {
            auto [v2, cod2] = under(n.var, n.cod);
            return mk(TPi{v2, go(n.dom), cod2}, t->pos);
          },
          [&](const TLam& n) {
            auto [v2, b2] = under(n.var, n.body);
            return mk(TLam{v2, b2}, t->pos);
          },
          [&](const TApp& n) { return mk(TApp{go(n.fn), go(n.arg)}, t->pos); },
          [&](const TSigma& n) {
            auto [v2, snd2] = under(n.var, n.snd);
            return mk(TSigma{v2, go(n.fst), snd2}, t->pos);
          },
          [&](const TPair& n) { return mk(TPair{go(n.fst), go(n.snd)}, t->pos); },
          [&](const TFst& n) { return mk(TFst{go(n.pair)}, t->pos); },
          [&](const TSnd& n) { return mk(TSnd{go(n.pair)}, t->pos); },
          [&](const TPathP& n) { return mk(TPathP{n.dim, go(n.ty), go(n.lhs), go(n.rhs)}, t->pos); },
          [&](const TPLam& n) { return mk(TPLam{n.dim, go(n.body)}, t->pos); },
          [&](const TPApp& n) { return mk(TPApp{go(n.path), n.arg}, t->pos); },
          [&](const THitTy& n) {
            THitTy m{n.decl, {}};
            for (const auto& p : n.params) m.params.push_back(go(p));
            return mk(std::move(m), t->pos);
          },
          [&](const TCtor& n) {
            TCtor m{n.decl, n.ctor, {}, {}, n.dims};
            for (const auto& p : n.params) m.params.push_back(go(p));
            for (const auto& a : n.args) m.args.push_back(go(a));
            return mk(std::move(m), t->pos);
          },
          [&](const THcomp& n) {
            THcomp m{n.dim, go(n.ty), {}, go(n.cap)};
            for (const auto& [f, side] : n.sides) m.sides.emplace_back(f, go(side));
            return mk(std::move(m), t->pos);
          },
          [&](const TTrans& n) {
            return mk(TTrans{n.dim, go(n.ty), n.phi, go(n.cap)}, t->pos);
          },
          [&](const TElim& n) {
            auto [mv2, mot2] = under(n.motive_var, n.motive);
            TElim m{n.decl, mv2, mot2, {}, go(n.scrut)};
            for (const auto& b : n.branches) {
              // branch binders: rename them all out of harm's way if needed
              ElimBranch b2{b.ctor, {}, {}, b.dims, b.body};
              bool shadowed = false;
              for (const auto& v : b.args) shadowed = shadowed || v == x;
              for (const auto& v : b.ihs) shadowed = shadowed || v == x;
              auto rename_all = [&](const std::vector<TermName>& vs, TermPtr& body) {
                std::vector<TermName> out;
                for (const auto& v : vs) {
                  if (fvs.count(v.id)) {
                    TermName v2 = fresh_var(v.hint);
                    body = term_subst(body, v, mk_var(v2));
                    out.push_back(v2);
                  } else {
                    out.push_back(v);
                  }
                }
                return out;
              };
              TermPtr body = b.body;
              b2.args = rename_all(b.args, body);
              b2.ihs = rename_all(b.ihs, body);
              b2.body = shadowed ? body : term_subst_go(body, x, s, fvs);
              m.branches.push_back(std::move(b2));
            }
            return mk(std::move(m), t->pos);
          },
          [&](const TAsc& n) { return mk(TAsc{go(n.tm), go(n.ty)}, t->pos); },
      },
      t->v);
}

}  // namespace detail

inline TermPtr term_subst(const TermPtr& t, const TermName& x, const TermPtr& s) {
  return detail::term_subst_go(t, x, s, term_free_vars(s));
}

// ---------------------------------------------------------------------------
// Alpha equivalence; interval leaves are compared with dim_eq, and face
// formulas by canonical form, both after renaming bound dimensions.

namespace detail {

struct AlphaCtx {
  DimSubst dims;  // left bound dim -> right bound dim (as an atom)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> vars;  // left id -> right id

  bool var_eq(const TermName& a, const TermName& b) const {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      if (it->first == a.id) return it->second == b.id;
      if (it->second == b.id) return false;  // b bound, a not the matching one
    }
    return a.id == b.id;  // both free
  }
};

inline bool alpha_go(const TermPtr& a, const TermPtr& b, AlphaCtx& cx);

inline bool alpha_dim(const DimExpr& l, const DimExpr& r, const AlphaCtx& cx) {
  return dim_eq(dim_subst(l, cx.dims), r);
}

inline bool alpha_face(const FaceFormula& l, const FaceFormula& r, const AlphaCtx& cx) {
  return face_subst(l, cx.dims) == r;
}

inline bool alpha_under_var(const TermName& va, const TermPtr& ba, const TermName& vb,
                            const TermPtr& bb, AlphaCtx& cx) {
  cx.vars.emplace_back(va.id, vb.id);
  bool ok = alpha_go(ba, bb, cx);
  cx.vars.pop_back();
  return ok;
}

inline bool alpha_go(const TermPtr& a, const TermPtr& b, AlphaCtx& cx) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const TVar& n) { return cx.var_eq(n.name, std::get<TVar>(b->v).name); },
          [&](const TGlobal& n) { return n.name == std::get<TGlobal>(b->v).name; },
          [&](const TU&) { return true; },
          [&](const TPi& n) {
            const auto& m = std::get<TPi>(b->v);
            return alpha_go(n.dom, m.dom, cx) && alpha_under_var(n.var, n.cod, m.var, m.cod, cx);
          },
          [&](const TLam& n) {
            const auto& m = std::get<TLam>(b->v);
            return alpha_under_var(n.var, n.body, m.var, m.body, cx);
          },
          [&](const TApp& n) {
            const auto& m = std::get<TApp>(b->v);
            return alpha_go(n.fn, m.fn, cx) && alpha_go(n.arg, m.arg, cx);
          },
          [&](const TSigma& n) {
            const auto& m = std::get<TSigma>(b->v);
            return alpha_go(n.fst, m.fst, cx) && alpha_under_var(n.var, n.snd, m.var, m.snd, cx);
          },
          [&](const TPair& n) {
            const auto& m = std::get<TPair>(b->v);
            return alpha_go(n.fst, m.fst, cx) && alpha_go(n.snd, m.snd, cx);
          },
          [&](const TFst& n) { return alpha_go(n.pair, std::get<TFst>(b->v).pair, cx); },
          [&](const TSnd& n) { return alpha_go(n.pair, std::get<TSnd>(b->v).pair, cx); },
          [&](const TPathP& n) {
            const auto& m = std::get<TPathP>(b->v);
            DimSubst saved = cx.dims;
            cx.dims.bind(n.dim, dim_atom(m.dim));
            bool ok = alpha_go(n.ty, m.ty, cx);
            cx.dims = saved;
            return ok && alpha_go(n.lhs, m.lhs, cx) && alpha_go(n.rhs, m.rhs, cx);
          },
          [&](const TPLam& n) {
            const auto& m = std::get<TPLam>(b->v);
            DimSubst saved = cx.dims;
            cx.dims.bind(n.dim, dim_atom(m.dim));
            bool ok = alpha_go(n.body, m.body, cx);
            cx.dims = saved;
            return ok;
          },
          [&](const TPApp& n) {
            const auto& m = std::get<TPApp>(b->v);
            return alpha_go(n.path, m.path, cx) && alpha_dim(n.arg, m.arg, cx);
          },
          [&](const THitTy& n) {
            const auto& m = std::get<THitTy>(b->v);
            if (n.decl != m.decl || n.params.size() != m.params.size()) return false;
            for (std::size_t k = 0; k < n.params.size(); ++k)
              if (!alpha_go(n.params[k], m.params[k], cx)) return false;
            return true;
          },
          [&](const TCtor& n) {
            const auto& m = std::get<TCtor>(b->v);
            if (n.decl != m.decl || n.ctor != m.ctor || n.params.size() != m.params.size() ||
                n.args.size() != m.args.size() || n.dims.size() != m.dims.size())
              return false;
            for (std::size_t k = 0; k < n.params.size(); ++k)
              if (!alpha_go(n.params[k], m.params[k], cx)) return false;
            for (std::size_t k = 0; k < n.args.size(); ++k)
              if (!alpha_go(n.args[k], m.args[k], cx)) return false;
            for (std::size_t k = 0; k < n.dims.size(); ++k)
              if (!alpha_dim(n.dims[k], m.dims[k], cx)) return false;
            return true;
          },
          [&](const THcomp& n) {
            const auto& m = std::get<THcomp>(b->v);
            if (n.sides.size() != m.sides.size()) return false;
            if (!alpha_go(n.ty, m.ty, cx) || !alpha_go(n.cap, m.cap, cx)) return false;
            DimSubst saved = cx.dims;
            cx.dims.bind(n.dim, dim_atom(m.dim));
            for (std::size_t k = 0; k < n.sides.size(); ++k) {
              // side faces never mention the bound direction: rename with the
              // outer map only
              if (!(face_subst(n.sides[k].first, saved) == m.sides[k].first) ||
                  !alpha_go(n.sides[k].second, m.sides[k].second, cx)) {
                cx.dims = saved;
                return false;
              }
            }
            cx.dims = saved;
            return true;
          },
          [&](const TTrans& n) {
            const auto& m = std::get<TTrans>(b->v);
            if (!alpha_face(n.phi, m.phi, cx)) return false;
            DimSubst saved = cx.dims;
            cx.dims.bind(n.dim, dim_atom(m.dim));
            bool ok = alpha_go(n.ty, m.ty, cx);
            cx.dims = saved;
            return ok && alpha_go(n.cap, m.cap, cx);
          },
          [&](const TElim& n) {
            const auto& m = std::get<TElim>(b->v);
            if (n.decl != m.decl) return false;
            if (n.branches.size() != m.branches.size()) return false;
            if (!alpha_under_var(n.motive_var, n.motive, m.motive_var, m.motive, cx)) return false;
            for (std::size_t k = 0; k < n.branches.size(); ++k) {
              const auto& ba = n.branches[k];
              const auto& bb = m.branches[k];
              if (ba.ctor != bb.ctor || ba.args.size() != bb.args.size() ||
                  ba.ihs.size() != bb.ihs.size() || ba.dims.size() != bb.dims.size())
                return false;
              std::size_t pushed = 0;
              for (std::size_t j = 0; j < ba.args.size(); ++j, ++pushed)
                cx.vars.emplace_back(ba.args[j].id, bb.args[j].id);
              for (std::size_t j = 0; j < ba.ihs.size(); ++j, ++pushed)
                cx.vars.emplace_back(ba.ihs[j].id, bb.ihs[j].id);
              DimSubst saved = cx.dims;
              for (std::size_t j = 0; j < ba.dims.size(); ++j)
                cx.dims.bind(ba.dims[j], dim_atom(bb.dims[j]));
              bool ok = alpha_go(ba.body, bb.body, cx);
              cx.dims = saved;
              for (; pushed > 0; --pushed) cx.vars.pop_back();
              if (!ok) return false;
            }
            return alpha_go(n.scrut, m.scrut, cx);
          },
          [&](const TAsc& n) {
            const auto& m = std::get<TAsc>(b->v);
            return alpha_go(n.tm, m.tm, cx) && alpha_go(n.ty, m.ty, cx);
          },
      },
      a->v);
}

}  // namespace detail

inline bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  detail::AlphaCtx cx;
  return detail::alpha_go(a, b, cx);
}

}  // namespace chit
