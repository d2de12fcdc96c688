#pragma once

// Built-in higher inductive type declarations and the schema validator.
// The schema: parameters z, then point/path constructors with argument
// telescopes over the parameters, dimension arguments, and boundary systems.
// Recursion is strictly positive: the declared type may appear only as the
// whole type of a telescope entry.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chit/term.hpp"

namespace chit {

namespace detail {

inline FaceFormula endpoints(const DimName& i) {
  return face_or(FaceFormula::eq(i, false), FaceFormula::eq(i, true));
}

inline std::vector<TermPtr> param_refs(const HITDecl& d) {
  std::vector<TermPtr> out;
  for (const auto& p : d.params) out.push_back(mk_var(p.var));
  return out;
}

inline TermPtr self_ty(const HITDecl& d) { return mk(THitTy{&d, param_refs(d)}); }

inline TermPtr bctor(const HITDecl& d, int ctor, std::vector<TermPtr> args = {},
                     std::vector<DimExpr> dims = {}) {
  return mk(TCtor{&d, ctor, param_refs(d), std::move(args), std::move(dims)});
}

// The builders fill declarations in place: boundary terms hold pointers back
// to the declaration, so it must already live at its final address.
inline void make_circle(HITDecl& d, const std::string& name, const std::string& base,
                        const std::string& loop, int dim_arity) {
  d.name = name;
  d.ctors.push_back(CtorDecl{base, {}, {}, {}});
  CtorDecl lp{loop, {}, {}, {}};
  FaceFormula collapse = FaceFormula::zero();
  for (int k = 0; k < dim_arity; ++k) {
    DimName i = fresh_dim(dim_arity == 1 ? "i" : "i" + std::to_string(k + 1));
    lp.dims.push_back(i);
    collapse = face_or(collapse, endpoints(i));
  }
  lp.boundary.emplace_back(collapse, bctor(d, 0));
  d.ctors.push_back(std::move(lp));
}

inline void make_torus(HITDecl& d) {
  d.name = "T";
  d.ctors.push_back(CtorDecl{"b", {}, {}, {}});
  DimName i = fresh_dim("i");
  d.ctors.push_back(CtorDecl{"tp", {}, {i}, {{endpoints(i), bctor(d, 0)}}});
  DimName j = fresh_dim("i");
  d.ctors.push_back(CtorDecl{"tq", {}, {j}, {{endpoints(j), bctor(d, 0)}}});
  DimName si = fresh_dim("i"), sj = fresh_dim("j");
  CtorDecl surf{"surf", {}, {si, sj}, {}};
  surf.boundary.emplace_back(endpoints(si), bctor(d, 1, {}, {dim_atom(sj)}));
  surf.boundary.emplace_back(endpoints(sj), bctor(d, 2, {}, {dim_atom(si)}));
  d.ctors.push_back(std::move(surf));
}

// The folklore torus: the square's vertical faces are composites built with
// hcomp, so the declaration's boundary exercises compositions.
inline void make_torus_f(HITDecl& d) {
  d.name = "TF";
  d.ctors.push_back(CtorDecl{"bF", {}, {}, {}});
  DimName i = fresh_dim("i");
  d.ctors.push_back(CtorDecl{"tpF", {}, {i}, {{endpoints(i), bctor(d, 0)}}});
  DimName j = fresh_dim("i");
  d.ctors.push_back(CtorDecl{"tqF", {}, {j}, {{endpoints(j), bctor(d, 0)}}});

  DimName si = fresh_dim("i"), sj = fresh_dim("j");
  // p . q at s := hcomp^k [ (s=0) -> bF, (s=1) -> q k ] (p s)
  auto composite = [&](int p, int q) {
    DimName k = fresh_dim("k");
    System sides;
    sides.emplace_back(FaceFormula::eq(sj, false), bctor(d, 0));
    sides.emplace_back(FaceFormula::eq(sj, true), bctor(d, q, {}, {dim_atom(k)}));
    return mk(THcomp{k, self_ty(d), std::move(sides), bctor(d, p, {}, {dim_atom(sj)})});
  };
  CtorDecl surf{"surfF", {}, {si, sj}, {}};
  surf.boundary.emplace_back(FaceFormula::eq(si, false), composite(1, 2));
  surf.boundary.emplace_back(FaceFormula::eq(si, true), composite(2, 1));
  surf.boundary.emplace_back(endpoints(sj), bctor(d, 0));
  d.ctors.push_back(std::move(surf));
}

inline void make_susp(HITDecl& d) {
  d.name = "Susp";
  TermName A = fresh_var("A");
  d.params.push_back(TeleEntry{A, mk_u(), false});
  d.ctors.push_back(CtorDecl{"N", {}, {}, {}});
  d.ctors.push_back(CtorDecl{"S", {}, {}, {}});
  TermName a = fresh_var("a");
  DimName i = fresh_dim("i");
  CtorDecl merid{"merid", {TeleEntry{a, mk_var(A), false}}, {i}, {}};
  merid.boundary.emplace_back(FaceFormula::eq(i, false), bctor(d, 0));
  merid.boundary.emplace_back(FaceFormula::eq(i, true), bctor(d, 1));
  d.ctors.push_back(std::move(merid));
}

inline void make_trunc(HITDecl& d) {
  d.name = "Trunc";
  TermName A = fresh_var("A");
  d.params.push_back(TeleEntry{A, mk_u(), false});
  TermName a = fresh_var("a");
  d.ctors.push_back(CtorDecl{"inc", {TeleEntry{a, mk_var(A), false}}, {}, {}});
  TermName v = fresh_var("v"), w = fresh_var("w");
  DimName i = fresh_dim("i");
  CtorDecl sq{"sq", {TeleEntry{v, self_ty(d), true}, TeleEntry{w, self_ty(d), true}}, {i}, {}};
  sq.boundary.emplace_back(FaceFormula::eq(i, false), mk_var(v));
  sq.boundary.emplace_back(FaceFormula::eq(i, true), mk_var(w));
  d.ctors.push_back(std::move(sq));
}

inline void make_pushout(HITDecl& d) {
  d.name = "Push";
  TermName A = fresh_var("A"), B = fresh_var("B"), C = fresh_var("C");
  TermName u = fresh_var("u"), v = fresh_var("v");
  TermName xu = fresh_var("x"), xv = fresh_var("x");
  d.params.push_back(TeleEntry{A, mk_u(), false});
  d.params.push_back(TeleEntry{B, mk_u(), false});
  d.params.push_back(TeleEntry{C, mk_u(), false});
  d.params.push_back(TeleEntry{u, mk(TPi{xu, mk_var(C), mk_var(A)}), false});
  d.params.push_back(TeleEntry{v, mk(TPi{xv, mk_var(C), mk_var(B)}), false});
  TermName a = fresh_var("a"), b = fresh_var("b"), c = fresh_var("c");
  d.ctors.push_back(CtorDecl{"inl", {TeleEntry{a, mk_var(A), false}}, {}, {}});
  d.ctors.push_back(CtorDecl{"inr", {TeleEntry{b, mk_var(B), false}}, {}, {}});
  DimName i = fresh_dim("i");
  CtorDecl push{"push", {TeleEntry{c, mk_var(C), false}}, {i}, {}};
  push.boundary.emplace_back(FaceFormula::eq(i, false),
                             bctor(d, 0, {mk(TApp{mk_var(u), mk_var(c)})}));
  push.boundary.emplace_back(FaceFormula::eq(i, true),
                             bctor(d, 1, {mk(TApp{mk_var(v), mk_var(c)})}));
  d.ctors.push_back(std::move(push));
}

// Ordinary naturals, declared through the same schema: hcomp then acts as a
// constructor for Nat exactly as for the path types.
inline void make_nat(HITDecl& d) {
  d.name = "Nat";
  d.ctors.push_back(CtorDecl{"zero", {}, {}, {}});
  TermName n = fresh_var("n");
  d.ctors.push_back(CtorDecl{"suc", {TeleEntry{n, self_ty(d), true}}, {}, {}});
}

}  // namespace detail

inline const std::vector<const HITDecl*>& builtin_decls() {
  static const std::vector<const HITDecl*> all = [] {
    static HITDecl s1, s2, s3, s4, t, tf, su, tr, pu, na;
    detail::make_circle(s1, "S1", "base", "loop", 1);
    detail::make_circle(s2, "S2", "base2", "loop2", 2);
    detail::make_circle(s3, "S3", "base3", "loop3", 3);
    detail::make_circle(s4, "S4", "base4", "loop4", 4);
    detail::make_torus(t);
    detail::make_torus_f(tf);
    detail::make_susp(su);
    detail::make_trunc(tr);
    detail::make_pushout(pu);
    detail::make_nat(na);
    return std::vector<const HITDecl*>{&s1, &s2, &s3, &s4, &t, &tf, &su, &tr, &pu, &na};
  }();
  return all;
}

inline const HITDecl* find_decl(const std::string& name) {
  for (const auto* d : builtin_decls())
    if (d->name == name) return d;
  return nullptr;
}

// ctor name -> (decl, index); all built-in constructor names are distinct
inline const HITDecl* find_ctor(const std::string& name, int& index_out) {
  for (const auto* d : builtin_decls()) {
    int k = d->ctor_index(name);
    if (k >= 0) {
      index_out = k;
      return d;
    }
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Schema validation

namespace detail {

// true iff the declared type is mentioned anywhere inside t
inline bool mentions_decl(const TermPtr& t, const HITDecl* d) {
  bool found = false;
  std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
    if (found) return;
    std::visit(overloaded{
                   [&](const THitTy& n) {
                     if (n.decl == d) { found = true; return; }
                     for (const auto& p : n.params) go(p);
                   },
                   [&](const TCtor& n) {
                     if (n.decl == d) { found = true; return; }
                     for (const auto& p : n.params) go(p);
                     for (const auto& a : n.args) go(a);
                   },
                   [&](const TVar&) {}, [&](const TGlobal&) {}, [&](const TU&) {},
                   [&](const TPi& n) { go(n.dom); go(n.cod); },
                   [&](const TLam& n) { go(n.body); },
                   [&](const TApp& n) { go(n.fn); go(n.arg); },
                   [&](const TSigma& n) { go(n.fst); go(n.snd); },
                   [&](const TPair& n) { go(n.fst); go(n.snd); },
                   [&](const TFst& n) { go(n.pair); }, [&](const TSnd& n) { go(n.pair); },
                   [&](const TPathP& n) { go(n.ty); go(n.lhs); go(n.rhs); },
                   [&](const TPLam& n) { go(n.body); },
                   [&](const TPApp& n) { go(n.path); },
                   [&](const THcomp& n) {
                     go(n.ty);
                     for (const auto& [f, s] : n.sides) go(s);
                     go(n.cap);
                   },
                   [&](const TTrans& n) { go(n.ty); go(n.cap); },
                   [&](const TElim& n) {
                     go(n.motive);
                     for (const auto& br : n.branches) go(br.body);
                     go(n.scrut);
                   },
                   [&](const TAsc& n) { go(n.tm); go(n.ty); },
               },
               u->v);
  };
  go(t);
  return found;
}

// exactly D applied to the declared parameters, in order
inline bool is_self_type(const TermPtr& t, const HITDecl* d) {
  const auto* h = as<THitTy>(t);
  if (!h || h->decl != d || h->params.size() != d->params.size()) return false;
  for (std::size_t k = 0; k < h->params.size(); ++k) {
    const auto* var = as<TVar>(h->params[k]);
    if (!var || var->name != d->params[k].var) return false;
  }
  return true;
}

struct BoundaryScope {
  const HITDecl* decl;
  int ctor;  // entries may reference strictly earlier constructors
  std::set<std::uint64_t> term_vars;
  std::set<std::uint64_t> dim_vars;
};

inline std::optional<std::string> check_boundary_term(const TermPtr& t, BoundaryScope& sc);

inline std::optional<std::string> check_boundary_dim(const DimExpr& r, const BoundaryScope& sc) {
  for (const auto& n : dim_free_names(r))
    if (!sc.dim_vars.count(n.id))
      return "boundary uses dimension " + n.hint + " outside the constructor's arguments";
  return std::nullopt;
}

inline std::optional<std::string> check_boundary_term(const TermPtr& t, BoundaryScope& sc) {
  using R = std::optional<std::string>;
  return std::visit(
      overloaded{
          [&](const TVar& n) -> R {
            if (!sc.term_vars.count(n.name.id))
              return "boundary references unknown variable " + n.name.hint;
            return std::nullopt;
          },
          [&](const TCtor& n) -> R {
            if (n.decl != sc.decl) return std::string("boundary uses a foreign constructor");
            if (n.ctor >= sc.ctor)
              return "boundary of " + sc.decl->ctors[sc.ctor].name + " references " +
                     sc.decl->ctors[n.ctor].name + ", which is not an earlier constructor";
            for (const auto& p : n.params) {
              const auto* var = as<TVar>(p);
              if (!var || !sc.term_vars.count(var->name.id))
                return std::string("boundary constructor must use the declared parameters");
            }
            for (const auto& a : n.args)
              if (auto e = check_boundary_term(a, sc)) return e;
            for (const auto& r : n.dims)
              if (auto e = check_boundary_dim(r, sc)) return e;
            return std::nullopt;
          },
          [&](const THcomp& n) -> R {
            if (!is_self_type(n.ty, sc.decl))
              return std::string("boundary hcomp must be annotated with the declared type");
            bool added = sc.dim_vars.insert(n.dim.id).second;
            for (const auto& [f, side] : n.sides) {
              for (const auto& fn : face_free_names(f))
                if (!sc.dim_vars.count(fn.id) || fn.id == n.dim.id)
                  return std::string("boundary hcomp face uses an out-of-scope dimension");
              if (auto e = check_boundary_term(side, sc)) return e;
            }
            if (added) sc.dim_vars.erase(n.dim.id);
            if (auto e = check_boundary_term(n.cap, sc)) return e;
            return std::nullopt;
          },
          [&](const TApp& n) -> R {
            // only applications headed by a parameter
            TermPtr head = n.fn;
            while (const auto* ap = as<TApp>(head)) head = ap->fn;
            const auto* var = as<TVar>(head);
            bool is_param = false;
            if (var)
              for (const auto& p : sc.decl->params) is_param = is_param || p.var == var->name;
            if (!is_param)
              return std::string("boundary application must be headed by a parameter");
            if (auto e = check_boundary_term(n.arg, sc)) return e;
            return std::nullopt;
          },
          [&](const auto&) -> R {
            return std::string("boundary term uses a form outside the schema whitelist");
          },
      },
      t->v);
}

}  // namespace detail

// Checks strict positivity and the boundary whitelist.  Returns a message on
// the first violation, nothing if the declaration is well-formed.
inline std::optional<std::string> hit_validate(const HITDecl& d) {
  for (std::size_t ci = 0; ci < d.ctors.size(); ++ci) {
    const auto& c = d.ctors[ci];
    std::set<std::uint64_t> term_vars;
    for (const auto& p : d.params) term_vars.insert(p.var.id);
    for (const auto& e : c.args) {
      if (e.recursive) {
        if (!detail::is_self_type(e.type, &d))
          return d.name + "." + c.name + ": recursive entry must be exactly the declared type";
      } else if (detail::mentions_decl(e.type, &d)) {
        return d.name + "." + c.name +
               ": the declared type may appear only as the whole type of an argument";
      }
      term_vars.insert(e.var.id);
    }
    std::set<std::uint64_t> dim_vars;
    for (const auto& i : c.dims) {
      if (!dim_vars.insert(i.id).second)
        return d.name + "." + c.name + ": repeated dimension argument";
    }
    for (const auto& [f, e] : c.boundary) {
      for (const auto& n : face_free_names(f))
        if (!dim_vars.count(n.id))
          return d.name + "." + c.name + ": boundary face mentions a foreign dimension";
      detail::BoundaryScope sc{&d, static_cast<int>(ci), term_vars, dim_vars};
      if (auto err = detail::check_boundary_term(e, sc))
        return d.name + "." + c.name + ": " + *err;
    }
  }
  return std::nullopt;
}

}  // namespace chit
