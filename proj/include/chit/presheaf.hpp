#pragma once

// Executable presheaf semantics for closed circle, suspension, and pushout
// terms.  An element over a name context I is a tree: constructor nodes hold
// interval expressions over I, composition nodes hold a face system whose
// sides are families — functions taking a restriction f : I -> dM(J) and a
// value for the bound direction.  Restriction is computed tree-side, firing
// a side whose face becomes the top of the lattice, so agreement between the
// normalizer and these trees is a genuinely independent check.  Equality and
// stability are decided by probing with a finite set of substitutions
// (faces, diagonals, involutions, connections, and a context extension).

#include <functional>
#include <memory>
#include <vector>

#include "chit/term.hpp"

namespace chit {
namespace psh {

// -- morphisms of name contexts ----------------------------------------------

using Names = std::vector<DimName>;

struct CubeMap {
  Names dom, cod;
  DimSubst sub;  // entries for dom names; omitted names map to themselves
};

inline CubeMap id_map(const Names& I) { return CubeMap{I, I, {}}; }

inline CubeMap compose(const CubeMap& f, const CubeMap& g) {
  CubeMap h{f.dom, g.cod, {}};
  for (const auto& i : f.dom) {
    DimExpr fi = dim_subst(dim_atom(i), f.sub);
    h.sub.bind(i, dim_subst(fi, g.sub));
  }
  return h;
}

// probe maps out of I: identity, an unused context extension, all faces,
// diagonals, involutions, and meet/join connections with a fresh name
inline std::vector<CubeMap> probes(const Names& I) {
  std::vector<CubeMap> out;
  out.push_back(id_map(I));
  {
    Names ext = I;
    ext.push_back(fresh_dim("p"));
    out.push_back(CubeMap{I, ext, {}});
  }
  for (std::size_t a = 0; a < I.size(); ++a) {
    for (bool one : {false, true}) {
      Names cod;
      for (std::size_t b = 0; b < I.size(); ++b)
        if (b != a) cod.push_back(I[b]);
      CubeMap m{I, cod, {}};
      m.sub.bind(I[a], one ? dim1() : dim0());
      out.push_back(m);
    }
    {
      CubeMap m{I, I, {}};
      m.sub.bind(I[a], dim_neg(dim_atom(I[a])));
      out.push_back(m);
    }
    for (std::size_t b = 0; b < I.size(); ++b) {
      if (a == b) continue;
      Names cod;
      for (std::size_t c = 0; c < I.size(); ++c)
        if (c != a) cod.push_back(I[c]);
      CubeMap m{I, cod, {}};
      m.sub.bind(I[a], dim_atom(I[b]));
      out.push_back(m);
    }
    {
      DimName fresh = fresh_dim("q");
      Names cod = I;
      cod.push_back(fresh);
      CubeMap meet{I, cod, {}};
      meet.sub.bind(I[a], dim_meet(dim_atom(I[a]), dim_atom(fresh)));
      out.push_back(meet);
      CubeMap join{I, cod, {}};
      join.sub.bind(I[a], dim_join(dim_atom(I[a]), dim_atom(fresh)));
      out.push_back(join);
    }
  }
  if (!I.empty()) {
    CubeMap m{I, {}, {}};
    for (const auto& i : I) m.sub.bind(i, dim0());
    out.push_back(m);
  }
  return out;
}

// -- circle elements ----------------------------------------------------------

struct S1Elem;
using S1Ptr = std::shared_ptr<const S1Elem>;
using S1Family = std::function<S1Ptr(const CubeMap&, const DimExpr&)>;

struct S1Side {
  FaceFormula face;
  S1Family fam;
};

struct S1Elem {
  enum class K { Base, Loop, HComp } k;
  DimExpr r = dim0();        // Loop
  std::vector<S1Side> sides; // HComp
  S1Ptr cap;
};

inline S1Ptr s1_base() {
  static const S1Ptr b = std::make_shared<S1Elem>(S1Elem{S1Elem::K::Base, dim0(), {}, nullptr});
  return b;
}

inline S1Ptr s1_loop(const DimExpr& r) {
  if (dim_is_zero(r) || dim_is_one(r)) return s1_base();
  return std::make_shared<S1Elem>(S1Elem{S1Elem::K::Loop, r, {}, nullptr});
}

inline S1Ptr s1_hcomp(const Names& I, std::vector<S1Side> sides, S1Ptr cap) {
  std::vector<S1Side> keep;
  for (auto& s : sides) {
    if (s.face.is_zero()) continue;
    if (s.face.is_one()) return s.fam(id_map(I), dim1());
    keep.push_back(std::move(s));
  }
  return std::make_shared<S1Elem>(
      S1Elem{S1Elem::K::HComp, dim0(), std::move(keep), std::move(cap)});
}

inline S1Ptr s1_restrict(const S1Ptr& v, const CubeMap& f) {
  switch (v->k) {
    case S1Elem::K::Base: return v;
    case S1Elem::K::Loop: return s1_loop(dim_subst(v->r, f.sub));
    case S1Elem::K::HComp: {
      std::vector<S1Side> sides;
      for (const auto& s : v->sides) {
        FaceFormula psi = face_subst(s.face, f.sub);
        if (psi.is_zero()) continue;
        if (psi.is_one()) return s.fam(f, dim1());
        S1Family fam = s.fam;
        sides.push_back(S1Side{
            psi, [fam, f](const CubeMap& g, const DimExpr& z) {
              return fam(compose(f, g), z);
            }});
      }
      return std::make_shared<S1Elem>(
          S1Elem{S1Elem::K::HComp, dim0(), std::move(sides), s1_restrict(v->cap, f)});
    }
  }
  return v;
}

// interpret a closed normal circle term over I
inline S1Ptr interp_s1(const Names& I, const TermPtr& t) {
  if (const auto* c = as<TCtor>(t)) {
    if (c->ctor == 0) return s1_base();
    return s1_loop(c->dims.at(0));
  }
  if (const auto* h = as<THcomp>(t)) {
    std::vector<S1Side> sides;
    for (const auto& [phi, u] : h->sides) {
      TermPtr body = u;
      DimName dir = h->dim;
      sides.push_back(S1Side{
          phi, [body, dir](const CubeMap& f, const DimExpr& z) {
            DimSubst s = f.sub;
            s.bind(dir, z);
            return interp_s1(f.cod, term_dim_subst(body, s));
          }});
    }
    return s1_hcomp(I, std::move(sides), interp_s1(I, h->cap));
  }
  throw std::runtime_error("interp_s1: not a closed circle normal form");
}

namespace detail {

template <class Eq>
inline bool match_sides(const std::vector<FaceFormula>& fa,
                        const std::vector<FaceFormula>& fb, Eq&& side_eq) {
  if (fa.size() != fb.size()) return false;
  std::vector<bool> used(fb.size(), false);
  for (std::size_t k = 0; k < fa.size(); ++k) {
    bool found = false;
    for (std::size_t l = 0; l < fb.size() && !found; ++l) {
      if (used[l] || !(fa[k] == fb[l])) continue;
      if (!side_eq(k, l)) return false;
      used[l] = true;
      found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

inline bool s1_eq(const S1Ptr& a, const S1Ptr& b, const Names& I, int fuel) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case S1Elem::K::Base: return true;
    case S1Elem::K::Loop: return dim_eq(a->r, b->r);
    case S1Elem::K::HComp: {
      if (!s1_eq(a->cap, b->cap, I, fuel)) return false;
      std::vector<FaceFormula> fa, fb;
      for (const auto& s : a->sides) fa.push_back(s.face);
      for (const auto& s : b->sides) fb.push_back(s.face);
      return detail::match_sides(fa, fb, [&](std::size_t k, std::size_t l) {
        if (fuel <= 0) return true;
        for (const auto& f : probes(I)) {
          DimName fresh = fresh_dim("z");
          Names ext = f.cod;
          ext.push_back(fresh);
          CubeMap fext{f.dom, ext, f.sub};
          for (const DimExpr& z : {dim0(), dim1(), dim_atom(fresh)}) {
            const Names& J = (z.is_atom()) ? ext : f.cod;
            const CubeMap& use = (z.is_atom()) ? fext : f;
            if (!s1_eq(a->sides[k].fam(use, z), b->sides[l].fam(use, z), J, fuel - 1))
              return false;
          }
        }
        return true;
      });
    }
  }
  return false;
}

// functoriality of restriction on an element: (v·f)·g = v·(f∘g)
inline bool s1_stable(const S1Ptr& v, const Names& I, int fuel) {
  for (const auto& f : probes(I)) {
    S1Ptr vf = s1_restrict(v, f);
    for (const auto& g : probes(f.cod)) {
      if (!s1_eq(s1_restrict(vf, g), s1_restrict(v, compose(f, g)), g.cod, fuel))
        return false;
    }
  }
  return true;
}

// a deliberately non-natural family: its value depends on the size of the
// target context, which no presheaf element can do
inline S1Ptr s1_broken(const Names& I) {
  S1Family fam = [](const CubeMap& f, const DimExpr&) -> S1Ptr {
    if (f.cod.size() >= 2) return s1_loop(dim_atom(f.cod[1]));
    return s1_base();
  };
  std::vector<S1Side> sides;
  FaceFormula face =
      I.empty() ? FaceFormula::one() : FaceFormula::eq(I.front(), false);
  sides.push_back(S1Side{face, fam});
  return std::make_shared<S1Elem>(
      S1Elem{S1Elem::K::HComp, dim0(), std::move(sides), s1_base()});
}

// -- suspension elements (points interpreted in the circle) -------------------

struct SuspElem;
using SuspPtr = std::shared_ptr<const SuspElem>;
using SuspFamily = std::function<SuspPtr(const CubeMap&, const DimExpr&)>;

struct SuspSide {
  FaceFormula face;
  SuspFamily fam;
};

struct SuspElem {
  enum class K { North, South, Merid, HComp } k;
  S1Ptr point;
  DimExpr r = dim0();
  std::vector<SuspSide> sides;
  SuspPtr cap;
};

inline SuspPtr susp_north() {
  static const SuspPtr n =
      std::make_shared<SuspElem>(SuspElem{SuspElem::K::North, nullptr, dim0(), {}, nullptr});
  return n;
}
inline SuspPtr susp_south() {
  static const SuspPtr s =
      std::make_shared<SuspElem>(SuspElem{SuspElem::K::South, nullptr, dim0(), {}, nullptr});
  return s;
}

inline SuspPtr susp_merid(S1Ptr a, const DimExpr& r) {
  if (dim_is_zero(r)) return susp_north();
  if (dim_is_one(r)) return susp_south();
  return std::make_shared<SuspElem>(
      SuspElem{SuspElem::K::Merid, std::move(a), r, {}, nullptr});
}

inline SuspPtr susp_hcomp(const Names& I, std::vector<SuspSide> sides, SuspPtr cap) {
  std::vector<SuspSide> keep;
  for (auto& s : sides) {
    if (s.face.is_zero()) continue;
    if (s.face.is_one()) return s.fam(id_map(I), dim1());
    keep.push_back(std::move(s));
  }
  return std::make_shared<SuspElem>(
      SuspElem{SuspElem::K::HComp, nullptr, dim0(), std::move(keep), std::move(cap)});
}

inline SuspPtr susp_restrict(const SuspPtr& v, const CubeMap& f) {
  switch (v->k) {
    case SuspElem::K::North:
    case SuspElem::K::South: return v;
    case SuspElem::K::Merid:
      return susp_merid(s1_restrict(v->point, f), dim_subst(v->r, f.sub));
    case SuspElem::K::HComp: {
      std::vector<SuspSide> sides;
      for (const auto& s : v->sides) {
        FaceFormula psi = face_subst(s.face, f.sub);
        if (psi.is_zero()) continue;
        if (psi.is_one()) return s.fam(f, dim1());
        SuspFamily fam = s.fam;
        sides.push_back(SuspSide{
            psi, [fam, f](const CubeMap& g, const DimExpr& z) {
              return fam(compose(f, g), z);
            }});
      }
      return std::make_shared<SuspElem>(SuspElem{SuspElem::K::HComp, nullptr, dim0(),
                                                 std::move(sides),
                                                 susp_restrict(v->cap, f)});
    }
  }
  return v;
}

inline SuspPtr interp_susp(const Names& I, const TermPtr& t) {
  if (const auto* c = as<TCtor>(t)) {
    if (c->ctor == 0) return susp_north();
    if (c->ctor == 1) return susp_south();
    return susp_merid(interp_s1(I, c->args.at(0)), c->dims.at(0));
  }
  if (const auto* h = as<THcomp>(t)) {
    std::vector<SuspSide> sides;
    for (const auto& [phi, u] : h->sides) {
      TermPtr body = u;
      DimName dir = h->dim;
      sides.push_back(SuspSide{
          phi, [body, dir](const CubeMap& f, const DimExpr& z) {
            DimSubst s = f.sub;
            s.bind(dir, z);
            return interp_susp(f.cod, term_dim_subst(body, s));
          }});
    }
    return susp_hcomp(I, std::move(sides), interp_susp(I, h->cap));
  }
  throw std::runtime_error("interp_susp: not a closed suspension normal form");
}

inline bool susp_eq(const SuspPtr& a, const SuspPtr& b, const Names& I, int fuel) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case SuspElem::K::North:
    case SuspElem::K::South: return true;
    case SuspElem::K::Merid:
      return dim_eq(a->r, b->r) && s1_eq(a->point, b->point, I, fuel);
    case SuspElem::K::HComp: {
      if (!susp_eq(a->cap, b->cap, I, fuel)) return false;
      std::vector<FaceFormula> fa, fb;
      for (const auto& s : a->sides) fa.push_back(s.face);
      for (const auto& s : b->sides) fb.push_back(s.face);
      return detail::match_sides(fa, fb, [&](std::size_t k, std::size_t l) {
        if (fuel <= 0) return true;
        for (const auto& f : probes(I)) {
          DimName fresh = fresh_dim("z");
          Names ext = f.cod;
          ext.push_back(fresh);
          CubeMap fext{f.dom, ext, f.sub};
          for (const DimExpr& z : {dim0(), dim1(), dim_atom(fresh)}) {
            const Names& J = (z.is_atom()) ? ext : f.cod;
            const CubeMap& use = (z.is_atom()) ? fext : f;
            if (!susp_eq(a->sides[k].fam(use, z), b->sides[l].fam(use, z), J, fuel - 1))
              return false;
          }
        }
        return true;
      });
    }
  }
  return false;
}

inline bool susp_stable(const SuspPtr& v, const Names& I, int fuel) {
  for (const auto& f : probes(I)) {
    SuspPtr vf = susp_restrict(v, f);
    for (const auto& g : probes(f.cod)) {
      if (!susp_eq(susp_restrict(vf, g), susp_restrict(v, compose(f, g)), g.cod, fuel))
        return false;
    }
  }
  return true;
}

// -- pushout elements over the span S1 <-id- S1 -id-> S1 ----------------------

struct PushElem;
using PushPtr = std::shared_ptr<const PushElem>;
using PushFamily = std::function<PushPtr(const CubeMap&, const DimExpr&)>;

struct PushSide {
  FaceFormula face;
  PushFamily fam;
};

struct PushElem {
  enum class K { Inl, Inr, Glue, HComp } k;
  S1Ptr point;
  DimExpr r = dim0();
  std::vector<PushSide> sides;
  PushPtr cap;
};

inline PushPtr push_inl(S1Ptr a) {
  return std::make_shared<PushElem>(PushElem{PushElem::K::Inl, std::move(a), dim0(), {}, nullptr});
}
inline PushPtr push_inr(S1Ptr b) {
  return std::make_shared<PushElem>(PushElem{PushElem::K::Inr, std::move(b), dim0(), {}, nullptr});
}

// both legs of the span are the identity, so the endpoints glue to the point
inline PushPtr push_glue(S1Ptr c, const DimExpr& r) {
  if (dim_is_zero(r)) return push_inl(std::move(c));
  if (dim_is_one(r)) return push_inr(std::move(c));
  return std::make_shared<PushElem>(
      PushElem{PushElem::K::Glue, std::move(c), r, {}, nullptr});
}

inline PushPtr push_hcomp(const Names& I, std::vector<PushSide> sides, PushPtr cap) {
  std::vector<PushSide> keep;
  for (auto& s : sides) {
    if (s.face.is_zero()) continue;
    if (s.face.is_one()) return s.fam(id_map(I), dim1());
    keep.push_back(std::move(s));
  }
  return std::make_shared<PushElem>(
      PushElem{PushElem::K::HComp, nullptr, dim0(), std::move(keep), std::move(cap)});
}

inline PushPtr push_restrict(const PushPtr& v, const CubeMap& f) {
  switch (v->k) {
    case PushElem::K::Inl: return push_inl(s1_restrict(v->point, f));
    case PushElem::K::Inr: return push_inr(s1_restrict(v->point, f));
    case PushElem::K::Glue:
      return push_glue(s1_restrict(v->point, f), dim_subst(v->r, f.sub));
    case PushElem::K::HComp: {
      std::vector<PushSide> sides;
      for (const auto& s : v->sides) {
        FaceFormula psi = face_subst(s.face, f.sub);
        if (psi.is_zero()) continue;
        if (psi.is_one()) return s.fam(f, dim1());
        PushFamily fam = s.fam;
        sides.push_back(PushSide{
            psi, [fam, f](const CubeMap& g, const DimExpr& z) {
              return fam(compose(f, g), z);
            }});
      }
      return std::make_shared<PushElem>(PushElem{PushElem::K::HComp, nullptr, dim0(),
                                                 std::move(sides),
                                                 push_restrict(v->cap, f)});
    }
  }
  return v;
}

inline PushPtr interp_push(const Names& I, const TermPtr& t) {
  if (const auto* c = as<TCtor>(t)) {
    if (c->ctor == 0) return push_inl(interp_s1(I, c->args.at(0)));
    if (c->ctor == 1) return push_inr(interp_s1(I, c->args.at(0)));
    return push_glue(interp_s1(I, c->args.at(0)), c->dims.at(0));
  }
  if (const auto* h = as<THcomp>(t)) {
    std::vector<PushSide> sides;
    for (const auto& [phi, u] : h->sides) {
      TermPtr body = u;
      DimName dir = h->dim;
      sides.push_back(PushSide{
          phi, [body, dir](const CubeMap& f, const DimExpr& z) {
            DimSubst s = f.sub;
            s.bind(dir, z);
            return interp_push(f.cod, term_dim_subst(body, s));
          }});
    }
    return push_hcomp(I, std::move(sides), interp_push(I, h->cap));
  }
  throw std::runtime_error("interp_push: not a closed pushout normal form");
}

inline bool push_eq(const PushPtr& a, const PushPtr& b, const Names& I, int fuel) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case PushElem::K::Inl:
    case PushElem::K::Inr: return s1_eq(a->point, b->point, I, fuel);
    case PushElem::K::Glue:
      return dim_eq(a->r, b->r) && s1_eq(a->point, b->point, I, fuel);
    case PushElem::K::HComp: {
      if (!push_eq(a->cap, b->cap, I, fuel)) return false;
      std::vector<FaceFormula> fa, fb;
      for (const auto& s : a->sides) fa.push_back(s.face);
      for (const auto& s : b->sides) fb.push_back(s.face);
      return detail::match_sides(fa, fb, [&](std::size_t k, std::size_t l) {
        if (fuel <= 0) return true;
        for (const auto& f : probes(I)) {
          DimName fresh = fresh_dim("z");
          Names ext = f.cod;
          ext.push_back(fresh);
          CubeMap fext{f.dom, ext, f.sub};
          for (const DimExpr& z : {dim0(), dim1(), dim_atom(fresh)}) {
            const Names& J = (z.is_atom()) ? ext : f.cod;
            const CubeMap& use = (z.is_atom()) ? fext : f;
            if (!push_eq(a->sides[k].fam(use, z), b->sides[l].fam(use, z), J, fuel - 1))
              return false;
          }
        }
        return true;
      });
    }
  }
  return false;
}

inline bool push_stable(const PushPtr& v, const Names& I, int fuel) {
  for (const auto& f : probes(I)) {
    PushPtr vf = push_restrict(v, f);
    for (const auto& g : probes(f.cod)) {
      if (!push_eq(push_restrict(vf, g), push_restrict(v, compose(f, g)), g.cod, fuel))
        return false;
    }
  }
  return true;
}

}  // namespace psh
}  // namespace chit
