#pragma once

// Interval and face algebra: the free De Morgan algebra over dimension names
// and the distributive face lattice generated by (i=0), (i=1).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chit {

// ---------------------------------------------------------------------------
// Names

// Single monotone supply shared by dimension and term names; ids are never
// reused, so capture avoidance reduces to picking a fresh id.
inline std::atomic<std::uint64_t> name_supply{1};

inline std::uint64_t next_name_id() {
  return name_supply.fetch_add(1, std::memory_order_relaxed);
}

struct DimName {
  std::uint64_t id = 0;
  std::string hint;  // printing only; identity is the id
};

inline bool operator==(const DimName& a, const DimName& b) { return a.id == b.id; }
inline bool operator!=(const DimName& a, const DimName& b) { return a.id != b.id; }
inline bool operator<(const DimName& a, const DimName& b) { return a.id < b.id; }

inline DimName fresh_dim(const std::string& hint = "i") {
  return DimName{next_name_id(), hint};
}

// ---------------------------------------------------------------------------
// Interval expressions
//
// Grammar: 0 | 1 | i | 1-r | r /\ s | r \/ s.  Nodes are immutable and
// shared.  The smart constructors collapse constants, double involutions and
// structurally equal operands, so no 1-0, 1-1 or 1-(1-r) node ever exists.

struct DimNode;
using DimNodePtr = std::shared_ptr<const DimNode>;

enum class DimTag { Zero, One, Atom, Neg, Meet, Join };

struct DimNode {
  DimTag tag;
  DimName name;       // Atom
  DimNodePtr a, b;    // Neg: a;  Meet/Join: a, b
};

class DimExpr {
 public:
  DimExpr() : n_(zero_node()) {}
  explicit DimExpr(DimNodePtr n) : n_(std::move(n)) {}

  DimTag tag() const { return n_->tag; }
  const DimName& name() const { return n_->name; }
  DimExpr left() const { return DimExpr(n_->a); }
  DimExpr right() const { return DimExpr(n_->b); }
  DimExpr body() const { return DimExpr(n_->a); }  // of a Neg

  bool is_zero() const { return n_->tag == DimTag::Zero; }
  bool is_one() const { return n_->tag == DimTag::One; }
  bool is_atom() const { return n_->tag == DimTag::Atom; }

  const DimNodePtr& node() const { return n_; }

 private:
  static DimNodePtr zero_node() {
    static const DimNodePtr z = std::make_shared<DimNode>(DimNode{DimTag::Zero, {}, nullptr, nullptr});
    return z;
  }
  DimNodePtr n_;
};

inline DimExpr dim0() { return DimExpr(); }

inline DimExpr dim1() {
  static const DimNodePtr o = std::make_shared<DimNode>(DimNode{DimTag::One, {}, nullptr, nullptr});
  return DimExpr(o);
}

inline DimExpr dim_atom(const DimName& n) {
  return DimExpr(std::make_shared<DimNode>(DimNode{DimTag::Atom, n, nullptr, nullptr}));
}

inline bool dim_struct_eq(const DimExpr& a, const DimExpr& b) {
  if (a.node().get() == b.node().get()) return true;
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case DimTag::Zero:
    case DimTag::One: return true;
    case DimTag::Atom: return a.name() == b.name();
    case DimTag::Neg: return dim_struct_eq(a.body(), b.body());
    case DimTag::Meet:
    case DimTag::Join:
      return dim_struct_eq(a.left(), b.left()) && dim_struct_eq(a.right(), b.right());
  }
  return false;
}

inline DimExpr dim_neg(const DimExpr& r) {
  switch (r.tag()) {
    case DimTag::Zero: return dim1();
    case DimTag::One: return dim0();
    case DimTag::Neg: return r.body();
    default:
      return DimExpr(std::make_shared<DimNode>(DimNode{DimTag::Neg, {}, r.node(), nullptr}));
  }
}

inline DimExpr dim_meet(const DimExpr& a, const DimExpr& b) {
  if (a.is_zero() || b.is_zero()) return dim0();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (dim_struct_eq(a, b)) return a;
  return DimExpr(std::make_shared<DimNode>(DimNode{DimTag::Meet, {}, a.node(), b.node()}));
}

inline DimExpr dim_join(const DimExpr& a, const DimExpr& b) {
  if (a.is_one() || b.is_one()) return dim1();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (dim_struct_eq(a, b)) return a;
  return DimExpr(std::make_shared<DimNode>(DimNode{DimTag::Join, {}, a.node(), b.node()}));
}

inline void dim_free_names_into(const DimExpr& e, std::vector<DimName>& out) {
  switch (e.tag()) {
    case DimTag::Zero:
    case DimTag::One: return;
    case DimTag::Atom: out.push_back(e.name()); return;
    case DimTag::Neg: dim_free_names_into(e.body(), out); return;
    case DimTag::Meet:
    case DimTag::Join:
      dim_free_names_into(e.left(), out);
      dim_free_names_into(e.right(), out);
      return;
  }
}

inline std::vector<DimName> dim_free_names(const DimExpr& e) {
  std::vector<DimName> out;
  dim_free_names_into(e, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const DimName& a, const DimName& b) { return a.id == b.id; }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Dimension substitutions

class DimSubst {
 public:
  DimSubst() = default;

  static DimSubst single(const DimName& n, const DimExpr& r) {
    DimSubst s;
    s.m_.emplace(n.id, r);
    return s;
  }

  DimSubst& bind(const DimName& n, const DimExpr& r) {
    m_[n.id] = r;
    return *this;
  }

  std::optional<DimExpr> lookup(const DimName& n) const {
    auto it = m_.find(n.id);
    if (it == m_.end()) return std::nullopt;
    return it->second;
  }

  bool empty() const { return m_.empty(); }
  const std::map<std::uint64_t, DimExpr>& entries() const { return m_; }

 private:
  std::map<std::uint64_t, DimExpr> m_;
};

inline DimExpr dim_subst(const DimExpr& e, const DimSubst& s) {
  if (s.empty()) return e;
  switch (e.tag()) {
    case DimTag::Zero:
    case DimTag::One: return e;
    case DimTag::Atom: {
      auto r = s.lookup(e.name());
      return r ? *r : e;
    }
    case DimTag::Neg: return dim_neg(dim_subst(e.body(), s));
    case DimTag::Meet: return dim_meet(dim_subst(e.left(), s), dim_subst(e.right(), s));
    case DimTag::Join: return dim_join(dim_subst(e.left(), s), dim_subst(e.right(), s));
  }
  return e;
}

// ---------------------------------------------------------------------------
// Equality via the four-element De Morgan algebra
//
// {0, a, b, 1}: the diamond lattice with the involution fixing both middle
// elements.  It generates the variety of De Morgan algebras, so two interval
// expressions are equal in the free algebra iff they agree under every
// valuation of their names into it.

namespace dm4 {
// encoding: 0 -> 0, a -> 1, b -> 2, 1 -> 3
inline std::uint8_t meet(std::uint8_t x, std::uint8_t y) {
  if (x == y) return x;
  if (x == 0 || y == 0) return 0;
  if (x == 3) return y;
  if (y == 3) return x;
  return 0;  // a /\ b
}
inline std::uint8_t join(std::uint8_t x, std::uint8_t y) {
  if (x == y) return x;
  if (x == 3 || y == 3) return 3;
  if (x == 0) return y;
  if (y == 0) return x;
  return 3;  // a \/ b
}
inline std::uint8_t neg(std::uint8_t x) {
  if (x == 0) return 3;
  if (x == 3) return 0;
  return x;  // both middle elements are fixed
}
}  // namespace dm4

inline std::uint8_t dim_eval_dm4(const DimExpr& e,
                                 const std::vector<DimName>& names,
                                 const std::vector<std::uint8_t>& vals) {
  switch (e.tag()) {
    case DimTag::Zero: return 0;
    case DimTag::One: return 3;
    case DimTag::Atom: {
      for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == e.name()) return vals[k];
      return 0;  // unreachable for names drawn from the expression
    }
    case DimTag::Neg: return dm4::neg(dim_eval_dm4(e.body(), names, vals));
    case DimTag::Meet:
      return dm4::meet(dim_eval_dm4(e.left(), names, vals),
                       dim_eval_dm4(e.right(), names, vals));
    case DimTag::Join:
      return dm4::join(dim_eval_dm4(e.left(), names, vals),
                       dim_eval_dm4(e.right(), names, vals));
  }
  return 0;
}

inline bool dim_eq(const DimExpr& r, const DimExpr& s) {
  if (dim_struct_eq(r, s)) return true;
  std::vector<DimName> names;
  dim_free_names_into(r, names);
  dim_free_names_into(s, names);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end(),
                          [](const DimName& a, const DimName& b) { return a.id == b.id; }),
              names.end());
  const std::size_t n = names.size();
  std::vector<std::uint8_t> vals(n, 0);
  const std::uint64_t total = 1ull << (2 * n);  // 4^n valuations
  for (std::uint64_t v = 0; v < total; ++v) {
    std::uint64_t w = v;
    for (std::size_t k = 0; k < n; ++k, w >>= 2) vals[k] = static_cast<std::uint8_t>(w & 3);
    if (dim_eval_dm4(r, names, vals) != dim_eval_dm4(s, names, vals)) return false;
  }
  return true;
}

inline bool dim_is_zero(const DimExpr& r) { return dim_eq(r, dim0()); }
inline bool dim_is_one(const DimExpr& r) { return dim_eq(r, dim1()); }

// ---------------------------------------------------------------------------
// Face lattice
//
// Canonical form: an irredundant antichain DNF.  A conjunction maps names to
// a forced endpoint; a formula is a sorted set of conjunctions none of which
// contains another.  0n is the empty disjunction, 1n the one containing the
// empty conjunction.

struct FaceConj {
  // strictly increasing by name id; bool true means (i=1)
  std::vector<std::pair<DimName, bool>> eqs;

  bool subset_of(const FaceConj& other) const {
    // every constraint of *this also in other  (so other is the stronger one)
    std::size_t j = 0;
    for (const auto& e : eqs) {
      while (j < other.eqs.size() && other.eqs[j].first.id < e.first.id) ++j;
      if (j == other.eqs.size() || other.eqs[j].first.id != e.first.id ||
          other.eqs[j].second != e.second)
        return false;
    }
    return true;
  }
};

inline bool operator==(const FaceConj& a, const FaceConj& b) {
  if (a.eqs.size() != b.eqs.size()) return false;
  for (std::size_t k = 0; k < a.eqs.size(); ++k)
    if (a.eqs[k].first.id != b.eqs[k].first.id || a.eqs[k].second != b.eqs[k].second)
      return false;
  return true;
}

inline bool operator<(const FaceConj& a, const FaceConj& b) {
  const std::size_t n = std::min(a.eqs.size(), b.eqs.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (a.eqs[k].first.id != b.eqs[k].first.id) return a.eqs[k].first.id < b.eqs[k].first.id;
    if (a.eqs[k].second != b.eqs[k].second) return !a.eqs[k].second && b.eqs[k].second;
  }
  return a.eqs.size() < b.eqs.size();
}

// merge two conjunctions; nullopt on clash (i=0)/\(i=1) = 0n
inline std::optional<FaceConj> conj_and(const FaceConj& a, const FaceConj& b) {
  FaceConj out;
  std::size_t i = 0, j = 0;
  while (i < a.eqs.size() || j < b.eqs.size()) {
    if (j == b.eqs.size() || (i < a.eqs.size() && a.eqs[i].first.id < b.eqs[j].first.id)) {
      out.eqs.push_back(a.eqs[i++]);
    } else if (i == a.eqs.size() || b.eqs[j].first.id < a.eqs[i].first.id) {
      out.eqs.push_back(b.eqs[j++]);
    } else {
      if (a.eqs[i].second != b.eqs[j].second) return std::nullopt;
      out.eqs.push_back(a.eqs[i++]);
      ++j;
    }
  }
  return out;
}

class FaceFormula {
 public:
  FaceFormula() = default;  // 0n

  static FaceFormula zero() { return FaceFormula(); }

  static FaceFormula one() {
    FaceFormula f;
    f.ds_.push_back(FaceConj{});
    return f;
  }

  static FaceFormula eq(const DimName& n, bool one_side) {
    FaceFormula f;
    f.ds_.push_back(FaceConj{{{n, one_side}}});
    return f;
  }

  static FaceFormula from_conjs(std::vector<FaceConj> cs) {
    FaceFormula f;
    f.ds_ = std::move(cs);
    f.normalize();
    return f;
  }

  bool is_zero() const { return ds_.empty(); }
  bool is_one() const { return ds_.size() == 1 && ds_[0].eqs.empty(); }

  const std::vector<FaceConj>& conjs() const { return ds_; }

  friend bool operator==(const FaceFormula& a, const FaceFormula& b) {
    return a.ds_ == b.ds_;
  }
  friend bool operator!=(const FaceFormula& a, const FaceFormula& b) {
    return !(a.ds_ == b.ds_);
  }

 private:
  void normalize() {
    std::sort(ds_.begin(), ds_.end());
    ds_.erase(std::unique(ds_.begin(), ds_.end()), ds_.end());
    // drop any conjunction that strengthens another (superset of its constraints)
    std::vector<FaceConj> keep;
    for (std::size_t i = 0; i < ds_.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < ds_.size() && !redundant; ++j)
        redundant = i != j && ds_[j].subset_of(ds_[i]);
      if (!redundant) keep.push_back(ds_[i]);
    }
    ds_ = std::move(keep);
  }

  std::vector<FaceConj> ds_;
};

inline FaceFormula face_or(const FaceFormula& a, const FaceFormula& b) {
  std::vector<FaceConj> cs = a.conjs();
  cs.insert(cs.end(), b.conjs().begin(), b.conjs().end());
  return FaceFormula::from_conjs(std::move(cs));
}

inline FaceFormula face_and(const FaceFormula& a, const FaceFormula& b) {
  std::vector<FaceConj> cs;
  for (const auto& x : a.conjs())
    for (const auto& y : b.conjs())
      if (auto m = conj_and(x, y)) cs.push_back(*m);
  return FaceFormula::from_conjs(std::move(cs));
}

// phi entails psi: every conjunction of phi is covered by one of psi
inline bool face_entails(const FaceFormula& phi, const FaceFormula& psi) {
  for (const auto& c : phi.conjs()) {
    bool covered = false;
    for (const auto& d : psi.conjs())
      if (d.subset_of(c)) { covered = true; break; }
    if (!covered) return false;
  }
  return true;
}

// The canonical lattice map I -> F sending i to (i=1); one_side false asks
// for (r=0), i.e. the image of 1-r.
inline FaceFormula face_of_dim(const DimExpr& r, bool one_side = true) {
  switch (r.tag()) {
    case DimTag::Zero: return one_side ? FaceFormula::zero() : FaceFormula::one();
    case DimTag::One: return one_side ? FaceFormula::one() : FaceFormula::zero();
    case DimTag::Atom: return FaceFormula::eq(r.name(), one_side);
    case DimTag::Neg: return face_of_dim(r.body(), !one_side);
    case DimTag::Meet:
      return one_side
                 ? face_and(face_of_dim(r.left(), true), face_of_dim(r.right(), true))
                 : face_or(face_of_dim(r.left(), false), face_of_dim(r.right(), false));
    case DimTag::Join:
      return one_side
                 ? face_or(face_of_dim(r.left(), true), face_of_dim(r.right(), true))
                 : face_and(face_of_dim(r.left(), false), face_of_dim(r.right(), false));
  }
  return FaceFormula::zero();
}

inline FaceFormula face_subst(const FaceFormula& phi, const DimSubst& s) {
  FaceFormula out = FaceFormula::zero();
  for (const auto& c : phi.conjs()) {
    FaceFormula conj = FaceFormula::one();
    for (const auto& [n, v] : c.eqs) {
      auto r = s.lookup(n);
      conj = face_and(conj, r ? face_of_dim(*r, v) : FaceFormula::eq(n, v));
    }
    out = face_or(out, conj);
  }
  return out;
}

// A conjunction as the substitution it forces.
inline DimSubst conj_subst(const FaceConj& c) {
  DimSubst s;
  for (const auto& [n, v] : c.eqs) s.bind(n, v ? dim1() : dim0());
  return s;
}

inline std::vector<DimName> face_free_names(const FaceFormula& f) {
  std::vector<DimName> out;
  for (const auto& c : f.conjs())
    for (const auto& [n, v] : c.eqs) out.push_back(n);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const DimName& a, const DimName& b) { return a.id == b.id; }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Printing (shared by error rendering and the pretty printer)

inline std::string dim_show(const DimExpr& e, int prec = 0) {
  // precedence: \/ = 1, /\ = 2, atoms/neg = 3
  switch (e.tag()) {
    case DimTag::Zero: return "0";
    case DimTag::One: return "1";
    case DimTag::Atom: return e.name().hint.empty() ? ("_d" + std::to_string(e.name().id)) : e.name().hint;
    case DimTag::Neg: return "@- " + dim_show(e.body(), 3);
    case DimTag::Meet: {
      std::string s = dim_show(e.left(), 2) + " /\\ " + dim_show(e.right(), 3);
      return prec > 2 ? "(" + s + ")" : s;
    }
    case DimTag::Join: {
      std::string s = dim_show(e.left(), 1) + " \\/ " + dim_show(e.right(), 2);
      return prec > 1 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

inline std::string face_show(const FaceFormula& f) {
  if (f.is_zero()) return "0F";
  if (f.is_one()) return "1F";
  std::string out;
  bool first_c = true;
  for (const auto& c : f.conjs()) {
    if (!first_c) out += " \\/ ";
    first_c = false;
    bool first_e = true;
    for (const auto& [n, v] : c.eqs) {
      if (!first_e) out += " /\\ ";
      first_e = false;
      out += "(" + (n.hint.empty() ? "_d" + std::to_string(n.id) : n.hint) + "=" + (v ? "1" : "0") + ")";
    }
  }
  return out;
}

}  // namespace chit
