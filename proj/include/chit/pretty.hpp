#pragma once

// Precedence-aware printer for core terms.  Output is surface syntax that
// the parser maps back to the same term up to alpha; binder hints are
// disambiguated with primes when nesting would collide.
//
// Precedence levels: 0 lambdas and other right-open forms, 1 ->, 2 *,
// 3 application and the operator heads, 4 atoms.

#include <map>
#include <set>
#include <string>

#include "chit/hit.hpp"
#include "chit/term.hpp"

namespace chit {

class Printer {
 public:
  std::string show(const TermPtr& t, int prec = 0) {
    using std::string;
    return std::visit(
        overloaded{
            [&](const TVar& n) -> string { return name_of(n.name.id, n.name.hint); },
            [&](const TGlobal& n) -> string { return n.name; },
            [&](const TU&) -> string { return "U"; },
            [&](const TPi& n) -> string {
              string s;
              if (mentions_var(n.cod, n.var)) {
                string x = bind(n.var.id, n.var.hint);
                s = "(" + x + " : " + show(n.dom, 0) + ") -> " + show(n.cod, 1);
                unbind(n.var.id, x);
              } else {
                s = show(n.dom, 2) + " -> " + show(n.cod, 1);
              }
              return prec > 1 ? "(" + s + ")" : s;
            },
            [&](const TLam& n) -> string {
              string x = bind(n.var.id, n.var.hint);
              string s = "\\" + x + " -> " + show(n.body, 0);
              unbind(n.var.id, x);
              return prec > 0 ? "(" + s + ")" : s;
            },
            [&](const TApp& n) -> string {
              string s = show(n.fn, 3) + " " + show(n.arg, 4);
              return prec > 3 ? "(" + s + ")" : s;
            },
            [&](const TSigma& n) -> string {
              string s;
              if (mentions_var(n.snd, n.var)) {
                string x = bind(n.var.id, n.var.hint);
                s = "(" + x + " : " + show(n.fst, 0) + ") * " + show(n.snd, 2);
                unbind(n.var.id, x);
              } else {
                s = show(n.fst, 3) + " * " + show(n.snd, 2);
              }
              return prec > 2 ? "(" + s + ")" : s;
            },
            [&](const TPair& n) -> string {
              return "(" + show(n.fst, 0) + ", " + show(n.snd, 0) + ")";
            },
            [&](const TFst& n) -> string {
              string s = "fst " + show(n.pair, 4);
              return prec > 3 ? "(" + s + ")" : s;
            },
            [&](const TSnd& n) -> string {
              string s = "snd " + show(n.pair, 4);
              return prec > 3 ? "(" + s + ")" : s;
            },
            [&](const TPathP& n) -> string {
              string s;
              if (mentions_dim(n.ty, n.dim)) {
                string i = bind_dim(n.dim.id, n.dim.hint);
                s = "Path^" + i + " " + show(n.ty, 4);
                unbind_dim(n.dim.id, i);
              } else {
                s = "Path " + show(n.ty, 4);
              }
              s += " " + show(n.lhs, 4) + " " + show(n.rhs, 4);
              return prec > 3 ? "(" + s + ")" : s;
            },
            [&](const TPLam& n) -> string {
              string i = bind_dim(n.dim.id, n.dim.hint);
              string s = "<" + i + "> " + show(n.body, 0);
              unbind_dim(n.dim.id, i);
              return prec > 0 ? "(" + s + ")" : s;
            },
            [&](const TPApp& n) -> string {
              string s = show(n.path, 3) + " @ " + show_dim(n.arg, 3);
              return prec > 3 ? "(" + s + ")" : s;
            },
            [&](const THitTy& n) -> string {
              string s = n.decl->name;
              for (const auto& p : n.params) s += " " + show(p, 4);
              return (prec > 3 && !n.params.empty()) ? "(" + s + ")" : s;
            },
            [&](const TCtor& n) -> string {
              string s = n.decl->ctors[n.ctor].name;
              for (const auto& a : n.args) s += " " + show(a, 4);
              for (const auto& r : n.dims) s += " " + show_dim(r, 3);
              if (!n.decl->params.empty()) {
                // ascribe so the parameters survive a round trip
                string ty = n.decl->name;
                for (const auto& p : n.params) ty += " " + show(p, 4);
                return "(" + s + " : " + ty + ")";
              }
              bool bare = n.args.empty() && n.dims.empty();
              return (prec > 3 && !bare) ? "(" + s + ")" : s;
            },
            [&](const THcomp& n) -> string {
              string i = bind_dim(n.dim.id, n.dim.hint);
              string s = "hcomp^" + i + " " + show(n.ty, 4) + " [";
              bool first = true;
              for (const auto& [f, u] : n.sides) {
                s += first ? " " : ", ";
                first = false;
                s += show_face(f) + " -> " + show(u, 0);
              }
              s += first ? "]" : " ]";
              unbind_dim(n.dim.id, i);
              s += " " + show(n.cap, 4);
              return prec > 3 ? "(" + s + ")" : s;
            },
            [&](const TTrans& n) -> string {
              string i = bind_dim(n.dim.id, n.dim.hint);
              string ty = show(n.ty, 4);
              unbind_dim(n.dim.id, i);
              string s = "trans^" + i + " " + ty + " " + show_face_atom(n.phi) + " " +
                         show(n.cap, 4);
              return prec > 3 ? "(" + s + ")" : s;
            },
            [&](const TElim& n) -> string {
              string z = bind(n.motive_var.id, n.motive_var.hint);
              string s = "elim (" + z + ". " + show(n.motive, 0) + ") [";
              unbind(n.motive_var.id, z);
              bool first = true;
              for (const auto& b : n.branches) {
                s += first ? " " : ", ";
                first = false;
                s += n.decl->ctors[b.ctor].name;
                std::vector<std::pair<std::uint64_t, std::string>> bound;
                for (const auto& v : b.args) {
                  std::string x = bind(v.id, v.hint);
                  bound.emplace_back(v.id, x);
                  s += " " + x;
                }
                for (const auto& v : b.ihs) {
                  std::string x = bind(v.id, v.hint);
                  bound.emplace_back(v.id, x);
                  s += " " + x;
                }
                std::vector<std::pair<std::uint64_t, std::string>> bound_dims;
                for (const auto& v : b.dims) {
                  std::string x = bind_dim(v.id, v.hint);
                  bound_dims.emplace_back(v.id, x);
                  s += " " + x;
                }
                s += " -> " + show(b.body, 0);
                for (auto it = bound_dims.rbegin(); it != bound_dims.rend(); ++it)
                  unbind_dim(it->first, it->second);
                for (auto it = bound.rbegin(); it != bound.rend(); ++it)
                  unbind(it->first, it->second);
              }
              s += first ? "]" : " ]";
              s += " " + show(n.scrut, 4);
              return prec > 3 ? "(" + s + ")" : s;
            },
            [&](const TAsc& n) -> string {
              return "(" + show(n.tm, 0) + " : " + show(n.ty, 0) + ")";
            },
        },
        t->v);
  }

  std::string show_dim(const DimExpr& e, int prec = 0) {
    switch (e.tag()) {
      case DimTag::Zero: return "0";
      case DimTag::One: return "1";
      case DimTag::Atom: return name_of(e.name().id, e.name().hint);
      case DimTag::Neg: return "@- " + show_dim(e.body(), 3);
      case DimTag::Meet: {
        std::string s = show_dim(e.left(), 2) + " /\\ " + show_dim(e.right(), 3);
        return prec > 2 ? "(" + s + ")" : s;
      }
      case DimTag::Join: {
        std::string s = show_dim(e.left(), 1) + " \\/ " + show_dim(e.right(), 2);
        return prec > 1 ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

  std::string show_face(const FaceFormula& f) {
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
        out += "(" + name_of(n.id, n.hint) + "=" + (v ? "1" : "0") + ")";
      }
    }
    return out;
  }

  // a face in argument position: parenthesized unless it is a single atom
  std::string show_face_atom(const FaceFormula& f) {
    std::string s = show_face(f);
    bool atom = f.is_zero() || f.is_one() ||
                (f.conjs().size() == 1 && f.conjs()[0].eqs.size() == 1);
    return atom ? s : "(" + s + ")";
  }

 private:
  std::map<std::uint64_t, std::string> names_;
  std::set<std::string> used_;

  static bool mentions_var(const TermPtr& t, const TermName& x) {
    return term_free_vars(t).count(x.id) > 0;
  }
  static bool mentions_dim(const TermPtr& t, const DimName& i) {
    for (const auto& n : term_free_dims(t))
      if (n.id == i.id) return true;
    return false;
  }

  std::string pick(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    std::string cand = base;
    while (used_.count(cand)) cand += "'";
    return cand;
  }

  std::string bind(std::uint64_t id, const std::string& hint) {
    std::string n = pick(hint);
    names_[id] = n;
    used_.insert(n);
    return n;
  }
  void unbind(std::uint64_t id, const std::string& n) {
    names_.erase(id);
    used_.erase(n);
  }
  std::string bind_dim(std::uint64_t id, const std::string& hint) { return bind(id, hint); }
  void unbind_dim(std::uint64_t id, const std::string& n) { unbind(id, n); }

  std::string name_of(std::uint64_t id, const std::string& hint) {
    auto it = names_.find(id);
    if (it != names_.end()) return it->second;
    return hint.empty() ? "_x" + std::to_string(id) : hint;
  }
};

inline std::string pretty(const TermPtr& t) {
  Printer p;
  return p.show(t, 0);
}

inline std::string pretty_face(const FaceFormula& f) {
  Printer p;
  return p.show_face(f);
}

}  // namespace chit
