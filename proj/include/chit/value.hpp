#pragma once

// Semantic values.  Weak-head forms with closures for term binders and open
// values for dimension binders.  Every value supports the dimension action
// (act, in eval.hpp): substituting interval expressions for free dimension
// names, re-firing boundary collapses and Kan reductions along the way.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chit/hit.hpp"
#include "chit/term.hpp"

namespace chit {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;
struct Neutral;
using NePtr = std::shared_ptr<const Neutral>;

class GlobalEnv;

// ---------------------------------------------------------------------------
// Environments: persistent association lists.  Every free variable and free
// dimension of a term must be bound before evaluation; context dimensions are
// bound to themselves.

struct EnvNode {
  bool is_dim;
  TermName tvar;
  DimName dvar;
  ValuePtr val;
  DimExpr dim;
  std::shared_ptr<const EnvNode> next;
};

class Env {
 public:
  Env() = default;
  explicit Env(const GlobalEnv* globals) : globals_(globals) {}

  Env bind(const TermName& x, ValuePtr v) const {
    Env e = *this;
    e.head_ = std::make_shared<EnvNode>(EnvNode{false, x, {}, std::move(v), {}, head_});
    return e;
  }

  Env bind_dim(const DimName& i, const DimExpr& r) const {
    Env e = *this;
    e.head_ = std::make_shared<EnvNode>(EnvNode{true, {}, i, nullptr, r, head_});
    return e;
  }

  const ValuePtr* lookup(const TermName& x) const {
    for (const EnvNode* n = head_.get(); n; n = n->next.get())
      if (!n->is_dim && n->tvar == x) return &n->val;
    return nullptr;
  }

  std::optional<DimExpr> lookup_dim(const DimName& i) const {
    for (const EnvNode* n = head_.get(); n; n = n->next.get())
      if (n->is_dim && n->dvar == i) return n->dim;
    return std::nullopt;
  }

  const GlobalEnv* globals() const { return globals_; }
  const std::shared_ptr<const EnvNode>& head() const { return head_; }

  Env with_head(std::shared_ptr<const EnvNode> h) const {
    Env e = *this;
    e.head_ = std::move(h);
    return e;
  }

 private:
  std::shared_ptr<const EnvNode> head_;
  const GlobalEnv* globals_ = nullptr;
};

// A term binder: apply with eval(env.bind(var, v), body).
struct Closure {
  TermName var;
  TermPtr body;
  Env env;
};

// A dimension binder: an open value with a distinguished free name.
// Instantiate with act(body, var := r).
struct Line {
  DimName var;
  ValuePtr body;
};

struct VSide {
  FaceFormula face;
  Line line;
};

// ---------------------------------------------------------------------------
// Value forms

struct VU {};
struct VPi { ValuePtr dom; Closure cod; };
struct VSigma { ValuePtr fst; Closure snd; };
struct VPathP { Line ty; ValuePtr lhs, rhs; };
struct VLam { Closure body; };
struct VPair { ValuePtr fst, snd; };
struct VPLam { Line body; };
struct VHitTy { const HITDecl* decl; std::vector<ValuePtr> params; };

// Constructor values are canonical: the substituted boundary never covers 1F.
struct VCtor {
  const HITDecl* decl;
  int ctor;
  std::vector<ValuePtr> params, args;
  std::vector<DimExpr> dims;
};

// hcomp at a HIT (a constructor) or lazily at Pi/Sigma/Path, where the
// eliminators push it structurally; the system face never covers 1F.
struct VHcomp {
  ValuePtr ty;
  std::vector<VSide> sides;
  ValuePtr cap;
};

// trans lazily at Pi/Sigma/Path type lines; consumed by the eliminators.
struct VTrans {
  Line ty;
  FaceFormula phi;
  ValuePtr cap;
};

struct VNe {
  NePtr ne;
  ValuePtr ty;
};

using ValueV = std::variant<VU, VPi, VSigma, VPathP, VLam, VPair, VPLam, VHitTy, VCtor,
                            VHcomp, VTrans, VNe>;

struct Value {
  ValueV v;
};

inline ValuePtr mkv(ValueV v) { return std::make_shared<Value>(Value{std::move(v)}); }

template <class T>
const T* vas(const ValuePtr& v) {
  return std::get_if<T>(&v->v);
}

// ---------------------------------------------------------------------------
// Neutral spines.  Heads are variables; dimension substitution cannot create
// a redex at the head, but path applications and system faces inside a spine
// can fire, so the action rebuilds spines through the smart eliminators.

// Eliminator data shared by branches; one environment for all closures.
// The target declaration is recovered from the scrutinee.
struct ElimClosure {
  TermName motive_var;
  TermPtr motive;
  std::vector<ElimBranch> branches;
  Env env;
};

struct NVar { TermName name; ValuePtr ty; };
struct NApp { NePtr fn; ValuePtr arg; };
struct NFst { NePtr pair; };
struct NSnd { NePtr pair; };
struct NPApp { NePtr path; DimExpr arg; };
struct NElim { std::shared_ptr<const ElimClosure> elim; NePtr scrut; };

// hcomp whose type is neutral: permanently stuck (heads are term variables).
struct NHcompNe { ValuePtr ty; std::vector<VSide> sides; ValuePtr cap; };

// trans whose type line is neutral, or whose cap is neutral at a
// parameterized HIT line.
struct NTrans { Line ty; FaceFormula phi; ValuePtr cap; };

using NeutralV = std::variant<NVar, NApp, NFst, NSnd, NPApp, NElim, NHcompNe, NTrans>;

struct Neutral {
  NeutralV v;
};

inline NePtr mkne(NeutralV v) { return std::make_shared<Neutral>(Neutral{std::move(v)}); }

template <class T>
const T* nas(const NePtr& n) {
  return std::get_if<T>(&n->v);
}

inline ValuePtr var_value(const TermName& x, ValuePtr ty) {
  return mkv(VNe{mkne(NVar{x, ty}), std::move(ty)});
}

// ---------------------------------------------------------------------------
// Globals

struct GlobalDef {
  ValuePtr type;
  ValuePtr value;
  TermPtr type_term;
  TermPtr body_term;
};

class GlobalEnv {
 public:
  const GlobalDef* lookup(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
  }
  void define(const std::string& name, GlobalDef d) { defs_[name] = std::move(d); }
  bool defined(const std::string& name) const { return defs_.count(name) > 0; }
  const std::map<std::string, GlobalDef>& all() const { return defs_; }

 private:
  std::map<std::string, GlobalDef> defs_;
};

// Evaluation failures on well-typed input are kernel bugs; the only lawful
// throw is composition at the universe, which the checker also guards.
struct EvalError {
  enum class Kind { UnsupportedUniverseKan, Internal };
  Kind kind;
  std::string msg;
};

[[noreturn]] inline void eval_fail(EvalError::Kind k, const std::string& msg) {
  throw EvalError{k, msg};
}

}  // namespace chit
