#pragma once

// Built-in validation suites.  Each suite exercises one guarantee of the
// kernel end to end — judgmental equations, the torus round-trip, stability
// of normalization under interval substitution, the contract of derived
// composition, agreement of the two transport implementations, agreement
// with the presheaf semantics, the interval decision procedure against a
// rewriting oracle, and rejection of ill-formed input.  The command line
// exposes them through `kernel selftest`.

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chit/presheaf.hpp"
#include "chit/pretty.hpp"
#include "chit/typecheck.hpp"

namespace chit {

struct SelftestOptions {
  std::uint64_t seed = 20240913;
  int probe_depth = 1;
  bool generic_trans = false;
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::string detail;
  double ms = 0.0;
};

namespace selftest {

// collects the first failure and counts the rest
struct Check {
  bool ok = true;
  int failures = 0;
  std::string first;

  void req(bool cond, const std::string& what) {
    if (cond) return;
    ++failures;
    if (ok) first = what;
    ok = false;
  }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline SuiteResult finish(const std::string& name, const Check& c, const Stopwatch& w,
                          const std::string& summary) {
  SuiteResult r{name, c.ok, "", w.ms()};
  if (c.ok) {
    r.detail = summary;
  } else {
    std::ostringstream os;
    os << c.failures << " failure(s); first: " << c.first;
    r.detail = os.str();
  }
  return r;
}

inline TermPtr nf(const Env& env, const ValuePtr& ty, const TermPtr& t) {
  return readback(ty, eval(env, t));
}

struct Session {
  GlobalEnv globals;
  Ctx ctx;

  Session() { ctx.env = Env(&globals); }

  TermPtr parse(const std::string& src, std::vector<std::pair<std::string, DimName>>& dims) {
    std::set<std::string> names;
    for (const auto& [n, d] : globals.all()) names.insert(n);
    return parse_expr(src, names, dims);
  }

  Ctx with_dims(const std::vector<std::pair<std::string, DimName>>& dims) const {
    Ctx c = ctx;
    for (const auto& [s, d] : dims) c = c.bind_dim(d);
    return c;
  }
};

inline DimName find_dim(const std::vector<std::pair<std::string, DimName>>& dims,
                        const std::string& name) {
  for (const auto& [s, d] : dims)
    if (s == name) return d;
  return dims.front().second;
}

// -- judgmental equation corpus -----------------------------------------------

struct EqCase {
  const char* ty;
  const char* lhs;
  const char* rhs;
};

inline const std::vector<EqCase>& equation_corpus() {
  static const std::vector<EqCase> cases = {
      // constructor boundaries
      {"S1", "loop 0", "base"},
      {"S1", "loop 1", "base"},
      {"S2", "loop2 0 j", "base2"},
      {"S2", "loop2 i 1", "base2"},
      {"S3", "loop3 i 0 k", "base3"},
      {"S4", "loop4 0 j k m", "base4"},
      {"T", "tp 0", "b"},
      {"T", "tp 1", "b"},
      {"T", "tq 1", "b"},
      {"T", "surf 0 j", "tp j"},
      {"T", "surf 1 j", "tp j"},
      {"T", "surf i 0", "tq i"},
      {"T", "surf i 1", "tq i"},
      {"TF", "surfF i 0", "bF"},
      {"TF", "surfF 0 j", "hcomp^k TF [ (j=0) -> bF, (j=1) -> tqF k ] (tpF j)"},
      {"TF", "surfF 1 j", "hcomp^k TF [ (j=0) -> bF, (j=1) -> tpF k ] (tqF j)"},
      {"Susp S1", "(merid base 0 : Susp S1)", "(N : Susp S1)"},
      {"Susp S1", "(merid base 1 : Susp S1)", "(S : Susp S1)"},
      {"Susp S1", "(merid (loop i) 0 : Susp S1)", "(N : Susp S1)"},
      {"Trunc S1", "(sq (inc base) (inc (loop i)) 0 : Trunc S1)", "(inc base : Trunc S1)"},
      {"Trunc S1", "(sq (inc base) (inc (loop i)) 1 : Trunc S1)", "(inc (loop i) : Trunc S1)"},
      {"Push S1 S1 S1 (\\x -> x) (\\x -> x)",
       "(push base 0 : Push S1 S1 S1 (\\x -> x) (\\x -> x))",
       "(inl base : Push S1 S1 S1 (\\x -> x) (\\x -> x))"},
      {"Push S1 S1 S1 (\\x -> x) (\\x -> x)",
       "(push (loop i) 1 : Push S1 S1 S1 (\\x -> x) (\\x -> x))",
       "(inr (loop i) : Push S1 S1 S1 (\\x -> x) (\\x -> x))"},
      // transport at constant lines, any face
      {"S1", "trans^i S1 0F base", "base"},
      {"S1", "trans^i S1 (j=0) (loop j)", "loop j"},
      {"S1", "trans^i S1 (j=0) (hcomp^k S1 [ (j=0) -> base ] base)",
       "hcomp^k S1 [ (j=0) -> base ] base"},
      {"T", "trans^i T 0F (surf j k)", "surf j k"},
      {"Nat", "trans^i Nat 1F zero", "zero"},
      {"Path S1 base base", "trans^i (Path S1 base base) 1F (<m> base)", "<m> base"},
      // eliminator computation, including composition in the scrutinee
      {"Nat", "elim (z. Nat) [ zero -> zero, suc n ih -> suc ih ] (suc (suc zero))",
       "suc (suc zero)"},
      {"S1", "elim (z. S1) [ base -> base, loop s -> loop s ] base", "base"},
      {"S1", "elim (z. S1) [ base -> base, loop s -> loop s ] (loop i)", "loop i"},
      {"S1",
       "elim (z. S1) [ b -> base, tp s -> loop s, tq s -> base, surf s t -> loop t ]"
       " (surf i j)",
       "loop j"},
      {"S1",
       "elim (z. S1) [ b -> base, tp s -> loop s, tq s -> base, surf s t -> loop t ]"
       " (hcomp^k T [ (i=0) -> tp k ] b)",
       "hcomp^k S1 [ (i=0) -> loop k ] base"},
      {"Nat",
       "elim (z. Nat) [ zero -> zero, suc n ih -> suc ih ]"
       " (hcomp^k Nat [ (i=0) -> suc zero ] (suc zero))",
       "hcomp^k Nat [ (i=0) -> suc zero ] (suc zero)"},
      // filling and squeezing at their endpoints
      {"S1", "transFill^i S1 0F base 0", "base"},
      {"S1", "transFill^i S1 0F (loop j) 1", "loop j"},
      {"S1", "squeeze^i S1 0F (loop j) 1", "loop j"},
      {"S1", "squeeze^i S1 0F (loop j) 0", "loop j"},
      {"S1", "hfill^i S1 [ (j=0) -> loop i ] base 0", "base"},
      {"S1", "hfill^i S1 [ (j=0) -> loop i ] base 1", "hcomp^i S1 [ (j=0) -> loop i ] base"},
      // composition with a total face returns its side
      {"S1", "comp^i S1 [ 1F -> loop (i /\\ j) ] base", "loop j"},
      {"S1", "comp^i S1 [ (j=0) -> loop i ] base", "hcomp^i S1 [ (j=0) -> loop i ] base"},
      // path application
      {"S1", "((<m> loop m) : Path S1 base base) @ i", "loop i"},
      {"S1", "((<m> loop m) : Path S1 base base) @ 1", "base"},
  };
  return cases;
}

inline SuiteResult suite_equations(const SelftestOptions&) {
  Stopwatch w;
  Check c;
  Session s;
  for (const auto& e : equation_corpus()) {
    try {
      std::vector<std::pair<std::string, DimName>> dims;
      TermPtr ty_t = s.parse(e.ty, dims);
      TermPtr lhs = s.parse(e.lhs, dims);
      TermPtr rhs = s.parse(e.rhs, dims);
      Ctx ctx = s.with_dims(dims);
      TermPtr tye = check_type(ctx, ty_t);
      ValuePtr tyv = eval(ctx.env, tye);
      TermPtr ln = nf(ctx.env, tyv, check(ctx, lhs, tyv));
      TermPtr rn = nf(ctx.env, tyv, check(ctx, rhs, tyv));
      c.req(alpha_eq(ln, rn), std::string(e.lhs) + "  vs  " + e.rhs + "  normalized to  " +
                                  pretty(ln) + "  vs  " + pretty(rn));
    } catch (const TypeError& err) {
      c.req(false, std::string(e.lhs) + " : " + err.msg);
    } catch (const ParseError& err) {
      c.req(false, std::string(e.lhs) + " : parse: " + err.msg);
    }
  }
  std::ostringstream os;
  os << equation_corpus().size() << " equations normalized to identical terms";
  return finish("equations", c, w, os.str());
}

// -- torus round-trip ----------------------------------------------------------

inline const char* torus_module_src() {
  return
      "f1 : T -> S1 * S1 = \\t ->\n"
      "  elim (z. S1 * S1)\n"
      "    [ b -> (base, base)\n"
      "    , tp i -> (loop i, base)\n"
      "    , tq i -> (base, loop i)\n"
      "    , surf i j -> (loop j, loop i) ] t\n"
      "\n"
      "f2 : S1 * S1 -> T = \\x ->\n"
      "  elim (z. T)\n"
      "    [ base -> elim (w. T) [ base -> b, loop s -> tq s ] (snd x)\n"
      "    , loop r -> elim (w. T) [ base -> tp r, loop s -> surf s r ] (snd x)\n"
      "    ] (fst x)\n";
}

inline SuiteResult suite_torus(const SelftestOptions&) {
  Stopwatch w;
  Check c;
  Session s;
  try {
    check_module(parse_module(torus_module_src()), s.globals);
    ValuePtr t_ty = mkv(VHitTy{find_decl("T"), {}});
    for (const char* point : {"b", "tp i", "tq i", "surf i j"}) {
      std::vector<std::pair<std::string, DimName>> dims;
      TermPtr back = s.parse(std::string("f2 (f1 (") + point + "))", dims);
      TermPtr orig = s.parse(point, dims);
      Ctx ctx = s.with_dims(dims);
      TermPtr bn = nf(ctx.env, t_ty, check(ctx, back, t_ty));
      TermPtr on = nf(ctx.env, t_ty, check(ctx, orig, t_ty));
      c.req(alpha_eq(bn, on), std::string("f2 (f1 (") + point + ")) normalized to " + pretty(bn));
    }
    {
      std::vector<std::pair<std::string, DimName>> dims;
      TermPtr prod_t = s.parse("S1 * S1", dims);
      TermPtr fwd = s.parse("f1 (f2 (loop i, loop j))", dims);
      TermPtr expect = s.parse("(loop i, loop j)", dims);
      Ctx ctx = s.with_dims(dims);
      ValuePtr prod = eval(ctx.env, check_type(ctx, prod_t));
      TermPtr fn = nf(ctx.env, prod, check(ctx, fwd, prod));
      TermPtr en = nf(ctx.env, prod, check(ctx, expect, prod));
      c.req(alpha_eq(fn, en), "f1 (f2 (loop i, loop j)) normalized to " + pretty(fn));
    }
  } catch (const TypeError& err) {
    c.req(false, "torus module: " + err.msg);
  } catch (const ParseError& err) {
    c.req(false, "torus module parse: " + err.msg);
  }
  return finish("torus-roundtrip", c, w, "f2 after f1 is the identity on all four cells");
}

// -- random well-typed terms --------------------------------------------------

enum class Kind { Circle, Torus, Suspension, Naturals, Pushout };

struct TermGen {
  std::mt19937_64& rng;
  std::vector<DimName> dims;
  TermPtr s1_shell, t_shell, susp_shell, nat_shell;

  TermGen(std::mt19937_64& r, std::vector<DimName> ds) : rng(r), dims(std::move(ds)) {}

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng() % n); }
  bool coin() { return (rng() & 1) != 0; }

  DimExpr atom() { return dim_atom(dims[pick(dims.size())]); }

  DimExpr rdim() {
    switch (pick(6)) {
      case 0: return dim0();
      case 1: return dim1();
      case 2: return atom();
      case 3: return dim_neg(atom());
      case 4: return dim_meet(atom(), atom());
      default: return dim_join(atom(), atom());
    }
  }

  FaceFormula rface() {
    auto eq = [&] { return FaceFormula::eq(dims[pick(dims.size())], coin()); };
    switch (pick(4)) {
      case 0: return eq();
      case 1: return face_and(eq(), eq());
      case 2: return face_or(eq(), eq());
      default: return face_or(face_and(eq(), eq()), eq());
    }
  }

  TermPtr ty_term(Kind k) {
    switch (k) {
      case Kind::Circle: return mk(THitTy{find_decl("S1"), {}});
      case Kind::Torus: return mk(THitTy{find_decl("T"), {}});
      case Kind::Suspension:
        return mk(THitTy{find_decl("Susp"), {mk(THitTy{find_decl("S1"), {}})}});
      case Kind::Naturals: return mk(THitTy{find_decl("Nat"), {}});
      case Kind::Pushout: {
        TermPtr s1 = mk(THitTy{find_decl("S1"), {}});
        TermName x = fresh_var("x");
        TermName y = fresh_var("x");
        return mk(THitTy{find_decl("Push"),
                         {s1, s1, s1, mk(TLam{x, mk_var(x)}), mk(TLam{y, mk_var(y)})}});
      }
    }
    return nullptr;
  }

  std::vector<TermPtr> params(Kind k) {
    if (k == Kind::Suspension || k == Kind::Pushout) {
      TermPtr ty = ty_term(k);
      return as<THitTy>(ty)->params;
    }
    return {};
  }

  TermPtr leaf(Kind k) {
    switch (k) {
      case Kind::Circle: {
        const HITDecl* d = find_decl("S1");
        if (coin()) return mk(TCtor{d, 0, {}, {}, {}});
        return mk(TCtor{d, 1, {}, {}, {rdim()}});
      }
      case Kind::Torus: {
        const HITDecl* d = find_decl("T");
        switch (pick(4)) {
          case 0: return mk(TCtor{d, 0, {}, {}, {}});
          case 1: return mk(TCtor{d, 1, {}, {}, {rdim()}});
          case 2: return mk(TCtor{d, 2, {}, {}, {rdim()}});
          default: return mk(TCtor{d, 3, {}, {}, {rdim(), rdim()}});
        }
      }
      case Kind::Suspension: {
        const HITDecl* d = find_decl("Susp");
        switch (pick(3)) {
          case 0: return mk(TCtor{d, 0, params(k), {}, {}});
          case 1: return mk(TCtor{d, 1, params(k), {}, {}});
          default: return mk(TCtor{d, 2, params(k), {leaf(Kind::Circle)}, {rdim()}});
        }
      }
      case Kind::Naturals: {
        const HITDecl* d = find_decl("Nat");
        TermPtr n = mk(TCtor{d, 0, {}, {}, {}});
        for (std::size_t m = pick(3); m > 0; --m) n = mk(TCtor{d, 1, {}, {n}, {}});
        return n;
      }
      case Kind::Pushout: {
        const HITDecl* d = find_decl("Push");
        switch (pick(3)) {
          case 0: return mk(TCtor{d, 0, params(k), {leaf(Kind::Circle)}, {}});
          case 1: return mk(TCtor{d, 1, params(k), {leaf(Kind::Circle)}, {}});
          default: return mk(TCtor{d, 2, params(k), {leaf(Kind::Circle)}, {rdim()}});
        }
      }
    }
    return nullptr;
  }

  TermPtr hcomp_of(Kind k, int depth) {
    DimName h = fresh_dim("h");
    System sides;
    TermPtr cap;
    if (coin()) {
      // one body shared by every side, capped by its zero endpoint
      dims.push_back(h);
      TermPtr u = gen(k, depth - 1);
      dims.pop_back();
      std::size_t nsides = 1 + pick(2);
      for (std::size_t m = 0; m < nsides; ++m) {
        FaceFormula f = rface();
        if (f.is_zero() || f.is_one()) continue;
        sides.emplace_back(f, u);
      }
      cap = term_dim_subst(u, DimSubst::single(h, dim0()));
    } else {
      // sides constant in the bound direction
      TermPtr u = gen(k, depth - 1);
      FaceFormula f = rface();
      if (!f.is_zero() && !f.is_one()) sides.emplace_back(f, u);
      cap = u;
    }
    return mk(THcomp{h, ty_term(k), std::move(sides), std::move(cap)});
  }

  TermPtr trans_of(Kind k, int depth) {
    DimName i = fresh_dim("i");
    FaceFormula phi = coin() ? FaceFormula::zero() : rface();
    return mk(TTrans{i, ty_term(k), phi, gen(k, depth - 1)});
  }

  TermPtr wrap_elim(const TermPtr& shell, const TermPtr& scrut) {
    const auto* e = as<TElim>(shell);
    TElim m = *e;
    m.scrut = scrut;
    return mk(std::move(m));
  }

  TermPtr gen(Kind k, int depth) {
    if (depth <= 0) return leaf(k);
    switch (pick(6)) {
      case 0:
      case 1: return leaf(k);
      case 2:
      case 3: return hcomp_of(k, depth);
      case 4: return trans_of(k, depth);
      default:
        switch (k) {
          case Kind::Circle:
            switch (pick(3)) {
              case 0:
                return s1_shell ? wrap_elim(s1_shell, gen(Kind::Circle, depth - 1)) : leaf(k);
              case 1: return t_shell ? wrap_elim(t_shell, gen(Kind::Torus, depth - 1)) : leaf(k);
              default:
                return susp_shell ? wrap_elim(susp_shell, gen(Kind::Suspension, depth - 1))
                                  : leaf(k);
            }
          case Kind::Naturals:
            return nat_shell ? wrap_elim(nat_shell, gen(Kind::Naturals, depth - 1)) : leaf(k);
          default: return hcomp_of(k, depth);
        }
    }
  }
};

inline SuiteResult suite_substitution(const SelftestOptions& opts) {
  Stopwatch w;
  Check c;
  Session s;
  std::mt19937_64 rng(opts.seed);

  std::vector<std::pair<std::string, DimName>> named{
      {"i", fresh_dim("i")}, {"j", fresh_dim("j")}, {"k", fresh_dim("k")}};
  std::vector<DimName> dims;
  for (const auto& [n, d] : named) dims.push_back(d);
  Ctx ctx = s.with_dims(named);

  TermGen gen(rng, dims);
  auto shell = [&](const char* src) {
    std::vector<std::pair<std::string, DimName>> none;
    return s.parse(src, none);
  };
  gen.s1_shell = shell("elim (z. S1) [ base -> base, loop s -> loop s ] base");
  gen.t_shell =
      shell("elim (z. S1) [ b -> base, tp s -> loop s, tq s -> base, surf s t -> loop t ] b");
  gen.susp_shell = shell(
      "elim (z. S1) [ N -> base, S -> base, merid a s -> loop s ]"
      " (N : Susp S1)");
  gen.nat_shell = shell("elim (z. Nat) [ zero -> zero, suc n ih -> suc ih ] zero");

  const Kind kinds[] = {Kind::Circle, Kind::Torus, Kind::Suspension, Kind::Naturals};
  int count = 0;
  for (int n = 0; n < 1000 && c.failures < 5; ++n) {
    Kind k = kinds[gen.pick(4)];
    TermPtr t = gen.gen(k, 1 + static_cast<int>(gen.pick(4)));
    ValuePtr tyv = eval(ctx.env, gen.ty_term(k));
    TermPtr te;
    try {
      te = check(ctx, t, tyv);
    } catch (const TypeError& err) {
      c.req(false, "generated term rejected: " + err.msg + " in " + pretty(t));
      continue;
    }
    DimSubst sigma;
    for (const auto& d : dims)
      if (gen.pick(5) != 0) sigma.bind(d, gen.rdim());
    try {
      TermPtr direct = nf(ctx.env, tyv, term_dim_subst(te, sigma));
      TermPtr staged = nf(ctx.env, tyv, term_dim_subst(nf(ctx.env, tyv, te), sigma));
      c.req(alpha_eq(direct, staged), "substitution mismatch on " + pretty(te) + " : " +
                                          pretty(direct) + "  vs  " + pretty(staged));
    } catch (const EvalError& err) {
      c.req(false, "evaluation failed: " + err.msg + " on " + pretty(te));
    }
    ++count;
  }
  std::ostringstream os;
  os << count << " terms normalized compatibly with interval substitution";
  return finish("substitution-stability", c, w, os.str());
}

// -- derived composition contract ----------------------------------------------

inline SuiteResult suite_comp_contract(const SelftestOptions& opts) {
  Stopwatch w;
  Check c;
  Session s;
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);

  struct Instance {
    const char* line;  // type line with the bound direction named i
    const char* u;     // side body over i, j, k
    const char* u0;    // the body at i = 0 (used as the cap)
    const char* u1;    // the body at i = 1 (the contracted answer)
  };
  static const Instance pool[] = {
      {"S1", "loop (i /\\ j)", "base", "loop j"},
      {"S1", "loop i", "base", "base"},
      {"S1", "loop (i \\/ k)", "loop k", "base"},
      {"S1", "hcomp^h S1 [ (j=0) -> loop h ] base", "hcomp^h S1 [ (j=0) -> loop h ] base",
       "hcomp^h S1 [ (j=0) -> loop h ] base"},
      {"Susp S1", "(merid (loop j) i : Susp S1)", "(N : Susp S1)", "(S : Susp S1)"},
      {"Susp S1", "(merid base (i /\\ k) : Susp S1)", "(N : Susp S1)",
       "(merid base k : Susp S1)"},
      {"Push S1 S1 S1 (\\x -> x) (\\x -> x)",
       "(push (loop j) i : Push S1 S1 S1 (\\x -> x) (\\x -> x))",
       "(inl (loop j) : Push S1 S1 S1 (\\x -> x) (\\x -> x))",
       "(inr (loop j) : Push S1 S1 S1 (\\x -> x) (\\x -> x))"},
      {"Path S1 base (loop i)", "<m> loop (i /\\ m)", "<m> base", "<m> loop m"},
  };

  // shared ambient names so the face pool and the parsed sources line up
  std::vector<std::pair<std::string, DimName>> ambient{{"j", fresh_dim("j")},
                                                       {"k", fresh_dim("k")}};
  DimName dj = ambient[0].second, dk = ambient[1].second;
  struct FaceCase {
    const char* src;
    FaceFormula formula;
  };
  const std::vector<FaceCase> faces = {
      {"(j=0)", FaceFormula::eq(dj, false)},
      {"(k=1)", FaceFormula::eq(dk, true)},
      {"(j=0) /\\ (k=0)", face_and(FaceFormula::eq(dj, false), FaceFormula::eq(dk, false))},
      {"(j=0) \\/ (j=1)", face_or(FaceFormula::eq(dj, false), FaceFormula::eq(dj, true))},
      {"(j=1) \\/ (k=0)", face_or(FaceFormula::eq(dj, true), FaceFormula::eq(dk, false))},
  };

  int done = 0;
  for (int n = 0; n < 220 && c.failures < 5; ++n) {
    const Instance& p = pool[rng() % (sizeof(pool) / sizeof(pool[0]))];
    const FaceCase& fc = faces[rng() % faces.size()];
    std::string src = "comp^i (" + std::string(p.line) + ") [ " + fc.src + " -> " + p.u + " ] (" +
                      p.u0 + ")";
    try {
      std::vector<std::pair<std::string, DimName>> dims = ambient;
      TermPtr t = s.parse(src, dims);
      Ctx ctx = s.with_dims(dims);
      auto [te, tyv] = infer(ctx, t);
      ValuePtr v = eval(ctx.env, te);

      std::vector<std::pair<std::string, DimName>> d2 = dims;
      TermPtr u1t = s.parse(p.u1, d2);
      Ctx ctx2 = s.with_dims(d2);
      ValuePtr u1v = eval(ctx2.env, check(ctx2, u1t, tyv));

      for (const auto& conj : fc.formula.conjs()) {
        DimSubst sg = conj_subst(conj);
        c.req(convert(act(tyv, sg), act(v, sg), act(u1v, sg)),
              src + " restricted to a conjunct of " + fc.src +
                  " does not convert to the i=1 side");
      }
      ++done;
    } catch (const TypeError& err) {
      c.req(false, src + " : " + err.msg);
    } catch (const ParseError& err) {
      c.req(false, src + " : parse: " + err.msg);
    }
  }

  // a total constraint face makes composition return the side on the nose
  int exact = 0;
  for (int rep = 0; rep < 3; ++rep) {
    for (const Instance& p : pool) {
      std::string src =
          "comp^i (" + std::string(p.line) + ") [ 1F -> " + p.u + " ] (" + p.u0 + ")";
      try {
        std::vector<std::pair<std::string, DimName>> dims = ambient;
        TermPtr t = s.parse(src, dims);
        Ctx ctx = s.with_dims(dims);
        auto [te, tyv] = infer(ctx, t);
        TermPtr got = nf(ctx.env, tyv, te);

        std::vector<std::pair<std::string, DimName>> d2 = dims;
        TermPtr u1t = s.parse(p.u1, d2);
        Ctx ctx2 = s.with_dims(d2);
        TermPtr want = nf(ctx2.env, tyv, check(ctx2, u1t, tyv));
        c.req(alpha_eq(got, want), src + " should return the side exactly; got " + pretty(got) +
                                       " want " + pretty(want));
        ++exact;
      } catch (const TypeError& err) {
        c.req(false, src + " : " + err.msg);
      } catch (const ParseError& err) {
        c.req(false, src + " : parse: " + err.msg);
      }
    }
  }

  std::ostringstream os;
  os << done << " instances honored the restriction contract, " << exact
     << " total-face instances returned their side exactly";
  return finish("comp-contract", c, w, os.str());
}

// -- transport: schema-generic versus per-type ----------------------------------

inline SuiteResult suite_transport(const SelftestOptions& opts) {
  Stopwatch w;
  Check c;
  Session s;
  std::mt19937_64 rng(opts.seed ^ 0x2545f4914f6cdd1dULL);
  bool saved = generic_transport_enabled();

  auto push_line = [](const std::string& d) {
    return "Push (Path S1 base (loop (" + d + "))) S1 S1 (\\c -> <m> loop ((" + d +
           ") /\\ m)) (\\c -> c)";
  };
  static const char* points[] = {"base", "loop j", "loop k",
                                 "hcomp^h S1 [ (j=0) -> loop h ] base"};
  static const char* rs[] = {"k", "j /\\ k", "@- k"};

  int done = 0;
  for (int n = 0; n < 112 && c.failures < 5; ++n) {
    bool restricted = (n % 2) == 0;
    std::string d = restricted ? "i /\\ j" : "i";
    std::string phi = restricted ? "(j=0)" : "0F";
    std::string cap;
    switch (rng() % 3) {
      case 0: cap = "(inl (<m> base) : " + push_line("0") + ")"; break;
      case 1: cap = "(inr (" + std::string(points[rng() % 4]) + ") : " + push_line("0") + ")"; break;
      default:
        cap = "(push (" + std::string(points[rng() % 4]) + ") (" + rs[rng() % 3] + ") : " +
              push_line("0") + ")";
        break;
    }
    std::string src = "trans^i (" + push_line(d) + ") " + phi + " " + cap;
    try {
      std::vector<std::pair<std::string, DimName>> dims;
      TermPtr t = s.parse(src, dims);
      Ctx ctx = s.with_dims(dims);
      auto [te, tyv] = infer(ctx, t);
      generic_transport_enabled() = false;
      ValuePtr direct = eval(ctx.env, te);
      generic_transport_enabled() = true;
      ValuePtr generic = eval(ctx.env, te);
      generic_transport_enabled() = saved;
      c.req(convert(tyv, direct, generic),
            "pushout transport disagrees between implementations on " + src);
      ++done;
    } catch (const TypeError& err) {
      generic_transport_enabled() = saved;
      c.req(false, src + " : " + err.msg);
    } catch (const ParseError& err) {
      generic_transport_enabled() = saved;
      c.req(false, src + " : parse: " + err.msg);
    }
  }

  // suspension and truncation: both implementations must satisfy the contracts
  int contracts = 0;
  for (int n = 0; n < 60 && c.failures < 5; ++n) {
    bool trunc = (n & 1) != 0;
    std::string line =
        trunc ? "Trunc (Path S1 base (loop (i /\\ j)))" : "Susp (Path S1 base (loop (i /\\ j)))";
    std::string line0 = trunc ? "Trunc (Path S1 base (loop 0))" : "Susp (Path S1 base (loop 0))";
    std::string cap, end0, end1;
    if (trunc) {
      cap = "(sq (inc (<m> base)) (inc (<m> base)) k : " + line0 + ")";
      end0 = "(inc (<m> base) : " + line0 + ")";
      end1 = end0;
    } else {
      cap = "(merid (<m> base) k : " + line0 + ")";
      end0 = "(N : " + line0 + ")";
      end1 = "(S : " + line0 + ")";
    }
    std::string src = "trans^i (" + line + ") (j=0) (" + cap + ")";
    try {
      std::vector<std::pair<std::string, DimName>> dims;
      TermPtr t = s.parse(src, dims);
      Ctx ctx = s.with_dims(dims);
      auto [te, tyv] = infer(ctx, t);
      DimName kd = find_dim(dims, "k");
      FaceFormula phi = FaceFormula::eq(find_dim(dims, "j"), false);

      std::vector<std::pair<std::string, DimName>> d2 = dims;
      TermPtr cap_t = s.parse(cap, d2);
      Ctx ctx2 = s.with_dims(d2);
      auto [cap_e, cap_ty] = infer(ctx2, cap_t);
      ValuePtr cap_v = eval(ctx2.env, cap_e);

      for (bool flag : {false, true}) {
        generic_transport_enabled() = flag;
        ValuePtr v = eval(ctx.env, te);
        c.req(convert_under(phi, tyv, v, cap_v),
              src + (flag ? " [generic]" : " [direct]") +
                  " does not restrict to its input on the constancy face");
        for (int endp = 0; endp < 2; ++endp) {
          std::string ref_src = "trans^i (" + line + ") (j=0) (" + (endp == 0 ? end0 : end1) + ")";
          std::vector<std::pair<std::string, DimName>> d3 = dims;
          TermPtr ref_t = s.parse(ref_src, d3);
          Ctx ctx3 = s.with_dims(d3);
          auto [ref_e, ref_ty] = infer(ctx3, ref_t);
          ValuePtr ref_v = eval(ctx3.env, ref_e);
          DimSubst sg = DimSubst::single(kd, endp == 0 ? dim0() : dim1());
          c.req(convert(act(tyv, sg), act(v, sg), act(ref_v, sg)),
                src + (flag ? " [generic]" : " [direct]") +
                    " has the wrong endpoint at k=" + std::to_string(endp));
        }
      }
      generic_transport_enabled() = saved;
      ++contracts;
    } catch (const TypeError& err) {
      generic_transport_enabled() = saved;
      c.req(false, src + " : " + err.msg);
    } catch (const ParseError& err) {
      generic_transport_enabled() = saved;
      c.req(false, src + " : parse: " + err.msg);
    }
  }
  generic_transport_enabled() = saved;

  std::ostringstream os;
  os << done << " pushout instances convertible, " << contracts
     << " suspension/truncation instances honored both contracts";
  return finish("transport-agreement", c, w, os.str());
}

// -- agreement with the presheaf semantics --------------------------------------

inline SuiteResult suite_presheaf(const SelftestOptions& opts) {
  Stopwatch w;
  Check c;
  Session s;
  std::mt19937_64 rng(opts.seed ^ 0x6a09e667f3bcc909ULL);

  std::vector<std::pair<std::string, DimName>> named{{"i", fresh_dim("i")},
                                                     {"j", fresh_dim("j")}};
  std::vector<DimName> dims;
  for (const auto& [n, d] : named) dims.push_back(d);
  Ctx ctx = s.with_dims(named);
  psh::Names I = dims;
  int fuel = opts.probe_depth;

  TermGen gen(rng, dims);
  const Kind kinds[] = {Kind::Circle, Kind::Suspension, Kind::Pushout};
  int count = 0;
  for (int n = 0; n < 36 && c.failures < 5; ++n) {
    Kind k = kinds[n % 3];
    TermPtr t = gen.gen(k, 1 + static_cast<int>(gen.pick(3)));
    ValuePtr tyv = eval(ctx.env, gen.ty_term(k));
    TermPtr te, tn;
    ValuePtr v;
    try {
      te = check(ctx, t, tyv);
      v = eval(ctx.env, te);
      tn = readback(tyv, v);
    } catch (const TypeError& err) {
      c.req(false, "presheaf corpus term rejected: " + err.msg);
      continue;
    }
    try {
      switch (k) {
        case Kind::Circle: {
          psh::S1Ptr e = psh::interp_s1(I, tn);
          c.req(psh::s1_stable(e, I, fuel), "circle interpretation unstable: " + pretty(tn));
          for (const auto& f : psh::probes(I)) {
            psh::S1Ptr lhs = psh::interp_s1(f.cod, readback(tyv, act(v, f.sub)));
            c.req(psh::s1_eq(lhs, psh::s1_restrict(e, f), f.cod, fuel),
                  "circle restriction disagrees with the normalizer on " + pretty(tn));
          }
          break;
        }
        case Kind::Suspension: {
          psh::SuspPtr e = psh::interp_susp(I, tn);
          c.req(psh::susp_stable(e, I, fuel),
                "suspension interpretation unstable: " + pretty(tn));
          for (const auto& f : psh::probes(I)) {
            psh::SuspPtr lhs = psh::interp_susp(f.cod, readback(tyv, act(v, f.sub)));
            c.req(psh::susp_eq(lhs, psh::susp_restrict(e, f), f.cod, fuel),
                  "suspension restriction disagrees with the normalizer on " + pretty(tn));
          }
          break;
        }
        default: {
          psh::PushPtr e = psh::interp_push(I, tn);
          c.req(psh::push_stable(e, I, fuel), "pushout interpretation unstable: " + pretty(tn));
          for (const auto& f : psh::probes(I)) {
            psh::PushPtr lhs = psh::interp_push(f.cod, readback(tyv, act(v, f.sub)));
            c.req(psh::push_eq(lhs, psh::push_restrict(e, f), f.cod, fuel),
                  "pushout restriction disagrees with the normalizer on " + pretty(tn));
          }
          break;
        }
      }
      ++count;
    } catch (const std::exception& err) {
      c.req(false, std::string("interpretation failed: ") + err.what() + " on " + pretty(tn));
    }
  }

  // an element defined by inspecting its context is not natural and must fail
  c.req(!psh::s1_stable(psh::s1_broken(I), I, std::max(1, fuel)),
        "the non-natural counterexample unexpectedly passed the stability check");

  std::ostringstream os;
  os << count << " closed terms agree with their presheaf interpretation under every probe";
  return finish("presheaf-agreement", c, w, os.str());
}

// -- interval algebra against a rewriting oracle --------------------------------

namespace dimoracle {

using Lit = std::pair<std::uint64_t, bool>;  // name, negated
using Mono = std::set<Lit>;
using Dnf = std::set<Mono>;

inline Dnf absorb(Dnf d) {
  Dnf out;
  for (const auto& m : d) {
    bool redundant = false;
    for (const auto& m2 : d) {
      if (m2 == m) continue;
      if (std::includes(m.begin(), m.end(), m2.begin(), m2.end())) {
        redundant = true;  // a strictly smaller monomial absorbs this one
        break;
      }
    }
    if (!redundant) out.insert(m);
  }
  return out;
}

inline Dnf join(const Dnf& a, const Dnf& b) {
  Dnf u = a;
  u.insert(b.begin(), b.end());
  return absorb(std::move(u));
}

inline Dnf meet(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& ma : a)
    for (const auto& mb : b) {
      Mono m = ma;
      m.insert(mb.begin(), mb.end());
      out.insert(std::move(m));
    }
  return absorb(std::move(out));
}

inline Dnf of(const DimExpr& e, bool neg) {
  switch (e.tag()) {
    case DimTag::Zero: return neg ? Dnf{Mono{}} : Dnf{};
    case DimTag::One: return neg ? Dnf{} : Dnf{Mono{}};
    case DimTag::Atom: return Dnf{Mono{Lit{e.name().id, neg}}};
    case DimTag::Neg: return of(e.body(), !neg);
    case DimTag::Meet:
      return neg ? join(of(e.left(), true), of(e.right(), true))
                 : meet(of(e.left(), false), of(e.right(), false));
    case DimTag::Join:
      return neg ? meet(of(e.left(), true), of(e.right(), true))
                 : join(of(e.left(), false), of(e.right(), false));
  }
  return {};
}

inline bool oracle_eq(const DimExpr& a, const DimExpr& b) { return of(a, false) == of(b, false); }

}  // namespace dimoracle

inline SuiteResult suite_interval(const SelftestOptions& opts) {
  Stopwatch w;
  Check c;
  std::mt19937_64 rng(opts.seed ^ 0xbb67ae8584caa73bULL);

  std::vector<DimName> names;
  for (int k = 0; k < 4; ++k) names.push_back(fresh_dim("d"));

  std::function<DimExpr(int)> rnd = [&](int depth) -> DimExpr {
    if (depth <= 0 || rng() % 4 == 0) {
      switch (rng() % 6) {
        case 0: return dim0();
        case 1: return dim1();
        default: return dim_atom(names[rng() % names.size()]);
      }
    }
    switch (rng() % 3) {
      case 0: return dim_neg(rnd(depth - 1));
      case 1: return dim_meet(rnd(depth - 1), rnd(depth - 1));
      default: return dim_join(rnd(depth - 1), rnd(depth - 1));
    }
  };

  // rebuild an expression by laws that do not change its value
  std::function<DimExpr(const DimExpr&, int)> stir = [&](const DimExpr& e, int depth) -> DimExpr {
    if (depth > 0 && rng() % 3 == 0) return dim_neg(dim_neg(stir(e, depth - 1)));
    switch (e.tag()) {
      case DimTag::Meet: {
        DimExpr l = stir(e.left(), depth - 1), r = stir(e.right(), depth - 1);
        if (depth > 0 && rng() % 3 == 0) return dim_neg(dim_join(dim_neg(l), dim_neg(r)));
        return rng() % 2 ? dim_meet(l, r) : dim_meet(r, l);
      }
      case DimTag::Join: {
        DimExpr l = stir(e.left(), depth - 1), r = stir(e.right(), depth - 1);
        if (depth > 0 && rng() % 3 == 0) return dim_neg(dim_meet(dim_neg(l), dim_neg(r)));
        DimExpr j = rng() % 2 ? dim_join(l, r) : dim_join(r, l);
        if (depth > 0 && rng() % 3 == 0) return dim_join(j, dim_meet(j, rnd(1)));
        return j;
      }
      case DimTag::Neg: return dim_neg(stir(e.body(), depth - 1));
      default:
        if (depth > 0 && rng() % 4 == 0) return dim_meet(e, dim_join(e, rnd(1)));
        return e;
    }
  };

  int agreements = 0;
  for (int n = 0; n < 10000 && c.failures < 5; ++n) {
    DimExpr a = rnd(4);
    DimExpr b = (n % 2 == 0) ? stir(a, 3) : rnd(4);
    bool kernel = dim_eq(a, b);
    bool oracle = dimoracle::oracle_eq(a, b);
    c.req(kernel == oracle, "decision mismatch: " + dim_show(a) + " vs " + dim_show(b) +
                                " kernel=" + (kernel ? "eq" : "ne") +
                                " oracle=" + (oracle ? "eq" : "ne"));
    if (n % 2 == 0)
      c.req(kernel,
            "equal-by-construction pair decided unequal: " + dim_show(a) + " vs " + dim_show(b));
    ++agreements;
  }

  // canonical face representations: equal formulas must be identical
  int canonical = 0;
  for (int n = 0; n < 10000 && c.failures < 5; ++n) {
    std::vector<FaceFormula> conjs;
    std::size_t m = 1 + rng() % 3;
    for (std::size_t q = 0; q < m; ++q) {
      FaceFormula f = FaceFormula::eq(names[rng() % names.size()], rng() % 2 == 0);
      if (rng() % 2 == 0)
        f = face_and(f, FaceFormula::eq(names[rng() % names.size()], rng() % 2 == 0));
      conjs.push_back(f);
    }
    FaceFormula a = FaceFormula::zero();
    for (const auto& f : conjs) a = face_or(a, f);
    FaceFormula b = FaceFormula::zero();
    for (std::size_t q = conjs.size(); q > 0; --q) b = face_or(b, conjs[q - 1]);
    // a conjunct below an existing one must be absorbed
    b = face_or(b, face_and(conjs[rng() % conjs.size()],
                            FaceFormula::eq(names[rng() % names.size()], rng() % 2 == 0)));
    c.req(a == b && face_show(a) == face_show(b),
          "face canonical form not unique: " + face_show(a) + " vs " + face_show(b));
    ++canonical;
  }

  std::ostringstream os;
  os << agreements << " decision agreements, " << canonical << " canonical-form identities";
  return finish("interval-oracle", c, w, os.str());
}

// -- rejection of ill-formed input ----------------------------------------------

inline SuiteResult suite_negative(const SelftestOptions&) {
  Stopwatch w;
  Check c;
  Session s;

  struct Neg {
    const char* src;
    ErrKind kind;
  };
  static const Neg negatives[] = {
      {"(\\x -> x : S1 -> S1) b", ErrKind::Mismatch},
      {"elim (z. S1) [ base -> base, loop s -> hcomp^h S1 [ (s=0) -> loop i ] base ] (loop i)",
       ErrKind::BoundaryMismatch},
      {"hcomp^h (Susp S1) [ (j=0) -> (merid base h : Susp S1) ] (S : Susp S1)",
       ErrKind::BoundaryMismatch},
      {"hcomp^h S1 [ (j=0) -> loop h, (j=0) /\\ (k=0) -> base ] base",
       ErrKind::SystemIncompatible},
      {"trans^i (Path S1 base (loop i)) (j=0) (<m> base)", ErrKind::ConstancyViolation},
      {"trans^i (Susp (Path S1 base (loop i))) 1F ((N : Susp (Path S1 base base)))",
       ErrKind::ConstancyViolation},
      {"hcomp^h U [] S1", ErrKind::UnsupportedUniverseKan},
      {"elim (z. U) [ base -> S1, loop s -> S1 ] base", ErrKind::UnsupportedUniverseKan},
      {"hcomp^h S1 [ (h=0) -> base ] base", ErrKind::ScopeError},
  };

  int rejected = 0;
  for (const Neg& n : negatives) {
    try {
      std::vector<std::pair<std::string, DimName>> dims;
      TermPtr t = s.parse(n.src, dims);
      Ctx ctx = s.with_dims(dims);
      infer(ctx, t);
      c.req(false, std::string("accepted ill-formed term: ") + n.src);
    } catch (const TypeError& err) {
      c.req(err.kind == n.kind, std::string(n.src) + " rejected with the wrong kind: " + err.msg);
      ++rejected;
    } catch (const ParseError& err) {
      c.req(false, std::string(n.src) + " failed to parse: " + err.msg);
    }
  }

  // a declaration whose first constructor refers to a later one breaks the
  // schema's staging and must be rejected by validation
  {
    HITDecl bad;
    bad.name = "Bad";
    DimName i = fresh_dim("i");
    CtorDecl c0{"bad0", {}, {i}, {}};
    c0.boundary.emplace_back(FaceFormula::eq(i, false), mk(TCtor{&bad, 1, {}, {}, {}}));
    bad.ctors.push_back(std::move(c0));
    bad.ctors.push_back(CtorDecl{"bad1", {}, {}, {}});
    auto msg = hit_validate(bad);
    c.req(msg.has_value(), "declaration with a forward constructor reference passed validation");
    if (msg) ++rejected;
  }

  std::ostringstream os;
  os << rejected << " ill-formed inputs rejected, each with its designated error kind";
  return finish("negative-suite", c, w, os.str());
}

}  // namespace selftest

inline std::vector<SuiteResult> run_selftest(const SelftestOptions& opts) {
  bool saved = generic_transport_enabled();
  generic_transport_enabled() = opts.generic_trans;
  std::vector<SuiteResult> out;
  out.push_back(selftest::suite_equations(opts));
  out.push_back(selftest::suite_torus(opts));
  out.push_back(selftest::suite_substitution(opts));
  out.push_back(selftest::suite_comp_contract(opts));
  out.push_back(selftest::suite_transport(opts));
  out.push_back(selftest::suite_presheaf(opts));
  out.push_back(selftest::suite_interval(opts));
  out.push_back(selftest::suite_negative(opts));
  generic_transport_enabled() = saved;
  return out;
}

}  // namespace chit
