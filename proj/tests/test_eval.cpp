// Evaluation, Kan operations, eliminators and the two transport
// implementations.

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "chit/parser.hpp"
#include "chit/pretty.hpp"
#include "chit/typecheck.hpp"

using namespace chit;

namespace {

using NamedDims = std::vector<std::pair<std::string, DimName>>;

struct Bench {
  GlobalEnv globals;
  NamedDims dims;
  Ctx ctx;

  Bench() { ctx.env = Env(&globals); }

  TermPtr parse(const std::string& src) {
    std::set<std::string> names;
    for (const auto& [n, d] : globals.all()) names.insert(n);
    std::size_t before = dims.size();
    TermPtr t = parse_expr(src, names, dims);
    for (std::size_t m = before; m < dims.size(); ++m) ctx = ctx.bind_dim(dims[m].second);
    return t;
  }

  ValuePtr type_of(const std::string& src) { return eval(ctx.env, check_type(ctx, parse(src))); }

  ValuePtr value(const std::string& src, const ValuePtr& ty) {
    return eval(ctx.env, check(ctx, parse(src), ty));
  }

  TermPtr nf(const std::string& src, const std::string& ty_src) {
    ValuePtr ty = type_of(ty_src);
    return readback(ty, value(src, ty));
  }

  bool same(const std::string& ty_src, const std::string& lhs, const std::string& rhs) {
    ValuePtr ty = type_of(ty_src);
    return alpha_eq(readback(ty, value(lhs, ty)), readback(ty, value(rhs, ty)));
  }

  DimName dim(const std::string& name) {
    for (const auto& [s, d] : dims)
      if (s == name) return d;
    ADD_FAILURE() << "no dimension " << name;
    return fresh_dim(name);
  }
};

TEST(Eval, TotalFaceCollapsesComposition) {
  Bench b;
  EXPECT_TRUE(b.same("S1", "hcomp^h S1 [ 1F -> loop h ] base", "loop 1"));
  EXPECT_TRUE(b.same("S1", "hcomp^h S1 [ 0F -> base, 1F -> loop h ] base", "base"));
  EXPECT_TRUE(b.same("S1", "hcomp^h S1 [ (i=0) \\/ (i=1) \\/ 1F -> base ] base", "base"));
}

TEST(Eval, ZeroFaceSidesVanish) {
  Bench b;
  TermPtr with = b.nf("hcomp^h S1 [ 0F -> loop h, (i=0) -> base ] base", "S1");
  TermPtr without = b.nf("hcomp^h S1 [ (i=0) -> base ] base", "S1");
  EXPECT_TRUE(alpha_eq(with, without)) << pretty(with);
}

TEST(Eval, TransportAtParamlessTypesIsIdentity) {
  Bench b;
  EXPECT_TRUE(b.same("S1", "trans^i S1 0F (loop j)", "loop j"));
  EXPECT_TRUE(b.same("S1", "trans^i S1 1F base", "base"));
  EXPECT_TRUE(b.same("Nat", "trans^i Nat (j=0) (suc zero)", "suc zero"));
  EXPECT_TRUE(b.same("T", "trans^i T 0F (surf j k)", "surf j k"));
}

TEST(Eval, TotalConstancyFaceReturnsCap) {
  Bench b;
  // the line is nontrivial but collapses on phi = 1F
  EXPECT_TRUE(b.same("Susp S1", "trans^i (Susp S1) 1F (merid (loop j) k : Susp S1)",
                     "(merid (loop j) k : Susp S1)"));
}

TEST(Eval, EliminatorComputesOnConstructors) {
  Bench b;
  EXPECT_TRUE(b.same("Nat",
                     "elim (z. Nat) [ zero -> zero, suc p ih -> suc (suc ih) ] (suc (suc zero))",
                     "suc (suc (suc (suc zero)))"));
  EXPECT_TRUE(b.same("S1", "elim (z. S1) [ base -> base, loop s -> loop s ] (loop i)", "loop i"));
  EXPECT_TRUE(b.same(
      "S1", "elim (z. S1) [ b -> base, tp s -> loop s, tq s -> base, surf s t -> loop t ] (surf i j)",
      "loop j"));
}

TEST(Eval, EliminatorCommutesWithComposition) {
  Bench b;
  // at a constant motive the eliminator passes through hcomp side by side
  EXPECT_TRUE(b.same(
      "S1",
      "elim (z. S1) [ base -> base, loop s -> loop s ]"
      " (hcomp^h S1 [ (i=0) -> loop h ] base)",
      "hcomp^h S1 [ (i=0) -> loop h ] base"));
  EXPECT_TRUE(b.same(
      "Nat",
      "elim (z. Nat) [ zero -> suc zero, suc p ih -> suc ih ]"
      " (hcomp^h Nat [ (i=0) -> zero ] zero)",
      "hcomp^h Nat [ (i=0) -> suc zero ] (suc zero)"));
}

TEST(Eval, CompositionEliminatesThroughPairs) {
  Bench b;
  EXPECT_TRUE(b.same("S1", "fst (hcomp^h (S1 * S1) [ (i=0) -> (loop h, base) ] (base, loop i))",
                     "hcomp^h S1 [ (i=0) -> loop h ] base"));
}

TEST(Eval, CompositionEliminatesThroughFunctions) {
  Bench b;
  EXPECT_TRUE(b.same("S1",
                     "(hcomp^h (S1 -> S1) [ (i=0) -> \\x -> loop h ] (\\x -> base)) base",
                     "hcomp^h S1 [ (i=0) -> loop h ] base"));
}

TEST(Eval, CompositionEliminatesThroughPaths) {
  Bench b;
  EXPECT_TRUE(b.same("S1",
                     "(hcomp^h (Path S1 base base) [ (i=0) -> <m> base ] (<m> base)) @ j",
                     "hcomp^h S1 [ (i=0) -> base, (j=0) -> base, (j=1) -> base ] base"));
}

TEST(Eval, FillersStartAtTheirCap) {
  Bench b;
  EXPECT_TRUE(b.same("S1", "hfill^h S1 [ (j=0) -> loop h ] base 0", "base"));
  EXPECT_TRUE(b.same("S1", "transFill^i S1 0F (loop j) 0", "loop j"));
  EXPECT_TRUE(b.same("S1", "squeeze^i S1 0F (loop j) 1", "loop j"));
  // the filler runs from the cap to the finished composition
  EXPECT_TRUE(b.same("Path S1 base (hcomp^h S1 [ (j=0) -> loop h ] base)",
                     "<k> hfill^h S1 [ (j=0) -> loop h ] base k",
                     "<k> hcomp^h S1 [ (j=0) -> loop (k /\\ h), (k=0) -> base ] base"));
}

TEST(Eval, DerivedCompositionAgreesWithItsExpansion) {
  Bench b;
  EXPECT_TRUE(b.same("S1", "comp^i S1 [ (j=0) -> loop i ] base",
                     "hcomp^i S1 [ (j=0) -> trans^k S1 (i=1) (loop i) ] (trans^i S1 0F base)"));
}

TEST(Eval, SubstitutionCommutesWithEvaluation) {
  Bench b;
  b.parse("loop (i /\\ j /\\ k)");  // register all three directions up front
  static const char* terms[] = {
      "hcomp^h S1 [ (i=0) /\\ (j=1) -> loop h ] base",
      "elim (z. S1) [ base -> base, loop s -> loop s ] (loop (i /\\ j))",
      "(merid (loop i) (j \\/ k) : Susp S1)",
      "surf (i /\\ j) (@- k)",
  };
  static const char* types[] = {"S1", "S1", "Susp S1", "T"};
  for (int n = 0; n < 4; ++n) {
    ValuePtr ty = b.type_of(types[n]);
    TermPtr te = check(b.ctx, b.parse(terms[n]), ty);
    DimSubst sg;
    sg.bind(b.dim("i"), dim_meet(dim_atom(b.dim("j")), dim_atom(b.dim("k"))));
    sg.bind(b.dim("j"), dim_neg(dim_atom(b.dim("i"))));
    ValuePtr direct = eval(b.ctx.env, term_dim_subst(te, sg));
    ValuePtr staged = act(eval(b.ctx.env, te), sg);
    EXPECT_TRUE(convert(act(ty, sg), direct, staged)) << terms[n];
  }
}

TEST(Eval, ReadbackIsEtaLong) {
  Bench b;
  EXPECT_TRUE(b.same("(S1 -> S1) -> S1 -> S1", "\\f -> f", "\\f x -> f x"));
  EXPECT_TRUE(b.same("S1 * S1 -> S1 * S1", "\\p -> p", "\\p -> (fst p, snd p)"));
  EXPECT_TRUE(b.same("Path S1 base base -> Path S1 base base", "\\p -> p", "\\p -> <m> p @ m"));
}

TEST(Transport, DirectAndGenericAgreeOnPushout) {
  bool saved = generic_transport_enabled();
  static const char* caps[] = {
      "(inl (<m> base) : Push (Path S1 base (loop 0)) S1 S1 (\\c -> <m> loop (0 /\\ m)) (\\c -> c))",
      "(inr (loop j) : Push (Path S1 base (loop 0)) S1 S1 (\\c -> <m> loop (0 /\\ m)) (\\c -> c))",
      "(push (loop j) k : Push (Path S1 base (loop 0)) S1 S1 (\\c -> <m> loop (0 /\\ m)) (\\c -> c))",
  };
  for (const char* cap : caps) {
    Bench b;
    std::string src =
        "trans^i (Push (Path S1 base (loop (i /\\ j))) S1 S1 (\\c -> <m> loop ((i /\\ j) /\\ m)) "
        "(\\c -> c)) (j=0) " +
        std::string(cap);
    TermPtr t = b.parse(src);
    auto [te, tyv] = infer(b.ctx, t);
    generic_transport_enabled() = false;
    ValuePtr direct = eval(b.ctx.env, te);
    generic_transport_enabled() = true;
    ValuePtr generic = eval(b.ctx.env, te);
    generic_transport_enabled() = saved;
    EXPECT_TRUE(convert(tyv, direct, generic)) << cap;
  }
}

TEST(Transport, ConstancyFaceRestrictsToTheInput) {
  bool saved = generic_transport_enabled();
  for (bool flag : {false, true}) {
    generic_transport_enabled() = flag;
    Bench b;
    TermPtr t = b.parse(
        "trans^i (Susp (Path S1 base (loop (i /\\ j)))) (j=0)"
        " (merid (<m> base) k : Susp (Path S1 base (loop 0)))");
    auto [te, tyv] = infer(b.ctx, t);
    ValuePtr v = eval(b.ctx.env, te);
    TermPtr cap_t = b.parse("(merid (<m> base) k : Susp (Path S1 base (loop 0)))");
    auto [cap_e, cap_ty] = infer(b.ctx, cap_t);
    ValuePtr cap = eval(b.ctx.env, cap_e);
    EXPECT_TRUE(convert_under(FaceFormula::eq(b.dim("j"), false), tyv, v, cap)) << flag;

    // at the ends of the meridian the transport reduces to the poles
    DimSubst at0 = DimSubst::single(b.dim("k"), dim0());
    TermPtr n_t = b.parse(
        "trans^i (Susp (Path S1 base (loop (i /\\ j)))) (j=0)"
        " (N : Susp (Path S1 base (loop 0)))");
    auto [n_e, n_ty] = infer(b.ctx, n_t);
    EXPECT_TRUE(convert(act(tyv, at0), act(v, at0), act(eval(b.ctx.env, n_e), at0))) << flag;
  }
  generic_transport_enabled() = saved;
}

TEST(Transport, FunctionsTransportArgumentsBackwards) {
  Bench b;
  // at a constant function type this reduces to plain application
  EXPECT_TRUE(b.same("S1", "(trans^i (S1 -> S1) 0F (\\x -> x)) (loop j)", "loop j"));
}

TEST(Transport, PairsTransportComponentwise) {
  Bench b;
  EXPECT_TRUE(b.same("S1", "fst (trans^i (S1 * S1) 0F (base, loop j))", "base"));
  EXPECT_TRUE(b.same("S1", "snd (trans^i (S1 * S1) 0F (base, loop j))", "loop j"));
}

}  // namespace
