// Interval algebra, the face lattice, the parser and the core typechecker.

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

TermPtr parse1(const std::string& src, NamedDims& dims) {
  std::set<std::string> globals;
  return parse_expr(src, globals, dims);
}

Ctx ctx_with(const GlobalEnv& globals, const NamedDims& dims) {
  Ctx ctx;
  ctx.env = Env(&globals);
  for (const auto& [s, d] : dims) ctx = ctx.bind_dim(d);
  return ctx;
}

TermPtr normal_form(const std::string& src, const std::string& ty_src) {
  GlobalEnv globals;
  NamedDims dims;
  TermPtr ty_t = parse1(ty_src, dims);
  TermPtr t = parse1(src, dims);
  Ctx ctx = ctx_with(globals, dims);
  ValuePtr tyv = eval(ctx.env, check_type(ctx, ty_t));
  return readback(tyv, eval(ctx.env, check(ctx, t, tyv)));
}

// lhs and rhs share one free-dimension registry
bool same_nf(const std::string& ty_src, const std::string& lhs, const std::string& rhs) {
  GlobalEnv globals;
  NamedDims dims;
  TermPtr ty_t = parse1(ty_src, dims);
  TermPtr lt = parse1(lhs, dims);
  TermPtr rt = parse1(rhs, dims);
  Ctx ctx = ctx_with(globals, dims);
  ValuePtr tyv = eval(ctx.env, check_type(ctx, ty_t));
  return alpha_eq(readback(tyv, eval(ctx.env, check(ctx, lt, tyv))),
                  readback(tyv, eval(ctx.env, check(ctx, rt, tyv))));
}

ErrKind kind_of(const std::string& src) {
  GlobalEnv globals;
  NamedDims dims;
  TermPtr t = parse1(src, dims);
  Ctx ctx = ctx_with(globals, dims);
  try {
    infer(ctx, t);
  } catch (const TypeError& e) {
    return e.kind;
  }
  ADD_FAILURE() << "expected " << src << " to be rejected";
  return ErrKind::Mismatch;
}

TEST(Interval, DeMorganLaws) {
  DimName i = fresh_dim("i"), j = fresh_dim("j");
  DimExpr a = dim_atom(i), b = dim_atom(j);
  EXPECT_TRUE(dim_eq(dim_neg(dim_neg(a)), a));
  EXPECT_TRUE(dim_eq(dim_neg(dim_meet(a, b)), dim_join(dim_neg(a), dim_neg(b))));
  EXPECT_TRUE(dim_eq(dim_neg(dim_join(a, b)), dim_meet(dim_neg(a), dim_neg(b))));
  EXPECT_TRUE(dim_eq(dim_meet(a, dim_join(a, b)), a));
  EXPECT_TRUE(dim_eq(dim_join(a, dim_meet(a, b)), a));
  EXPECT_TRUE(dim_eq(dim_meet(a, dim_join(b, dim1())), a));
}

TEST(Interval, NoComplementCancellation) {
  // the algebra is De Morgan, not boolean
  DimName i = fresh_dim("i");
  DimExpr a = dim_atom(i);
  EXPECT_FALSE(dim_eq(dim_meet(a, dim_neg(a)), dim0()));
  EXPECT_FALSE(dim_eq(dim_join(a, dim_neg(a)), dim1()));
  EXPECT_TRUE(dim_eq(dim_meet(a, dim_neg(a)), dim_meet(dim_neg(a), a)));
}

TEST(Interval, DiagonalSubstitution) {
  DimName i = fresh_dim("i"), j = fresh_dim("j");
  DimExpr e = dim_meet(dim_atom(i), dim_neg(dim_atom(j)));
  DimExpr d = dim_subst(e, DimSubst::single(j, dim_atom(i)));
  EXPECT_TRUE(dim_eq(d, dim_meet(dim_atom(i), dim_neg(dim_atom(i)))));
  EXPECT_TRUE(dim_eq(dim_subst(e, DimSubst::single(j, dim0())), dim_atom(i)));
  EXPECT_TRUE(dim_eq(dim_subst(e, DimSubst::single(i, dim0())), dim0()));
}

TEST(Interval, DistributivityAndAbsorption) {
  DimName i = fresh_dim("i"), j = fresh_dim("j"), k = fresh_dim("k");
  DimExpr a = dim_atom(i), b = dim_atom(j), c = dim_atom(k);
  // the printer shows structure; the decision procedure owns the lattice laws
  EXPECT_TRUE(dim_eq(dim_meet(a, dim_join(b, c)), dim_join(dim_meet(c, a), dim_meet(a, b))));
  EXPECT_TRUE(dim_eq(dim_join(a, dim_meet(a, b)), a));
  EXPECT_TRUE(dim_eq(dim_meet(a, dim_join(a, b)), a));
  EXPECT_EQ(dim_show(dim_meet(a, dim_join(b, c))), "i /\\ (j \\/ k)");
  EXPECT_EQ(dim_show(dim_neg(dim_meet(a, b))), "@- (i /\\ j)");
  EXPECT_EQ(dim_show(dim0()), "0");
  EXPECT_EQ(dim_show(dim1()), "1");
}

TEST(Faces, LatticeLaws) {
  DimName i = fresh_dim("i"), j = fresh_dim("j");
  FaceFormula fi = FaceFormula::eq(i, true), fj = FaceFormula::eq(j, false);
  EXPECT_EQ(face_or(fi, face_and(fi, fj)), fi);
  EXPECT_EQ(face_and(fi, FaceFormula::one()), fi);
  EXPECT_EQ(face_and(fi, FaceFormula::zero()), FaceFormula::zero());
  EXPECT_TRUE(face_entails(face_and(fi, fj), fi));
  EXPECT_FALSE(face_entails(fi, face_and(fi, fj)));
  // (i=0) /\ (i=1) is empty
  EXPECT_TRUE(face_and(FaceFormula::eq(i, false), FaceFormula::eq(i, true)).is_zero());
}

TEST(Faces, SubstitutionDecomposes) {
  DimName i = fresh_dim("i"), j = fresh_dim("j"), k = fresh_dim("k");
  FaceFormula f = FaceFormula::eq(i, true);
  FaceFormula sub = face_subst(f, DimSubst::single(i, dim_meet(dim_atom(j), dim_atom(k))));
  EXPECT_EQ(sub, face_and(FaceFormula::eq(j, true), FaceFormula::eq(k, true)));
  FaceFormula sub0 = face_subst(f, DimSubst::single(i, dim_neg(dim_atom(j))));
  EXPECT_EQ(sub0, FaceFormula::eq(j, false));
  EXPECT_EQ(face_subst(f, DimSubst::single(i, dim1())), FaceFormula::one());
}

TEST(Parser, RoundTripsThroughPretty) {
  for (const char* src : {
           "\\x -> x",
           "<i> loop i",
           "hcomp^h S1 [ (i=0) -> base, (i=1) \\/ (j=0) -> loop h ] (loop i)",
           "trans^i (Path S1 base (loop i)) 0F (<m> base)",
           "elim (z. Nat) [ zero -> zero, suc n ih -> suc ih ] (suc zero)",
           "(base, (loop i, base))",
       }) {
    NamedDims dims;
    TermPtr once = parse1(src, dims);
    TermPtr twice = parse1(pretty(once), dims);
    EXPECT_TRUE(alpha_eq(once, twice)) << src << "  reprinted as  " << pretty(once);
  }
}

TEST(Parser, SharedDimensionRegistry) {
  NamedDims dims;
  TermPtr a = parse1("loop i", dims);
  TermPtr b = parse1("loop i", dims);
  ASSERT_EQ(dims.size(), 1u);
  EXPECT_TRUE(alpha_eq(a, b));
  TermPtr c = parse1("loop j", dims);
  EXPECT_EQ(dims.size(), 2u);
  EXPECT_FALSE(alpha_eq(a, c));
}

TEST(Parser, CommentsAndLayout) {
  ParsedModule m = parse_module(
      "-- a point on the circle\n"
      "pt : S1 = base\n"
      "lp : Path S1 base base = -- the generator\n"
      "  <i> loop i\n");
  ASSERT_EQ(m.defs.size(), 2u);
  EXPECT_EQ(m.defs[0].name, "pt");
  EXPECT_EQ(m.defs[1].name, "lp");
}

TEST(Parser, DuplicateDefinitionRejected) {
  EXPECT_THROW(parse_module("a : S1 = base\na : S1 = base\n"), ParseError);
}

TEST(Parser, UnknownNameRejected) {
  NamedDims dims;
  EXPECT_THROW(parse1("\\x -> y", dims), ParseError);
}

TEST(Schema, BuiltinDeclarationsValidate) {
  for (const HITDecl* d : builtin_decls())
    EXPECT_FALSE(hit_validate(*d).has_value()) << d->name;
}

TEST(Schema, ForwardConstructorReferenceRejected) {
  HITDecl bad;
  bad.name = "Bad";
  DimName i = fresh_dim("i");
  CtorDecl c0{"fwd0", {}, {i}, {}};
  c0.boundary.emplace_back(FaceFormula::eq(i, false), mk(TCtor{&bad, 1, {}, {}, {}}));
  bad.ctors.push_back(std::move(c0));
  bad.ctors.push_back(CtorDecl{"fwd1", {}, {}, {}});
  EXPECT_TRUE(hit_validate(bad).has_value());
}

TEST(Typecheck, InferenceBasics) {
  GlobalEnv globals;
  NamedDims dims;
  TermPtr t = parse1("(\\x -> x : S1 -> S1) base", dims);
  Ctx ctx = ctx_with(globals, dims);
  auto [te, tyv] = infer(ctx, t);
  EXPECT_TRUE(vas<VHitTy>(tyv) != nullptr);
  EXPECT_TRUE(alpha_eq(readback(tyv, eval(ctx.env, te)), normal_form("base", "S1")));
}

TEST(Typecheck, EtaForFunctionsAndPairs) {
  GlobalEnv globals;
  NamedDims dims;
  TermPtr ty_t = parse1("(S1 -> S1) -> S1 -> S1", dims);
  Ctx ctx = ctx_with(globals, dims);
  ValuePtr tyv = eval(ctx.env, check_type(ctx, ty_t));
  ValuePtr eta = eval(ctx.env, check(ctx, parse1("\\f x -> f x", dims), tyv));
  ValuePtr idf = eval(ctx.env, check(ctx, parse1("\\f -> f", dims), tyv));
  EXPECT_TRUE(convert(tyv, eta, idf));

  TermPtr pty_t = parse1("S1 * S1 -> S1 * S1", dims);
  ValuePtr ptyv = eval(ctx.env, check_type(ctx, pty_t));
  ValuePtr resplit = eval(ctx.env, check(ctx, parse1("\\p -> (fst p, snd p)", dims), ptyv));
  ValuePtr idp = eval(ctx.env, check(ctx, parse1("\\p -> p", dims), ptyv));
  EXPECT_TRUE(convert(ptyv, resplit, idp));
}

TEST(Typecheck, ConstructorBoundariesCompute) {
  EXPECT_TRUE(alpha_eq(normal_form("loop 0", "S1"), normal_form("base", "S1")));
  EXPECT_TRUE(alpha_eq(normal_form("loop 1", "S1"), normal_form("base", "S1")));
  EXPECT_TRUE(alpha_eq(normal_form("(merid base 0 : Susp S1)", "Susp S1"),
                       normal_form("(N : Susp S1)", "Susp S1")));
  EXPECT_TRUE(same_nf("Push S1 S1 S1 (\\c -> c) (\\c -> c)", "push base 1", "inr base"));
  EXPECT_TRUE(same_nf("T", "surf i 0", "tq i"));
  EXPECT_TRUE(same_nf("TF", "surfF i 0", "bF"));
}

TEST(Typecheck, PathEndpointsEnforced) {
  GlobalEnv globals;
  NamedDims dims;
  TermPtr t = parse1("(<i> loop i : Path S1 base (loop 1))", dims);
  Ctx ctx = ctx_with(globals, dims);
  EXPECT_NO_THROW(infer(ctx, t));
  EXPECT_EQ(kind_of("(<i> base : Path S1 base (loop i))"), ErrKind::BoundaryMismatch);
}

TEST(Typecheck, ErrorKindsAreSpecific) {
  EXPECT_EQ(kind_of("(\\x -> x : S1 -> S1) b"), ErrKind::Mismatch);
  EXPECT_EQ(kind_of("hcomp^h S1 [ (j=0) -> loop h, (j=0) /\\ (k=0) -> base ] base"),
            ErrKind::SystemIncompatible);
  EXPECT_EQ(kind_of("trans^i (Path S1 base (loop i)) (j=0) (<m> base)"),
            ErrKind::ConstancyViolation);
  EXPECT_EQ(kind_of("hcomp^h U [] S1"), ErrKind::UnsupportedUniverseKan);
  EXPECT_EQ(kind_of("hcomp^h S1 [ (h=0) -> base ] base"), ErrKind::ScopeError);
}

TEST(Typecheck, ModulesBindGlobals)
{
  GlobalEnv globals;
  check_module(parse_module("two : Nat = suc (suc zero)\n"
                            "double : Nat -> Nat =\n"
                            "  \\n -> elim (z. Nat) [ zero -> zero, suc p ih -> suc (suc ih) ] n\n"),
               globals);
  std::set<std::string> names;
  for (const auto& [n, d] : globals.all()) names.insert(n);
  NamedDims dims;
  TermPtr t = parse_expr("double two", names, dims);
  Ctx ctx;
  ctx.env = Env(&globals);
  auto [te, tyv] = infer(ctx, t);
  NamedDims none;
  TermPtr four = parse_expr("suc (suc (suc (suc zero)))", names, none);
  EXPECT_TRUE(alpha_eq(readback(tyv, eval(ctx.env, te)),
                       readback(tyv, eval(ctx.env, check(ctx, four, tyv)))));
}

}  // namespace
