#include <doctest.h>

#include <random>

#include "corec/error.hpp"
#include "corec/terms.hpp"

using namespace corec;

namespace {

SignaturePtr arith() { return Signature::make({{"zero", 0}, {"succ", 1}, {"add", 2}, {"scale", 1, true}}); }

Term random_term(std::mt19937& rng, const Signature& sig, const std::vector<Term>& leaves, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 4);
  std::uniform_int_distribution<std::size_t> leaf(0, leaves.size() - 1);
  switch (pick(rng)) {
    case 0: return leaves[leaf(rng)];
    case 1: return mk_app(sig.lookup("zero"), {});
    case 2: return mk_app(sig.lookup("succ"), {random_term(rng, sig, leaves, depth - 1)});
    case 3: return mk_app(sig.lookup("scale"), Rational(depth), {random_term(rng, sig, leaves, depth - 1)});
    default:
      return mk_app(sig.lookup("add"), {random_term(rng, sig, leaves, depth - 1), random_term(rng, sig, leaves, depth - 1)});
  }
}

}  // namespace

TEST_CASE("variables are interned by name") {
  CHECK(VarId("x") == VarId("x"));
  CHECK_FALSE(VarId("x") == VarId("y"));
  CHECK(VarId("a") < VarId("b"));
  CHECK(&VarId("x").name() == &VarId(std::string("x")).name());
}

TEST_CASE("fresh variables use the reserved prefix and never repeat") {
  FreshVarSupply supply("p");
  const VarId a = supply.next(), b = supply.next();
  CHECK_FALSE(a == b);
  CHECK(a.name().front() == kReservedPrefix);
}

TEST_CASE("mk_app checks arity and scalar indices") {
  const auto sig = arith();
  CHECK_NOTHROW(mk_app(sig->lookup("succ"), {mk_var("x")}));
  try {
    mk_app(sig->lookup("add"), {mk_var("x")});
    FAIL("expected ArityMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ArityMismatch);
  }
  CHECK_THROWS_AS(mk_app(sig->lookup("scale"), {mk_var("x")}), Error);
  CHECK_THROWS_AS(mk_app(sig->lookup("succ"), Rational(2), {mk_var("x")}), Error);
}

TEST_CASE("structural equality, hashing and printing") {
  const auto sig = arith();
  const Term a = mk_app(sig->lookup("add"), {mk_var("x"), mk_app(sig->lookup("zero"), {})});
  const Term b = mk_app(sig->lookup("add"), {mk_var("x"), mk_app(sig->lookup("zero"), {})});
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK_FALSE(a.same(b));
  CHECK(to_string(a) == "add(x, zero)");
  CHECK(to_string(mk_app(sig->lookup("scale"), ratio(1, 2), {mk_var("y")})) == "scale[1/2](y)");
  CHECK(a.depth() == 2);
  CHECK(a.size() == 3);
  CHECK(free_vars(a) == std::set<VarId>{VarId("x")});
  CHECK_FALSE(is_closed(a));
  CHECK(is_closed(mk_app(sig->lookup("zero"), {})));
  const Term s1 = mk_app(sig->lookup("scale"), Rational(1), {mk_var("x")});
  const Term s2 = mk_app(sig->lookup("scale"), Rational(2), {mk_var("x")});
  CHECK_FALSE(s1 == s2);
}

TEST_CASE("substitution is simultaneous and shares untouched subterms") {
  const auto sig = arith();
  const Term t = mk_app(sig->lookup("add"), {mk_var("x"), mk_var("y")});
  Substitution swap{{VarId("x"), mk_var("y")}, {VarId("y"), mk_var("x")}};
  CHECK(substitute(t, swap) == mk_app(sig->lookup("add"), {mk_var("y"), mk_var("x")}));
  Substitution other{{VarId("z"), mk_var("x")}};
  CHECK(substitute(t, other).same(t));
}

TEST_CASE("monad laws on random terms") {
  const auto sig = arith();
  std::mt19937 rng(7);
  const std::vector<Term> vars{mk_var("x"), mk_var("y")};
  for (int i = 0; i < 200; ++i) {
    const Term t = random_term(rng, *sig, vars, 4);
    Substitution unit, s1, s2, composed;
    for (const auto& v : vars) {
      unit.emplace(v.as_var(), v);
      s1.emplace(v.as_var(), random_term(rng, *sig, vars, 2));
      s2.emplace(v.as_var(), random_term(rng, *sig, vars, 2));
    }
    for (const auto& [v, u] : s1) composed.emplace(v, substitute(u, s2));
    CHECK(substitute(t, unit) == t);
    CHECK(substitute(vars[1], s1) == s1.at(VarId("y")));
    CHECK(substitute(substitute(t, s1), s2) == substitute(t, composed));
  }
}

TEST_CASE("signature sums embed both summands") {
  const auto left = Signature::make({{"f", 1}, {"g", 2}});
  const auto right = Signature::make({{"g", 2}, {"h", 0}});
  const auto sum = Signature::sum(*left, *right);
  REQUIRE(sum->size() == 4);
  CHECK(sum->is_summand(left->id()));
  CHECK(sum->is_summand(right->id()));
  CHECK(sum->embed(right->lookup("g"))->name == "g'");
  CHECK(sum->embed(left->lookup("g"))->name == "g");
  CHECK(Signature::by_id(sum->id()) == sum);

  const Term t = mk_app(right->lookup("g"), {mk_app(right->lookup("h"), {}), mk_var("x")});
  const Term e = embed_signature(t, *sum);
  CHECK(to_string(e) == "g'(h, x)");
  CHECK(e.op().sig == sum->id());

  const auto unrelated = Signature::make({{"k", 0}});
  try {
    embed_signature(mk_app(unrelated->lookup("k"), {}), *sum);
    FAIL("expected NotASummand");
  } catch (const Error& e2) {
    CHECK(e2.code() == ErrorCode::NotASummand);
  }
  CHECK_THROWS_AS(mk_app(unrelated->lookup("k"), {}, sum.get()), Error);
}

TEST_CASE("duplicate and unknown symbols") {
  CHECK_THROWS_AS(Signature::make({{"f", 1}, {"f", 2}}), Error);
  const auto sig = arith();
  CHECK_FALSE(sig->find("nope").has_value());
  try {
    sig->lookup("nope");
    FAIL("expected UnknownSymbol");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownSymbol);
  }
}

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("3/6") == ratio(1, 2));
  CHECK(parse_rational("-1.25") == ratio(-5, 4));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(to_string(ratio(4, 6)) == "2/3");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(ratio(2, 4) == ratio(1, 2));
}
