#include <doctest.h>

#include "corec/error.hpp"
#include "corec/frontends.hpp"
#include "corec/oracles.hpp"

using namespace corec;
using namespace corec::oracles;

TEST_CASE("thue-morse parity") {
  const int want[] = {0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0};
  for (std::uint64_t i = 0; i < 16; ++i) CHECK(thue_morse(i) == want[i]);
}

TEST_CASE("zip pair recurrences by hand") {
  // u = zip(0.t, 1.u), t = zip(1.u, 0.t) give u_{2n} = (0.t)_n, u_{2n+1} = (1.u)_n.
  const auto [u, t] = sandwiched_zip_pair(8);
  CHECK(u == std::vector<int>{0, 1, 1, 0, 0, 1, 0, 1});
  CHECK(t == std::vector<int>{1, 0, 0, 1, 1, 0, 1, 0});
  const auto [ft, fu] = flat_zip_pair(6);
  CHECK(ft == std::vector<int>{1, 0, 1, 1, 0, 0});
  CHECK(fu == std::vector<int>{0, 1, 0, 0, 1, 1});
}

TEST_CASE("binomial shuffle and cauchy convolution") {
  const std::vector<Rational> ones(6, Rational(1));
  CHECK(binomial_shuffle(ones, ones, 5) == std::vector<Rational>{1, 2, 4, 8, 16});
  CHECK(cauchy_convolution(ones, ones, 5) == std::vector<Rational>{1, 2, 3, 4, 5});
  const std::vector<Rational> nat{0, 1, 2, 3, 4};
  CHECK(cauchy_convolution(nat, ones, 5) == std::vector<Rational>{0, 1, 3, 6, 10});
}

TEST_CASE("zip fixpoint recurrence") {
  const std::vector<Rational> s{1, 2, 3, 4};
  CHECK(zip_fixpoint(s, 8) == std::vector<Rational>{1, 1, 2, 1, 3, 2, 4, 1});
}

TEST_CASE("set-theoretic language oracle") {
  using Op = LangTerm::Op;
  const LangPtr a = lang(Op::Letter, {}, 0), b = lang(Op::Letter, {}, 1);
  const LangPtr ab_star = lang(Op::Star, {lang(Op::Concat, {a, b})});
  const std::vector<std::size_t> abab{0, 1, 0, 1}, aba{0, 1, 0}, none{};
  CHECK(lang_member(*ab_star, abab));
  CHECK(lang_member(*ab_star, none));
  CHECK_FALSE(lang_member(*ab_star, aba));
  CHECK(lang_member(*lang(Op::Compl, {ab_star}), aba));
  const LangPtr cinv = lang(Op::Cinv, {b, a}, 0, true);  // eps + a.b + b.a
  const std::vector<std::size_t> x{0, 1}, y{1, 0}, z{0, 0};
  CHECK(lang_member(*cinv, none));
  CHECK(lang_member(*cinv, x));
  CHECK(lang_member(*cinv, y));
  CHECK_FALSE(lang_member(*cinv, z));
  CHECK(all_words(2, 6).size() == 127);
  CHECK(all_words(3, 2).size() == 13);
}

TEST_CASE("gnf derivations") {
  const GnfFile g = parse_gnf("terminals a b\nnonterminals S B\nS -> a S B | b\nB -> b\n");
  auto derives = [&](std::vector<std::string> w) { return gnf_derives(g, w); };
  CHECK(derives({"b"}));
  CHECK(derives({"a", "b", "b"}));
  CHECK(derives({"a", "a", "b", "b", "b"}));
  CHECK_FALSE(derives({"a", "b", "b", "b"}));
  CHECK_FALSE(derives({}));
}

TEST_CASE("sos transitions of P = a.(P | c.0) + b.0") {
  const CcsFile f = parse_ccs("P = a.(P | c.0) + b.0\n");
  const auto ts = sos_step(Agent::var("P"), f);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].action == "a");
  CHECK(print_agent(ts[0].next) == "P | c.0");
  CHECK(ts[1].action == "b");
  CHECK(ts[1].next == Agent::nil());
}

TEST_CASE("sos synchronisation and restriction") {
  const CcsFile f = parse_ccs("actions a\nP = 0\n");
  const Agent sync = parse_agent("(a.0 | 'a.0)\\{a}", f);
  const auto ts = sos_step(sync, f);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].action == "tau");
}

TEST_CASE("text interface") {
  CHECK(oracle_eval("thue_morse", {"8"}) == "0 1 1 0 1 0 0 1");
  CHECK(oracle_names().size() >= 9);
  try {
    oracle_eval("nope", {});
    FAIL("expected UnknownOracle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownOracle);
  }
}
