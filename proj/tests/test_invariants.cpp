#include <gtest/gtest.h>

#include <random>

#include "magmalaws/invariants.hpp"
#include "magmalaws/numbering.hpp"
#include "magmalaws/prover.hpp"

using namespace magmalaws;

namespace {

Law E(LawNumber n) { return number_to_law(n, 4); }

Word random_word(std::mt19937& rng, std::size_t order, Var vars) {
  if (order == 0) return Word::var(Var(rng() % vars));
  const std::size_t left = rng() % order;
  return random_word(rng, left, vars) * random_word(rng, order - 1 - left, vars);
}

const Law kWorkedHyp = parse_law("y*(x*(y*(y*y))) = x");

}  // namespace

TEST(InvariantValue, Examples) {
  EXPECT_EQ(render_invariant(invariant_value(parse_word("(x*y)*z"), InvariantKind::leftmost())), "x");
  EXPECT_EQ(render_invariant(invariant_value(parse_word("(x*y)*z"), InvariantKind::rightmost())), "z");
  using Counts = std::map<Var, unsigned>;
  EXPECT_EQ(std::get<Counts>(invariant_value(parse_word("x*y"), InvariantKind::multiplicity())),
            (Counts{{0, 1}, {1, 1}}));
  EXPECT_EQ(std::get<Counts>(invariant_value(parse_word("(x*x)*x"), InvariantKind::multiplicity_mod(2))),
            (Counts{{0, 1}}));
}

TEST(InvariantKinds, TextRoundTrip) {
  for (const auto& k : standard_invariants(6)) EXPECT_EQ(parse_invariant_kind(to_string(k)), k);
  EXPECT_THROW(InvariantKind::multiplicity_mod(1), std::invalid_argument);
}

TEST(InvariantRefute, Examples) {
  const auto w = invariant_refute(E(43), E(4), InvariantKind::multiplicity());
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(to_json(*w)["kind"], "multiplicity");
  EXPECT_TRUE(invariant_refute(E(4), E(5), InvariantKind::leftmost()).has_value());
  EXPECT_TRUE(invariant_refute(E(23), E(3), InvariantKind::multiplicity_mod(2)).has_value());
  EXPECT_FALSE(invariant_refute(E(4), E(3), InvariantKind::leftmost()).has_value());
}

TEST(InvariantRefute, NeverContradictsAProof) {
  const auto laws = enumerate_laws(2);
  const ProverLimits lim{6, 8, 20'000, 0, 10, 10'000};
  const auto kinds = standard_invariants(6);
  for (const Law& h : laws)
    for (const Law& t : laws) {
      bool refuted = false;
      for (const auto& k : kinds) refuted |= invariant_refute(h, t, k).has_value();
      refuted |= canonizer_refute(h, t);
      if (refuted) ASSERT_FALSE(prove(h, t, lim).has_value()) << render_law(h) << " => " << render_law(t);
    }
}

TEST(Canonizer, Examples) {
  const auto rule = build_canonizer(kWorkedHyp);
  ASSERT_TRUE(rule.has_value());
  EXPECT_EQ(rule->pattern, parse_word("y*(x*(y*(y*y)))"));
  EXPECT_EQ(rule->result, parse_word("x"));
  EXPECT_FALSE(build_canonizer(E(43)).has_value());
  const auto e4 = build_canonizer(E(4));
  ASSERT_TRUE(e4.has_value());
  EXPECT_EQ(e4->pattern, parse_word("x*y"));
  EXPECT_EQ(e4->result, parse_word("x"));
}

TEST(Canonizer, WorkedRefutation) {
  const Law target = parse_law("x = (x*x)*(x*(x*x))");
  EXPECT_TRUE(canonizer_refute(kWorkedHyp, target));
  const auto w = canonizer_refute_witness(kWorkedHyp, target);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(to_json(*w)["kind"], "canonizer");
  const auto rule = build_canonizer(kWorkedHyp);
  EXPECT_EQ(canonize(*rule, parse_word("z")), parse_word("z"));
}

TEST(Canonizer, NormalFormsAreIdempotent) {
  std::mt19937 rng(31);
  for (const Law& h : {kWorkedHyp, E(4), E(5)}) {
    const auto rule = build_canonizer(h);
    ASSERT_TRUE(rule.has_value());
    for (int t = 0; t < 200; ++t) {
      const Word w = random_word(rng, rng() % 10, 3);
      const Word c = canonize(*rule, w);
      ASSERT_EQ(canonize(*rule, c), c) << render_word(w);
    }
  }
}

TEST(Canonizer, WeakCanonizerIdentity) {
  std::mt19937 rng(37);
  const auto rule = build_canonizer(kWorkedHyp);
  ASSERT_TRUE(rule.has_value());
  for (int t = 0; t < 200; ++t) {
    std::map<Var, Word> theta, theta_c;
    for (Var v = 0; v < 2; ++v) {
      theta[v] = random_word(rng, rng() % 4, 3);
      theta_c[v] = canonize(*rule, theta[v]);
    }
    ASSERT_EQ(canonize(*rule, substitute(rule->pattern, theta)), substitute(rule->result, theta_c));
  }
}
