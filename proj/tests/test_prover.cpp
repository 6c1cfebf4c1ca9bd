#include <gtest/gtest.h>

#include "magmalaws/finder.hpp"
#include "magmalaws/numbering.hpp"
#include "magmalaws/proof_check.hpp"
#include "magmalaws/prover.hpp"

using namespace magmalaws;

namespace {

Law E(LawNumber n) { return number_to_law(n, 4); }

const ProverLimits kSmall{6, 8, 50'000, 0, 10, 20'000};

// Every magma of size <= 3 satisfying hyp also satisfies goal.
bool sound_on_small_models(const Law& hyp, const Law& goal) {
  bool ok = true;
  for (std::size_t s = 1; s <= 3 && ok; ++s)
    for_each_table(s, [&](const FiniteMagma& m) {
      if (ok && satisfies(m, hyp) && !satisfies(m, goal)) ok = false;
    });
  return ok;
}

}  // namespace

TEST(Prove, CommutativityGivesCentralProductsInOneStep) {
  const auto c = prove(E(43), E(4531), kSmall);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->steps.size(), 1u);
  EXPECT_EQ(c->hypothesis, 43u);
  EXPECT_EQ(c->target, 4531u);
  EXPECT_TRUE(check_proof(*c).valid());
}

TEST(Prove, E854ImpliesE378) {
  ProverLimits lim;
  lim.max_term_order = 8;
  lim.max_depth = 12;
  const auto c = prove(E(854), E(378), lim);
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(check_proof(*c).valid());
  EXPECT_TRUE(sound_on_small_models(E(854), E(378)));
}

TEST(Prove, ReflexivityNeedsAtMostOneStep) {
  const auto c = prove(E(168), E(168), kSmall);
  ASSERT_TRUE(c.has_value());
  EXPECT_LE(c->steps.size(), 1u);
  EXPECT_TRUE(check_proof(*c).valid());
  ProofCert trivial{0, 0, E(43), parse_law("x*y = x*y"), {}};
  EXPECT_TRUE(check_proof(trivial).valid());
}

TEST(Prove, AbsenceIsNotARefutation) {
  EXPECT_FALSE(prove(E(43), E(4), kSmall).has_value());
  EXPECT_FALSE(prove(E(4), E(43), kSmall).has_value());
}

TEST(CheckProof, NegativeControls) {
  auto c = prove(E(43), E(4531), kSmall);
  ASSERT_TRUE(c.has_value());
  ASSERT_FALSE(c->steps.empty());

  ProofCert bad_sub = *c;
  for (auto& [v, w] : bad_sub.steps[0].substitution) w = w * w;
  EXPECT_EQ(check_proof(bad_sub).status, CheckStatus::Mismatch);

  ProofCert bad_pos = *c;
  bad_pos.steps[0].position = "LLLLLL";
  EXPECT_EQ(check_proof(bad_pos).status, CheckStatus::Malformed);

  ProofCert missing = *c;
  missing.steps[0].substitution.erase(missing.steps[0].substitution.begin());
  EXPECT_EQ(check_proof(missing).status, CheckStatus::Malformed);

  ProofCert truncated = *c;
  truncated.steps.clear();
  EXPECT_EQ(check_proof(truncated).status, CheckStatus::Mismatch);

  nlohmann::json j = to_json(*c);
  EXPECT_TRUE(check_proof_json(j).valid());
  j["steps"][0]["dir"] = "sideways";
  EXPECT_EQ(check_proof_json(j).status, CheckStatus::Malformed);
}

TEST(CheckProof, JsonShape) {
  const auto c = prove(E(43), E(4531), kSmall);
  ASSERT_TRUE(c.has_value());
  const auto j = to_json(*c);
  EXPECT_EQ(j["hyp"], 43);
  EXPECT_EQ(j["target"], 4531);
  ASSERT_EQ(j["steps"].size(), 1u);
  const auto& s = j["steps"][0];
  EXPECT_TRUE(s["dir"] == "fwd" || s["dir"] == "bwd");
  EXPECT_TRUE(s["pos"].is_string());
  EXPECT_TRUE(s["sub"].is_object());
  EXPECT_TRUE(check_proof(proof_from_json(j)).valid());
}

TEST(SingletonCollapse, Examples) {
  EXPECT_TRUE(singleton_collapse(E(2)));
  EXPECT_FALSE(singleton_collapse(E(46)));
  EXPECT_TRUE(singleton_collapse(normalize(parse_law("x = y*(z*w)"))));
  EXPECT_FALSE(singleton_collapse(E(4)));
}

TEST(SingletonCollapse, CollapsingLawsHaveOnlyTrivialSmallModels) {
  for (const Law& l : enumerate_laws(3)) {
    if (!singleton_collapse(l)) continue;
    for_each_table(2, [&](const FiniteMagma& m) { ASSERT_FALSE(satisfies(m, l)) << render_law(l); });
  }
}

TEST(RewriteClosure, Examples) {
  const std::vector<Law> pair = {E(41), E(46)};
  const auto both = simple_rewrite_closure(pair, kSmall);
  ASSERT_EQ(both.size(), 2u);
  for (const auto& c : both) EXPECT_TRUE(check_proof(c).valid());

  EXPECT_TRUE(simple_rewrite_closure({E(43), E(4)}, kSmall).empty());

  for (LawNumber h : {2, 4, 43, 168}) {
    const auto c = prove(E(h), E(1), kSmall);
    ASSERT_TRUE(c.has_value()) << h;
    EXPECT_TRUE(check_proof(*c).valid());
  }
}

TEST(Properties, EveryCertificateOnTheOrder2GridChecksAndIsSound) {
  const auto laws = enumerate_laws(2);
  const auto certs = simple_rewrite_closure(laws, kSmall);
  EXPECT_FALSE(certs.empty());
  for (const auto& c : certs) {
    ASSERT_TRUE(check_proof(c).valid()) << c.hypothesis << " -> " << c.target;
    ASSERT_TRUE(sound_on_small_models(c.hyp, c.goal)) << c.hypothesis << " -> " << c.target;
  }
}

TEST(Properties, LargerLimitsKeepEveryProof) {
  const auto laws = enumerate_laws(2);
  ProverLimits small{4, 4, 5'000, 0, 10, 1'000};
  for (std::size_t i = 0; i < laws.size(); ++i)
    for (std::size_t j = 0; j < laws.size(); ++j) {
      if (!prove(laws[i], laws[j], small)) continue;
      ASSERT_TRUE(prove(laws[i], laws[j], kSmall).has_value()) << i + 1 << " -> " << j + 1;
    }
}
