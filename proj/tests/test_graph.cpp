#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "magmalaws/finder.hpp"
#include "magmalaws/graph.hpp"
#include "magmalaws/resolve.hpp"

using namespace magmalaws;

namespace {

using G = Relation;

// Ground truth relative to a finite class of magmas closed under opposites:
// a implies b iff every member satisfying a satisfies b.
struct ModelClass {
  std::vector<std::vector<bool>> sat;  // [magma][law]

  ModelClass(std::size_t max_order, std::size_t count, std::mt19937& rng) {
    const auto laws = enumerate_laws(max_order);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t n = 2 + k % 2;
      std::uniform_int_distribution<Elem> pick(0, Elem(n - 1));
      const FiniteMagma m = FiniteMagma::from_function(n, [&](Elem, Elem) { return pick(rng); });
      for (const FiniteMagma& x : {m, opposite(m)}) {
        std::vector<bool> row;
        for (const Law& l : laws) row.push_back(satisfies(x, l));
        sat.push_back(std::move(row));
      }
    }
  }

  bool implies(std::size_t a, std::size_t b) const {
    for (const auto& row : sat)
      if (row[a] && !row[b]) return false;
    return true;
  }
};

}  // namespace

TEST(AddFact, Examples) {
  ImplGraph g(4);
  EXPECT_TRUE(g.add_fact(677, 255, G::General, Status::Refuted, {"external", "greedy"}));
  g.close();
  EXPECT_EQ(g.status(677, 255, G::General), Status::Refuted);
  EXPECT_EQ(g.status(677, 255, G::Finite), Status::Unknown);
  EXPECT_EQ(g.provenance(677, 255, G::General).method, "external");

  ImplGraph h(2);
  EXPECT_TRUE(h.add_fact(43, 43, G::General, Status::Implied, {"reflexivity", ""}));
  EXPECT_TRUE(h.add_fact(4, 5, G::General, Status::Refuted, {"invariant", "leftmost"}));
  EXPECT_FALSE(h.add_fact(4, 5, G::General, Status::Implied, {"external", "bogus"}));
  EXPECT_TRUE(h.poisoned());
  EXPECT_EQ(h.status(4, 5, G::General), Status::Inconsistent);
  ASSERT_EQ(h.inconsistencies().size(), 1u);
  EXPECT_EQ(h.inconsistencies()[0].implied_by, "external:bogus");
  EXPECT_EQ(h.inconsistencies()[0].refuted_by, "invariant:leftmost");
  EXPECT_THROW(h.add_fact(3, 4, G::General, Status::Implied, {"external", ""}), std::logic_error);
}

TEST(Close, Transitivity) {
  ImplGraph g(2);
  g.add_fact(2, 4, G::General, Status::Implied, {"external", ""});
  g.add_fact(4, 10, G::General, Status::Implied, {"external", ""});
  const auto report = g.close();
  EXPECT_EQ(g.status(2, 10, G::General), Status::Implied);
  EXPECT_GT(report.resolved.at("transitivity"), 0u);
  const auto why = g.explain(2, 10, G::General);
  ASSERT_EQ(why.size(), 2u);
  EXPECT_EQ(why[0].src, 2u);
  EXPECT_EQ(why[1].dst, 10u);
}

TEST(Close, DualityMirrorsStatuses) {
  EXPECT_EQ(ImplGraph(2).dual_of(4), 5u);
  ImplGraph h(4);
  EXPECT_EQ(h.dual_of(327), 395u);
  h.add_fact(327, 4, G::General, Status::Refuted, {"external", ""});
  h.close();
  EXPECT_EQ(h.status(395, 5, G::General), Status::Refuted);
  EXPECT_EQ(h.provenance(395, 5, G::General).text(), "closure:duality");
}

TEST(Close, FiniteRefutationTransfersToGeneral) {
  ImplGraph g(4);
  g.add_fact(1286, 3, G::Finite, Status::Refuted, {"linear", "11:1:7:0"});
  g.close();
  EXPECT_EQ(g.status(1286, 3, G::General), Status::Refuted);
  g.add_fact(43, 4531, G::General, Status::Implied, {"proof", ""});
  g.close();
  EXPECT_EQ(g.status(43, 4531, G::Finite), Status::Implied);
  g.add_fact(43, 4, G::General, Status::Refuted, {"invariant", "multiplicity"});
  g.close();
  EXPECT_EQ(g.status(43, 4, G::Finite), Status::Unknown);
}

TEST(Close, RefutationRulesAndExplain) {
  ImplGraph g(2);
  g.add_fact(3, 10, G::General, Status::Refuted, {"magma", "2:0101"});
  g.add_fact(4, 10, G::General, Status::Implied, {"proof", "x"});
  g.add_fact(2, 3, G::General, Status::Implied, {"collapse", ""});
  const auto report = g.close();
  // 4 ⊨ 10 and 3 ⊭ 10 give 3 ⊭ 4; 2 ⊨ 3 and 3 ⊭ 10 say nothing about 2
  ASSERT_EQ(g.status(3, 4, G::General), Status::Refuted);
  EXPECT_GT(report.resolved.at("stronger-target"), 0u);
  EXPECT_NE(g.status(2, 10, G::General), Status::Refuted);
  const auto why = g.explain(3, 4, G::General);
  ASSERT_FALSE(why.empty());
  bool has_seed = false, has_proof = false;
  for (const auto& f : why) {
    has_seed |= f.status == Status::Refuted && f.provenance.method == "magma";
    has_proof |= f.status == Status::Implied && f.provenance.method == "proof";
  }
  EXPECT_TRUE(has_seed);
  EXPECT_TRUE(has_proof);
}

TEST(Close, ConjecturesAreQuarantined) {
  ImplGraph g(2);
  g.add_fact(3, 4, G::General, Status::Conjectured, {"external", "guess"});
  g.add_fact(4, 5, G::General, Status::Implied, {"external", ""});
  g.close();
  EXPECT_EQ(g.status(3, 4, G::General), Status::Conjectured);
  EXPECT_EQ(g.status(3, 5, G::General), Status::Unknown);
  EXPECT_TRUE(g.explain(3, 4, G::General).empty());
}

TEST(Close, IsIdempotent) {
  auto res = resolve_all(ResolveConfig{});
  const std::string before = res.graph.to_csv();
  res.graph.close();
  EXPECT_EQ(res.graph.to_csv(), before);
}

TEST(Properties, RandomConsistentFactsNeverConflictAndStaySound) {
  std::mt19937 rng(47);
  const std::size_t order = 2;
  for (int trial = 0; trial < 5; ++trial) {
    const ModelClass truth(order, 12, rng);
    ImplGraph g(order);
    const std::size_t n = g.size();
    for (int k = 0; k < 400; ++k) {
      const std::size_t a = rng() % n, b = rng() % n;
      const Status s = truth.implies(a, b) ? Status::Implied : Status::Refuted;
      g.add_fact(a + 1, b + 1, Relation(rng() % 2), s, {"external", ""});
      if (k % 50 == 0) g.close();
    }
    const auto report = g.close();
    ASSERT_TRUE(report.inconsistencies.empty());
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (G r : {G::General, G::Finite}) {
          const Status s = g.status(a + 1, b + 1, r);
          if (s == Status::Implied) ASSERT_TRUE(truth.implies(a, b)) << a + 1 << "->" << b + 1;
          if (s == Status::Refuted) ASSERT_FALSE(truth.implies(a, b)) << a + 1 << "->" << b + 1;
          const LawNumber da = g.dual_of(a + 1), db = g.dual_of(b + 1);
          ASSERT_EQ(s, g.status(da, db, r));
        }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (g.status(a + 1, b + 1, G::General) == Status::Implied)
          ASSERT_EQ(g.status(a + 1, b + 1, G::Finite), Status::Implied);
        if (g.status(a + 1, b + 1, G::Finite) == Status::Refuted)
          ASSERT_EQ(g.status(a + 1, b + 1, G::General), Status::Refuted);
      }
  }
}

TEST(Export, CsvAndJsonRoundTrip) {
  auto res = resolve_all(ResolveConfig{});
  const ImplGraph& g = res.graph;
  std::istringstream csv(g.to_csv());
  ImplGraph from_csv(2);
  from_csv.import_csv(csv);
  from_csv.close();
  EXPECT_TRUE(from_csv == g);
  ImplGraph from_json(2);
  from_json.import_json(nlohmann::json::parse(g.to_json().dump()));
  from_json.close();
  EXPECT_TRUE(from_json == g);
  EXPECT_EQ(g.to_json()["laws"], 46);
  EXPECT_EQ(g.to_csv().substr(0, 35), "src,dst,relation,status,provenance\n");
}

TEST(Export, DotCapsLabels) {
  ImplGraph g(2);
  for (LawNumber e = 3; e <= 46; ++e) {
    g.add_fact(2, e, G::General, Status::Implied, {"collapse", ""});
    g.add_fact(e, 2, G::General, Status::Implied, {"external", ""});
  }
  g.close();
  const std::string dot = g.to_dot();
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("+33 more"), std::string::npos);
}

TEST(Export, ImportRejectsUnknownLaws) {
  ImplGraph g(1);
  std::istringstream csv("src,dst,relation,status,provenance\n1,99,general,implied,external\n");
  EXPECT_THROW(g.import_csv(csv), std::out_of_range);
}

TEST(Condensation, MutualImplicationIsOneClass) {
  ImplGraph g(2);
  g.add_fact(41, 46, G::General, Status::Implied, {"proof", ""});
  g.add_fact(46, 41, G::General, Status::Implied, {"proof", ""});
  g.close();
  std::size_t with41 = 0;
  for (const auto& c : g.equivalence_classes())
    if (std::find(c.begin(), c.end(), 41u) != c.end()) with41 = c.size();
  EXPECT_EQ(with41, 2u);
}

TEST(Resolve, OrderTwoSlice) {
  const auto res = resolve_all(ResolveConfig{});
  const ImplGraph& g = res.graph;
  EXPECT_EQ(g.size(), 46u);
  EXPECT_FALSE(g.poisoned());
  const auto stats = g.stats();
  EXPECT_GE(stats["general"]["resolved_fraction"].get<double>(), 0.95);
  EXPECT_EQ(g.status(43, 4, G::General), Status::Refuted);
  bool together = false;
  for (const auto& c : g.equivalence_classes())
    together |= std::find(c.begin(), c.end(), 41u) != c.end() &&
                std::find(c.begin(), c.end(), 46u) != c.end();
  EXPECT_TRUE(together);
  for (const auto& s : res.stages) EXPECT_FALSE(s.name.empty());
}

TEST(Resolve, SyntacticStagesAloneRefute43To4ByInvariant) {
  ResolveConfig cfg;
  cfg.table_size = 1;
  cfg.finder_size = 1;
  cfg.moduli.clear();
  const auto res = resolve_all(cfg);
  EXPECT_EQ(res.graph.status(43, 4, G::General), Status::Refuted);
  EXPECT_EQ(res.graph.provenance(43, 4, G::General).method, "invariant");
  EXPECT_EQ(res.graph.status(43, 4, G::Finite), Status::Unknown);
}

TEST(Resolve, IsDeterministic) {
  ResolveConfig one;
  one.workers = 1;
  ResolveConfig many;
  many.workers = 4;
  EXPECT_EQ(resolve_all(one).graph.to_csv(), resolve_all(many).graph.to_csv());
}
