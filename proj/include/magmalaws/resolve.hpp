#ifndef MAGMALAWS_RESOLVE_HPP
#define MAGMALAWS_RESOLVE_HPP

// The resolution pipeline: cheap facts first, closing the graph between
// stages so later (expensive) stages only see edges still unknown.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "magmalaws/finder.hpp"
#include "magmalaws/graph.hpp"
#include "magmalaws/invariants.hpp"
#include "magmalaws/linear.hpp"
#include "magmalaws/prover.hpp"

namespace magmalaws {

struct ResolveConfig {
  std::size_t max_order = 2;
  std::size_t table_size = 3;   // every table up to this size is scanned
  std::size_t finder_size = 4;  // then the finder, one size per edge, up to this
  SearchBudget finder_budget{200'000, std::chrono::milliseconds(2'000)};
  std::vector<std::int64_t> moduli{2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  bool affine = true;
  unsigned invariant_max_modulus = 6;
  std::vector<ProverLimits> prover_stages{
      ProverLimits{6, 8, 50'000, 0, 10, 20'000},
      ProverLimits{8, 12, 500'000, 2, 10, 200'000}};
  unsigned workers = 0;  // 0 = hardware concurrency
};

inline nlohmann::json to_json(const ResolveConfig& c) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : c.prover_stages)
    stages.push_back({{"max_term_order", s.max_term_order},
                      {"max_depth", s.max_depth},
                      {"max_states", s.max_states},
                      {"lemma_order", s.lemma_order},
                      {"lemma_term_order", s.lemma_term_order},
                      {"lemma_states", s.lemma_states}});
  return {{"max_order", c.max_order},
          {"table_size", c.table_size},
          {"finder_size", c.finder_size},
          {"finder_budget", {{"max_nodes", c.finder_budget.max_nodes},
                             {"time_limit_ms", c.finder_budget.time_limit.count()}}},
          {"moduli", c.moduli},
          {"affine", c.affine},
          {"invariant_max_modulus", c.invariant_max_modulus},
          {"prover_stages", stages}};
}

struct StageReport {
  std::string name;
  std::size_t facts = 0;
  double seconds = 0;
};

struct ResolveResult {
  ImplGraph graph;
  std::vector<StageReport> stages;
  std::vector<std::pair<LawNumber, LawNumber>> unknown;  // general relation
};

/// Compact table text used in provenance: "size:row-major digits", digits
/// separated by '.' once the size exceeds 10.
inline std::string magma_witness(const FiniteMagma& m) {
  std::string s = std::to_string(m.size()) + ":";
  for (std::size_t i = 0; i < m.table().size(); ++i) {
    if (m.size() > 10 && i) s += '.';
    s += std::to_string(m.table()[i]);
  }
  return s;
}

inline FiniteMagma parse_magma_witness(std::string_view w) {
  const auto colon = w.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("bad magma witness");
  const std::size_t n = std::stoul(std::string(w.substr(0, colon)));
  std::vector<Elem> t;
  std::string_view rest = w.substr(colon + 1);
  if (n > 10) {
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto dot = rest.find('.', start);
      t.push_back(Elem(std::stoul(std::string(rest.substr(start, dot - start)))));
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
  } else {
    for (char c : rest) t.push_back(Elem(c - '0'));
  }
  return FiniteMagma(n, std::move(t));
}

namespace detail {

// Runs f(i) for i in [0, count) on `workers` threads.
inline void parallel_for(std::size_t count, unsigned workers,
                         const std::function<void(std::size_t)>& f) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = unsigned(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) f(i);
    });
  for (auto& t : pool) t.join();
}

inline std::vector<std::pair<std::size_t, std::size_t>> open_pairs(const ImplGraph& g,
                                                                   Relation r) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b)
      if (a != b) {
        const Status s = g.status(a + 1, b + 1, r);
        if (s == Status::Unknown || s == Status::Conjectured) out.emplace_back(a, b);
      }
  return out;
}

}  // namespace detail

/// Builds and closes the implication graph of all laws of order <= max_order.
inline ResolveResult resolve_all(const ResolveConfig& config) {
  using clock = std::chrono::steady_clock;
  ResolveResult res{ImplGraph(config.max_order), {}, {}};
  ImplGraph& g = res.graph;
  const auto laws = enumerate_laws(config.max_order);
  const std::size_t n = laws.size();
  auto stage = [&](const std::string& name, auto&& body) {
    const auto t0 = clock::now();
    const std::size_t facts = body();
    g.close();
    res.stages.push_back(
        {name, facts, std::chrono::duration<double>(clock::now() - t0).count()});
  };

  stage("seed", [&] {
    std::size_t facts = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (Relation r : {Relation::General, Relation::Finite})
        facts += g.add_fact(a + 1, a + 1, r, Status::Implied, {"reflexivity", ""});
      // everything implies the trivial law
      if (laws[a].lhs != laws[a].rhs) continue;
      for (std::size_t b = 0; b < n; ++b)
        facts += g.add_fact(b + 1, a + 1, Relation::General, Status::Implied, {"trivial-target", ""});
    }
    return facts;
  });

  stage("singleton-collapse", [&] {
    std::size_t facts = 0;
    for (std::size_t a = 0; a < n; ++a) {
      if (!singleton_collapse(laws[a])) continue;
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) facts += g.add_fact(a + 1, b + 1, Relation::General, Status::Implied, {"collapse", ""});
    }
    return facts;
  });

  stage("tables", [&] {
    std::size_t facts = 0;
    std::vector<CompiledLaw> compiled(laws.begin(), laws.end());
    std::vector<std::uint8_t> sat(n);
    for (std::size_t size = 2; size <= config.table_size; ++size)
      for_each_table(size, [&](const FiniteMagma& m) {
        bool any = false, all = true;
        for (std::size_t i = 0; i < n; ++i) {
          sat[i] = compiled[i].satisfied_by(m);
          any |= sat[i] != 0;
          all &= sat[i] != 0;
        }
        if (!any || all) return;
        std::optional<std::string> witness;
        for (std::size_t a = 0; a < n; ++a) {
          if (!sat[a]) continue;
          for (std::size_t b = 0; b < n; ++b) {
            if (sat[b] || g.status(a + 1, b + 1, Relation::Finite) == Status::Refuted) continue;
            if (!witness) witness = magma_witness(m);
            facts += g.add_fact(a + 1, b + 1, Relation::Finite, Status::Refuted, {"magma", *witness});
          }
        }
      });
    return facts;
  });

  stage("finder", [&] {
    const auto open = detail::open_pairs(g, Relation::Finite);
    std::vector<std::optional<FiniteMagma>> found(open.size());
    detail::parallel_for(open.size(), config.workers, [&](std::size_t k) {
      const Law pos[] = {laws[open[k].first]}, neg[] = {laws[open[k].second]};
      for (std::size_t size = config.table_size + 1; size <= config.finder_size && !found[k]; ++size) {
        auto r = find_model(pos, neg, size, config.finder_budget);
        if (r.verdict == Verdict::Found) found[k] = std::move(r.model);
      }
    });
    std::size_t facts = 0;
    for (std::size_t k = 0; k < open.size(); ++k) {
      if (!found[k] || g.status(open[k].first + 1, open[k].second + 1, Relation::Finite) == Status::Refuted)
        continue;
      // one model refutes every open edge it separates
      const auto f = magmalaws::facts(*found[k], laws);
      const std::string w = magma_witness(*found[k]);
      for (std::size_t a : f.satisfied)
        for (std::size_t b : f.violated)
          if (g.status(a + 1, b + 1, Relation::Finite) != Status::Refuted)
            facts += g.add_fact(a + 1, b + 1, Relation::Finite, Status::Refuted, {"magma", w});
    }
    return facts;
  });

  stage("linear", [&] {
    std::size_t facts = 0;
    if (config.moduli.empty()) return facts;
    for (auto [a, b] : detail::open_pairs(g, Relation::Finite)) {
      if (g.status(a + 1, b + 1, Relation::Finite) == Status::Refuted) continue;
      const auto hit = linear_sweep(laws[a], laws[b], config.moduli, config.affine);
      if (!hit) continue;
      const auto& m = hit->model;
      facts += g.add_fact(a + 1, b + 1, Relation::Finite, Status::Refuted,
                          {"linear", std::to_string(m.n) + ":" + std::to_string(m.a) + ":" +
                                         std::to_string(m.b) + ":" + std::to_string(m.c)});
    }
    return facts;
  });

  stage("invariants", [&] {
    std::size_t facts = 0;
    const auto kinds = standard_invariants(config.invariant_max_modulus);
    for (auto [a, b] : detail::open_pairs(g, Relation::General))
      for (const auto& kind : kinds)
        if (invariant_refute(laws[a], laws[b], kind)) {
          facts += g.add_fact(a + 1, b + 1, Relation::General, Status::Refuted,
                              {"invariant", to_string(kind)});
          break;
        }
    return facts;
  });

  stage("canonizer", [&] {
    std::size_t facts = 0;
    std::vector<std::optional<RootRule>> rules(n);
    for (std::size_t a = 0; a < n; ++a) rules[a] = build_canonizer(laws[a]);
    for (auto [a, b] : detail::open_pairs(g, Relation::General)) {
      if (!rules[a]) continue;
      if (canonize(*rules[a], laws[b].lhs) != canonize(*rules[a], laws[b].rhs))
        facts += g.add_fact(a + 1, b + 1, Relation::General, Status::Refuted, {"canonizer", ""});
    }
    return facts;
  });

  for (std::size_t s = 0; s < config.prover_stages.size(); ++s) {
    const ProverLimits lim = config.prover_stages[s];
    stage("prover-" + std::to_string(s + 1), [&] {
      const auto open = detail::open_pairs(g, Relation::General);
      std::vector<std::uint8_t> proved(open.size(), 0);
      detail::parallel_for(open.size(), config.workers, [&](std::size_t k) {
        proved[k] = prove(laws[open[k].first], laws[open[k].second], lim).has_value();
      });
      std::size_t facts = 0;
      const std::string w = std::to_string(lim.max_term_order) + ":" + std::to_string(lim.max_depth) +
                            ":" + std::to_string(lim.max_states) + ":" + std::to_string(lim.lemma_order);
      for (std::size_t k = 0; k < open.size(); ++k)
        if (proved[k] &&
            g.status(open[k].first + 1, open[k].second + 1, Relation::General) != Status::Implied)
          facts += g.add_fact(open[k].first + 1, open[k].second + 1, Relation::General,
                              Status::Implied, {"proof", w});
      return facts;
    });
  }

  for (auto [a, b] : detail::open_pairs(g, Relation::General)) res.unknown.emplace_back(a + 1, b + 1);
  return res;
}

}  // namespace magmalaws

#endif  // MAGMALAWS_RESOLVE_HPP
