#ifndef MAGMALAWS_PROVER_HPP
#define MAGMALAWS_PROVER_HPP

// Bounded equational rewriting: a bidirectional breadth-first search that
// rewrites target.lhs towards target.rhs with instances of the hypothesis,
// producing a replayable certificate.
//
// When the direct search fails, small laws (order <= lemma_order) that the
// hypothesis proves cheaply are added as extra rewrite rules; every use of
// such a lemma is expanded back into hypothesis steps, so certificates only
// ever mention the hypothesis.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "magmalaws/finder.hpp"
#include "magmalaws/law.hpp"
#include "magmalaws/numbering.hpp"

namespace magmalaws {

struct ProverLimits {
  std::size_t max_term_order = 9;
  std::size_t max_depth = 14;
  std::size_t max_states = 2'000'000;
  std::size_t lemma_order = 2;  // 0 disables lemmas
  std::size_t lemma_term_order = 10;
  std::size_t lemma_states = 200'000;
};

enum class Direction { Forward, Backward };

/// Rewrites the subterm at `position` (an L/R path) using the hypothesis read
/// left to right (Forward) or right to left (Backward) under `substitution`,
/// which covers every hypothesis variable.
struct RewriteStep {
  std::string position;
  Direction direction = Direction::Forward;
  std::map<Var, Word> substitution;

  friend bool operator==(const RewriteStep&, const RewriteStep&) = default;
};

struct ProofCert {
  LawNumber hypothesis = 0;  // 0 when the law has no number
  LawNumber target = 0;
  Law hyp;
  Law goal;
  std::vector<RewriteStep> steps;
};

/// True iff one side is a lone variable absent from the other side; such a law
/// is equivalent to the singleton law x = y.
inline bool singleton_collapse(const Law& law) {
  const auto lone = [](const Word& v, const Word& other) {
    return v.is_var() && !other.contains_var(v.var_index());
  };
  return lone(law.lhs, law.rhs) || lone(law.rhs, law.lhs);
}

namespace detail {

inline LawNumber try_number(const Law& l) {
  try {
    return law_number(normalize(l));
  } catch (const std::exception&) {
    return 0;
  }
}

// Words as raw preorder byte strings; the search never builds Word objects in
// its inner loop.
using Code = std::string;

inline Code code_of(const Word& w) {
  auto c = w.code();
  return Code(c.begin(), c.end());
}

inline Word word_of(std::string_view c) {
  return Word::from_code(std::vector<std::uint8_t>(c.begin(), c.end()));
}

inline std::size_t code_end(std::string_view c, std::size_t pos) {
  std::size_t need = 1;
  while (need > 0) {
    need += std::uint8_t(c[pos]) == kOp ? 1 : std::size_t(-1);
    ++pos;
  }
  return pos;
}

class Rewriter {
 public:
  // Image of a rule variable: a slice of the subject or a pool entry.
  struct Binding {
    std::string_view text;
    bool bound = false;
  };

  struct Applied {
    std::size_t rule;
    std::size_t offset;
    bool forward;
    const std::vector<Binding>& bind;
  };

  Rewriter(const std::vector<Law>& rules, const Law& goal, std::size_t max_order)
      : max_size_(2 * max_order + 1) {
    for (const Law& r : rules) {
      rules_.push_back({code_of(r.lhs), code_of(r.rhs)});
      vars_ = std::max(vars_, r.var_bound());
    }
    const int goal_vars = goal.var_bound();
    for (int v = 0; v < goal_vars; ++v) base_pool_.insert(Code(1, char(v)));
    if (goal_vars < kNamedVars) base_pool_.insert(Code(1, char(goal_vars)));
    add_subterms(code_of(goal.lhs), base_pool_);
    add_subterms(code_of(goal.rhs), base_pool_);
  }

  /// Calls f(result, Applied) for every single-step rewrite of t; stops early
  /// when f returns true. Free variables of the produced side range over the
  /// goal's variables, one fresh variable, and subterms of the goal and of t.
  template <class F>
  bool for_each(const Code& t, F&& f) const {
    std::set<Code> pool_set = base_pool_;
    add_subterms(t, pool_set);
    const std::vector<Code> pool(pool_set.begin(), pool_set.end());
    std::vector<Binding> bind(std::size_t(std::max(1, vars_)));
    std::vector<int> free;
    std::vector<std::size_t> choice;
    Code out;
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
      const std::size_t end = code_end(t, pos);
      const std::string_view subject(t.data() + pos, end - pos);
      for (std::size_t ri = 0; ri < rules_.size(); ++ri) {
        for (int dir = 0; dir < 2; ++dir) {
          const Code& pattern = rules_[ri][dir];
          const Code& result = rules_[ri][1 - dir];
          std::fill(bind.begin(), bind.end(), Binding{});
          std::size_t pi = 0, si = 0;
          if (!match(pattern, pi, subject, si, bind)) continue;
          free.clear();
          for (unsigned char c : result)
            if (c != kOp && !bind[c].bound &&
                std::find(free.begin(), free.end(), int(c)) == free.end())
              free.push_back(c);
          choice.assign(free.size(), 0);
          for (;;) {
            for (std::size_t k = 0; k < free.size(); ++k)
              bind[free[k]] = Binding{pool[choice[k]], true};
            std::size_t len = t.size() - subject.size();
            for (unsigned char c : result) len += c == kOp ? 1 : bind[c].text.size();
            if (len <= max_size_) {
              out.assign(t, 0, pos);
              for (unsigned char c : result) {
                if (c == kOp)
                  out.push_back(char(kOp));
                else
                  out.append(bind[c].text);
              }
              out.append(t, end, Code::npos);
              if (out != t && f(out, Applied{ri, pos, dir == 0, bind})) return true;
            }
            std::size_t k = 0;
            while (k < choice.size() && ++choice[k] == pool.size()) choice[k++] = 0;
            if (k == choice.size()) break;
          }
        }
      }
    }
    return false;
  }

 private:
  static void add_subterms(const Code& c, std::set<Code>& into) {
    for (std::size_t p = 0; p < c.size(); ++p) into.insert(c.substr(p, code_end(c, p) - p));
  }

  static bool match(const Code& pattern, std::size_t& pi, std::string_view subject,
                    std::size_t& si, std::vector<Binding>& bind) {
    const unsigned char p = pattern[pi++];
    if (p != kOp) {
      const std::size_t end = code_end(subject, si);
      const std::string_view piece = subject.substr(si, end - si);
      si = end;
      if (!bind[p].bound) {
        bind[p] = Binding{piece, true};
        return true;
      }
      return bind[p].text == piece;
    }
    if (std::uint8_t(subject[si]) != kOp) return false;
    ++si;
    return match(pattern, pi, subject, si, bind) && match(pattern, pi, subject, si, bind);
  }

  std::size_t max_size_;
  int vars_ = 0;
  std::vector<std::array<Code, 2>> rules_;
  std::set<Code> base_pool_;
};

// A step that may use any of the search rules.
struct RuleStep {
  std::size_t rule;
  RewriteStep step;
};

struct SearchTree {
  std::unordered_map<Code, std::uint32_t> index;
  std::vector<Code> words;
  std::vector<std::uint32_t> parent;
  std::size_t depth = 0;
  std::size_t layer_begin = 0;

  explicit SearchTree(const Code& root) {
    index.emplace(root, 0);
    words.push_back(root);
    parent.push_back(0);
  }

  std::vector<Code> path_to(std::uint32_t i) const {
    std::vector<Code> out{words[i]};
    while (i != 0) {
      i = parent[i];
      out.push_back(words[i]);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

inline RuleStep step_between(const Rewriter& rw, const Code& from, const Code& to) {
  std::optional<RuleStep> found;
  rw.for_each(from, [&](const Code& out, const Rewriter::Applied& a) {
    if (out != to) return false;
    RuleStep s{a.rule, {}};
    s.step.position = word_of(from).path_of_offset(a.offset);
    s.step.direction = a.forward ? Direction::Forward : Direction::Backward;
    for (std::size_t v = 0; v < a.bind.size(); ++v)
      if (a.bind[v].bound) s.step.substitution[Var(v)] = word_of(a.bind[v].text);
    found = std::move(s);
    return true;
  });
  if (!found) throw std::logic_error("prover lost a rewrite step");
  return *found;
}

inline Direction flip(Direction d) {
  return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}

// Bidirectional breadth-first search between goal.lhs and goal.rhs.
inline std::optional<std::vector<RuleStep>> search_chain(const std::vector<Law>& rules,
                                                         const Law& goal,
                                                         std::size_t max_order,
                                                         std::size_t max_depth,
                                                         std::size_t max_states) {
  const Code start = code_of(goal.lhs), finish = code_of(goal.rhs);
  if (start == finish) return std::vector<RuleStep>{};
  if (goal.lhs.order() > max_order || goal.rhs.order() > max_order) return std::nullopt;
  const Rewriter rw(rules, goal, max_order);
  SearchTree trees[2] = {SearchTree(start), SearchTree(finish)};
  std::size_t states = 2;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> meet;  // (forward, backward)
  while (!meet && trees[0].depth + trees[1].depth < max_depth) {
    const int side = trees[0].words.size() - trees[0].layer_begin <=
                             trees[1].words.size() - trees[1].layer_begin
                         ? 0
                         : 1;
    SearchTree& grow = trees[side];
    const SearchTree& other = trees[1 - side];
    const std::size_t begin = grow.layer_begin, end = grow.words.size();
    // an exhausted side means its whole component is known and misses the other
    if (begin == end) break;
    bool full = false;
    for (std::size_t i = begin; i < end && !meet && !full; ++i) {
      const Code cur = grow.words[i];
      rw.for_each(cur, [&](const Code& out, const Rewriter::Applied&) {
        if (grow.index.count(out)) return false;
        const auto hit = other.index.find(out);
        const auto id = std::uint32_t(grow.words.size());
        grow.index.emplace(out, id);
        grow.words.push_back(out);
        grow.parent.push_back(std::uint32_t(i));
        if (hit != other.index.end()) {
          meet = side == 0 ? std::pair{id, hit->second} : std::pair{hit->second, id};
          return true;
        }
        full = ++states >= max_states;
        return full;
      });
    }
    if (full) return std::nullopt;
    grow.layer_begin = end;
    ++grow.depth;
  }
  if (!meet) return std::nullopt;
  std::vector<RuleStep> steps;
  const auto fwd = trees[0].path_to(meet->first);
  const auto bwd = trees[1].path_to(meet->second);
  for (std::size_t i = 0; i + 1 < fwd.size(); ++i)
    steps.push_back(step_between(rw, fwd[i], fwd[i + 1]));
  for (std::size_t i = bwd.size() - 1; i > 0; --i) {
    RuleStep s = step_between(rw, bwd[i - 1], bwd[i]);
    s.step.direction = flip(s.step.direction);
    steps.push_back(std::move(s));
  }
  return steps;
}

// A lemma proved from the hypothesis, with its hypothesis-only chain.
struct Lemma {
  Law law;
  std::vector<RewriteStep> chain;
};

// Rewrites one lemma application (lemma.lhs -> lemma.rhs, or back) into
// hypothesis steps placed under `position`.
inline void expand_lemma(const Lemma& lemma, const RewriteStep& use,
                         std::vector<RewriteStep>& out) {
  std::vector<RewriteStep> local;
  for (const RewriteStep& s : lemma.chain) {
    RewriteStep t{use.position + s.position, s.direction, {}};
    for (const auto& [v, w] : s.substitution) {
      // variables private to the lemma chain are sent to x
      std::map<Var, Word> full = use.substitution;
      for (Var u : w.leaf_vars()) full.try_emplace(u, Word::var(0));
      t.substitution[v] = substitute(w, full);
    }
    local.push_back(std::move(t));
  }
  if (use.direction == Direction::Backward) {
    std::reverse(local.begin(), local.end());
    for (auto& s : local) s.direction = flip(s.direction);
  }
  out.insert(out.end(), local.begin(), local.end());
}

// Candidates are the laws of order <= lemma_order that hold in every magma of
// size <= 3 satisfying hyp; the others cannot follow from it.
inline std::vector<Lemma> find_lemmas(const Law& hyp, const ProverLimits& limits) {
  std::vector<Lemma> out;
  if (limits.lemma_order == 0) return out;
  std::vector<Law> candidates;
  for (const Law& cand : enumerate_laws(limits.lemma_order))
    if (cand.lhs != cand.rhs && !singleton_collapse(cand)) candidates.push_back(cand);
  const CompiledLaw h(hyp);
  for (std::size_t size = 2; size <= 3 && !candidates.empty(); ++size) {
    std::vector<CompiledLaw> compiled(candidates.begin(), candidates.end());
    std::vector<bool> alive(candidates.size(), true);
    for_each_table(size, [&](const FiniteMagma& m) {
      if (!h.satisfied_by(m)) return;
      for (std::size_t k = 0; k < compiled.size(); ++k)
        if (alive[k] && !compiled[k].satisfied_by(m)) alive[k] = false;
    });
    std::vector<Law> kept;
    for (std::size_t k = 0; k < candidates.size(); ++k)
      if (alive[k]) kept.push_back(candidates[k]);
    candidates = std::move(kept);
  }
  for (const Law& cand : candidates) {
    auto chain = search_chain({hyp}, cand, limits.lemma_term_order, limits.max_depth,
                              limits.lemma_states);
    if (!chain) continue;
    Lemma lem{cand, {}};
    for (auto& s : *chain) lem.chain.push_back(std::move(s.step));
    out.push_back(std::move(lem));
  }
  return out;
}

}  // namespace detail

/// Lemmas available to prove() for a given hypothesis; computing them once
/// per hypothesis saves work in batch runs.
struct LemmaSet {
  std::vector<detail::Lemma> lemmas;
};

inline LemmaSet lemmas_for(const Law& hyp, const ProverLimits& limits = {}) {
  return {detail::find_lemmas(hyp, limits)};
}

/// Searches for a rewrite proof of `goal` from `hyp`. nullopt means no proof
/// within the limits, not a refutation.
inline std::optional<ProofCert> prove(const Law& hyp, const Law& goal,
                                      const ProverLimits& limits = {},
                                      const LemmaSet* lemmas = nullptr) {
  using namespace detail;
  ProofCert cert{try_number(hyp), try_number(goal), hyp, goal, {}};
  if (auto direct = search_chain({hyp}, goal, limits.max_term_order, limits.max_depth,
                                 limits.max_states)) {
    for (auto& s : *direct) cert.steps.push_back(std::move(s.step));
    return cert;
  }
  if (limits.lemma_order == 0) return std::nullopt;
  LemmaSet own;
  if (!lemmas) {
    own = lemmas_for(hyp, limits);
    lemmas = &own;
  }
  if (lemmas->lemmas.empty()) return std::nullopt;
  std::vector<Law> rules{hyp};
  for (const auto& l : lemmas->lemmas) rules.push_back(l.law);
  auto chain =
      search_chain(rules, goal, limits.max_term_order, limits.max_depth, limits.max_states);
  if (!chain) return std::nullopt;
  for (auto& s : *chain) {
    if (s.rule == 0)
      cert.steps.push_back(std::move(s.step));
    else
      expand_lemma(lemmas->lemmas[s.rule - 1], s.step, cert.steps);
  }
  return cert;
}

/// prove over every ordered pair of distinct laws, in pair order.
inline std::vector<ProofCert> simple_rewrite_closure(const std::vector<Law>& laws,
                                                     const ProverLimits& limits = {}) {
  std::vector<ProofCert> out;
  for (std::size_t i = 0; i < laws.size(); ++i) {
    std::optional<LemmaSet> lemmas;
    for (std::size_t j = 0; j < laws.size(); ++j) {
      if (i == j) continue;
      ProverLimits direct = limits;
      direct.lemma_order = 0;
      auto c = prove(laws[i], laws[j], direct);
      if (!c && limits.lemma_order > 0) {
        if (!lemmas) lemmas = lemmas_for(laws[i], limits);
        c = prove(laws[i], laws[j], limits, &*lemmas);
      }
      if (c) out.push_back(std::move(*c));
    }
  }
  return out;
}

inline nlohmann::json to_json(const ProofCert& c) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : c.steps) {
    nlohmann::json sub = nlohmann::json::object();
    for (const auto& [v, w] : s.substitution) sub[std::to_string(int(v))] = render_word(w);
    steps.push_back({{"pos", s.position},
                     {"dir", s.direction == Direction::Forward ? "fwd" : "bwd"},
                     {"sub", sub}});
  }
  return {{"hyp", c.hypothesis},
          {"target", c.target},
          {"hyp_law", render_law(c.hyp)},
          {"target_law", render_law(c.goal)},
          {"steps", steps}};
}

}  // namespace magmalaws

#endif  // MAGMALAWS_PROVER_HPP
