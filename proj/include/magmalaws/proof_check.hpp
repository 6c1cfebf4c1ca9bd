#ifndef MAGMALAWS_PROOF_CHECK_HPP
#define MAGMALAWS_PROOF_CHECK_HPP

// Replays rewrite certificates on an independent tree representation.

#include <memory>
#include <set>
#include <string>

#include "json.hpp"
#include "magmalaws/prover.hpp"

namespace magmalaws {

enum class CheckStatus { Valid, Mismatch, Malformed };

struct CheckResult {
  CheckStatus status = CheckStatus::Valid;
  std::size_t step = 0;  // index of the failing step (steps.size() for the final comparison)
  std::string detail;

  bool valid() const { return status == CheckStatus::Valid; }
};

namespace check {

struct Tree;
using TreePtr = std::shared_ptr<const Tree>;

struct Tree {
  int var = -1;
  TreePtr l, r;
};

inline TreePtr leaf(int v) { return std::make_shared<Tree>(Tree{v, nullptr, nullptr}); }
inline TreePtr node(TreePtr a, TreePtr b) {
  return std::make_shared<Tree>(Tree{-1, std::move(a), std::move(b)});
}

inline TreePtr from_word(const Word& w) {
  if (w.is_var()) return leaf(w.var_index());
  return node(from_word(w.left()), from_word(w.right()));
}

inline bool same(const TreePtr& a, const TreePtr& b) {
  if (a->var >= 0 || b->var >= 0) return a->var == b->var;
  return same(a->l, b->l) && same(a->r, b->r);
}

inline void vars_of(const TreePtr& t, std::set<int>& out) {
  if (t->var >= 0) {
    out.insert(t->var);
    return;
  }
  vars_of(t->l, out);
  vars_of(t->r, out);
}

inline TreePtr instantiate(const TreePtr& t, const std::map<int, TreePtr>& sub) {
  if (t->var >= 0) return sub.at(t->var);
  return node(instantiate(t->l, sub), instantiate(t->r, sub));
}

// Subterm at `path`, or nullptr if the path leaves the tree.
inline TreePtr at(const TreePtr& t, std::string_view path) {
  TreePtr cur = t;
  for (char c : path) {
    if (cur->var >= 0) return nullptr;
    if (c == 'L')
      cur = cur->l;
    else if (c == 'R')
      cur = cur->r;
    else
      return nullptr;
  }
  return cur;
}

inline TreePtr replace(const TreePtr& t, std::string_view path, const TreePtr& by) {
  if (path.empty()) return by;
  if (path[0] == 'L') return node(replace(t->l, path.substr(1), by), t->r);
  return node(t->l, replace(t->r, path.substr(1), by));
}

}  // namespace check

/// Replays the certificate from goal.lhs and compares with goal.rhs.
inline CheckResult check_proof(const ProofCert& cert) {
  using namespace check;
  const TreePtr hl = from_word(cert.hyp.lhs), hr = from_word(cert.hyp.rhs);
  std::set<int> hyp_vars;
  vars_of(hl, hyp_vars);
  vars_of(hr, hyp_vars);
  TreePtr cur = from_word(cert.goal.lhs);
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const RewriteStep& s = cert.steps[i];
    const TreePtr here = at(cur, s.position);
    if (!here) return {CheckStatus::Malformed, i, "position '" + s.position + "' is not in the term"};
    std::map<int, TreePtr> sub;
    for (const auto& [v, w] : s.substitution) {
      if (!hyp_vars.count(v))
        return {CheckStatus::Malformed, i, "substitution names a variable the hypothesis lacks"};
      sub[v] = from_word(w);
    }
    for (int v : hyp_vars)
      if (!sub.count(v))
        return {CheckStatus::Malformed, i, "substitution misses variable " + var_name(Var(v))};
    const bool fwd = s.direction == Direction::Forward;
    const TreePtr from = instantiate(fwd ? hl : hr, sub);
    if (!same(from, here))
      return {CheckStatus::Mismatch, i, "hypothesis side does not match the subterm"};
    cur = replace(cur, s.position, instantiate(fwd ? hr : hl, sub));
  }
  if (!same(cur, from_word(cert.goal.rhs)))
    return {CheckStatus::Mismatch, cert.steps.size(), "final term differs from the target rhs"};
  return {};
}

/// Reads the certificate JSON format. Laws come from "hyp_law"/"target_law"
/// when present, otherwise from the law numbers.
inline ProofCert proof_from_json(const nlohmann::json& j) {
  ProofCert c;
  c.hypothesis = j.at("hyp").get<LawNumber>();
  c.target = j.at("target").get<LawNumber>();
  c.hyp = j.contains("hyp_law") ? parse_law(j.at("hyp_law").get<std::string>())
                                : number_to_law(c.hypothesis, kMaxRankedOrder);
  c.goal = j.contains("target_law") ? parse_law(j.at("target_law").get<std::string>())
                                    : number_to_law(c.target, kMaxRankedOrder);
  for (const auto& s : j.at("steps")) {
    RewriteStep step;
    step.position = s.at("pos").get<std::string>();
    const auto dir = s.at("dir").get<std::string>();
    if (dir != "fwd" && dir != "bwd") throw std::invalid_argument("dir must be fwd or bwd");
    step.direction = dir == "fwd" ? Direction::Forward : Direction::Backward;
    for (const auto& [k, v] : s.at("sub").items()) {
      const int idx = std::stoi(k);
      if (idx < 0 || idx > kMaxVar) throw std::invalid_argument("bad substitution variable");
      step.substitution[Var(idx)] = parse_word(v.get<std::string>());
    }
    c.steps.push_back(std::move(step));
  }
  return c;
}

/// JSON entry point: anything that fails to parse is Malformed.
inline CheckResult check_proof_json(const nlohmann::json& j) {
  ProofCert c;
  try {
    c = proof_from_json(j);
  } catch (const std::exception& e) {
    return {CheckStatus::Malformed, 0, e.what()};
  }
  return check_proof(c);
}

}  // namespace magmalaws

#endif  // MAGMALAWS_PROOF_CHECK_HPP
