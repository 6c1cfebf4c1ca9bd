#ifndef MAGMALAWS_INVARIANTS_HPP
#define MAGMALAWS_INVARIANTS_HPP

// Syntactic refutations: matching invariants and root-rule canonizers. Both
// certify hyp ⊭ target over all magmas (not finite ones).

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "magmalaws/law.hpp"

namespace magmalaws {

struct InvariantKind {
  enum Tag { Multiplicity, MultiplicityMod, LeftmostVar, RightmostVar };
  Tag tag = Multiplicity;
  unsigned modulus = 0;  // MultiplicityMod only, >= 2

  static InvariantKind multiplicity() { return {Multiplicity, 0}; }
  static InvariantKind multiplicity_mod(unsigned n) {
    if (n < 2) throw std::invalid_argument("multiplicity modulus must be >= 2");
    return {MultiplicityMod, n};
  }
  static InvariantKind leftmost() { return {LeftmostVar, 0}; }
  static InvariantKind rightmost() { return {RightmostVar, 0}; }

  friend bool operator==(const InvariantKind&, const InvariantKind&) = default;
};

inline std::string to_string(const InvariantKind& k) {
  switch (k.tag) {
    case InvariantKind::Multiplicity: return "multiplicity";
    case InvariantKind::MultiplicityMod: return "multiplicity-mod-" + std::to_string(k.modulus);
    case InvariantKind::LeftmostVar: return "leftmost";
    case InvariantKind::RightmostVar: return "rightmost";
  }
  return "?";
}

/// "multiplicity", "multiplicity-mod-N", "leftmost", "rightmost".
inline InvariantKind parse_invariant_kind(std::string_view s) {
  if (s == "multiplicity") return InvariantKind::multiplicity();
  if (s == "leftmost") return InvariantKind::leftmost();
  if (s == "rightmost") return InvariantKind::rightmost();
  constexpr std::string_view mod = "multiplicity-mod-";
  if (s.starts_with(mod)) return InvariantKind::multiplicity_mod(unsigned(std::stoul(std::string(s.substr(mod.size())))));
  throw std::invalid_argument("unknown invariant kind '" + std::string(s) + "'");
}

/// Multiplicities (variable -> count, zero counts dropped) or a single variable.
using InvariantValue = std::variant<std::map<Var, unsigned>, Var>;

inline InvariantValue invariant_value(const Word& w, const InvariantKind& kind) {
  const auto leaves = w.leaf_vars();
  switch (kind.tag) {
    case InvariantKind::LeftmostVar: return leaves.front();
    case InvariantKind::RightmostVar: return leaves.back();
    default: break;
  }
  std::map<Var, unsigned> counts;
  for (Var v : leaves) ++counts[v];
  if (kind.tag == InvariantKind::MultiplicityMod)
    for (auto it = counts.begin(); it != counts.end();)
      if ((it->second %= kind.modulus) == 0)
        it = counts.erase(it);
      else
        ++it;
  return counts;
}

/// Multiplicities print as formal sums ("2x + y", "0" when empty).
inline std::string render_invariant(const InvariantValue& v) {
  if (const Var* x = std::get_if<Var>(&v)) return var_name(*x);
  const auto& counts = std::get<std::map<Var, unsigned>>(v);
  if (counts.empty()) return "0";
  std::string out;
  for (const auto& [x, c] : counts) {
    if (!out.empty()) out += " + ";
    if (c != 1) out += std::to_string(c);
    out += var_name(x);
  }
  return out;
}

/// Why hyp ⊭ target: the target's two sides differ under an invariant (or a
/// canonizer) that agrees on the hypothesis.
struct RefutationWitness {
  std::string kind;
  std::string lhs_value;
  std::string rhs_value;
};

inline nlohmann::json to_json(const RefutationWitness& w) {
  return {{"kind", w.kind}, {"lhs", w.lhs_value}, {"rhs", w.rhs_value}};
}

inline std::optional<RefutationWitness> invariant_refute(const Law& hyp, const Law& target,
                                                         const InvariantKind& kind) {
  if (invariant_value(hyp.lhs, kind) != invariant_value(hyp.rhs, kind)) return std::nullopt;
  const auto l = invariant_value(target.lhs, kind), r = invariant_value(target.rhs, kind);
  if (l == r) return std::nullopt;
  return RefutationWitness{to_string(kind), render_invariant(l), render_invariant(r)};
}

/// Every built-in kind, with multiplicities mod 2..max_modulus.
inline std::vector<InvariantKind> standard_invariants(unsigned max_modulus = 6) {
  std::vector<InvariantKind> out{InvariantKind::multiplicity(), InvariantKind::leftmost(),
                                 InvariantKind::rightmost()};
  for (unsigned n = 2; n <= max_modulus; ++n) out.push_back(InvariantKind::multiplicity_mod(n));
  return out;
}

// --- canonizers -------------------------------------------------------------

/// Rewrites instances of `pattern` at the root to the matching instance of
/// `result`, a sub-word of `pattern`.
struct RootRule {
  Word pattern;
  Word result;
};

namespace detail {

inline bool match_into(const Word& pattern, const Word& w, std::map<Var, Word>& bind) {
  if (pattern.is_var()) {
    auto [it, fresh] = bind.try_emplace(pattern.var_index(), w);
    return fresh || it->second == w;
  }
  return !w.is_var() && match_into(pattern.left(), w.left(), bind) &&
         match_into(pattern.right(), w.right(), bind);
}

// Robinson unification over a shared variable space, with occurs check.
class Unifier {
 public:
  bool unify(const Word& a, const Word& b) { return unify_resolved(resolve(a), resolve(b)); }

 private:
  Word resolve(const Word& w) const {
    if (w.is_var()) {
      auto it = bind_.find(w.var_index());
      return it == bind_.end() ? w : resolve(it->second);
    }
    return w;
  }

  bool occurs(Var v, const Word& w) const {
    const Word r = resolve(w);
    if (r.is_var()) return r.var_index() == v;
    return occurs(v, r.left()) || occurs(v, r.right());
  }

  bool unify_resolved(const Word& a, const Word& b) {
    if (a.is_var() && b.is_var() && a.var_index() == b.var_index()) return true;
    if (a.is_var()) return bind(a.var_index(), b);
    if (b.is_var()) return bind(b.var_index(), a);
    return unify(a.left(), b.left()) && unify(a.right(), b.right());
  }

  bool bind(Var v, const Word& w) {
    if (occurs(v, w)) return false;
    bind_.emplace(v, w);
    return true;
  }

  std::map<Var, Word> bind_;
};

inline bool is_subword(const Word& part, const Word& whole) {
  if (part == whole) return true;
  return !whole.is_var() && (is_subword(part, whole.left()) || is_subword(part, whole.right()));
}

// No instance of a strict non-variable sub-word of l is an instance of l.
inline bool non_overlapping(const Word& l) {
  const int shift = l.var_bound();
  const Word renamed = l.map_vars([&](Var v) { return Var(v + shift); });
  const auto offsets = l.positions();
  for (std::size_t off : offsets) {
    if (off == 0) continue;
    const Word s = l.at(off);
    if (s.is_var()) continue;
    Unifier u;
    if (u.unify(s, renamed)) return false;
  }
  return true;
}

inline std::optional<RootRule> orient(const Word& l, const Word& r) {
  if (l.is_var() || l == r || !is_subword(r, l) || !non_overlapping(l)) return std::nullopt;
  return RootRule{l, r};
}

}  // namespace detail

/// A weakly collapsing, non-overlapping root rule for the law, if either
/// orientation gives one; the larger pattern wins when both do.
inline std::optional<RootRule> build_canonizer(const Law& law) {
  auto a = detail::orient(law.lhs, law.rhs);
  auto b = detail::orient(law.rhs, law.lhs);
  if (a && b) return a->pattern.order() >= b->pattern.order() ? a : b;
  return a ? a : b;
}

/// Applies the rule once at the root.
inline Word apply_root_rule(const RootRule& rule, const Word& w) {
  std::map<Var, Word> bind;
  if (!detail::match_into(rule.pattern, w, bind)) return w;
  return substitute(rule.result, bind);
}

/// Bottom-up normal form: variables stay, products are rewritten at the root
/// after their factors.
inline Word canonize(const RootRule& rule, const Word& w) {
  if (w.is_var()) return w;
  return apply_root_rule(rule, Word::op(canonize(rule, w.left()), canonize(rule, w.right())));
}

inline std::optional<RefutationWitness> canonizer_refute_witness(const Law& hyp,
                                                                 const Law& target) {
  const auto rule = build_canonizer(hyp);
  if (!rule) return std::nullopt;
  const Word l = canonize(*rule, target.lhs), r = canonize(*rule, target.rhs);
  if (l == r) return std::nullopt;
  return RefutationWitness{"canonizer", render_word(l), render_word(r)};
}

inline bool canonizer_refute(const Law& hyp, const Law& target) {
  return canonizer_refute_witness(hyp, target).has_value();
}

}  // namespace magmalaws

#endif  // MAGMALAWS_INVARIANTS_HPP
