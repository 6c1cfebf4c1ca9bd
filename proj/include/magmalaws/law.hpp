#ifndef MAGMALAWS_LAW_HPP
#define MAGMALAWS_LAW_HPP

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "magmalaws/word.hpp"

namespace magmalaws {

/// An equational law lhs ≃ rhs. Values are not normalized unless produced by
/// normalize() or the numbering functions.
struct Law {
  Word lhs;
  Word rhs;

  std::size_t order() const noexcept { return lhs.order() + rhs.order(); }

  int var_bound() const noexcept {
    return std::max(lhs.var_bound(), rhs.var_bound());
  }

  /// Leaf variables of lhs followed by those of rhs.
  std::vector<Var> var_string() const {
    auto v = lhs.leaf_vars();
    auto r = rhs.leaf_vars();
    v.insert(v.end(), r.begin(), r.end());
    return v;
  }

  std::vector<Var> distinct_vars() const {
    std::array<bool, 256> seen{};
    std::vector<Var> out;
    for (Var v : var_string())
      if (!seen[v]) {
        seen[v] = true;
        out.push_back(v);
      }
    return out;
  }

  bool reflexive() const { return lhs == rhs; }

  Law swapped() const { return {rhs, lhs}; }

  friend bool operator==(const Law&, const Law&) = default;
};

struct LawHash {
  std::size_t operator()(const Law& l) const noexcept {
    WordHash h;
    return h(l.lhs) * 1000003u ^ h(l.rhs);
  }
};

inline std::string render_law(const Law& law) {
  return render_word(law.lhs) + " = " + render_word(law.rhs);
}

/// Parses `word = word`. Accepts `*`, `⋄` or `◇` for the operation and
/// variables x y z w u v r s t (at most nine distinct).
inline Law parse_law(std::string_view text) {
  detail::WordParser p(text);
  Law law;
  law.lhs = p.parse_top();
  if (!p.try_consume("=") && !p.try_consume("≃"))
    throw ParseError("expected '='", p.pos());
  law.rhs = p.parse_top();
  if (!p.done()) throw ParseError("trailing input", p.pos());
  return law;
}

/// Relabels variables in order of first occurrence (lhs then rhs, left to
/// right), giving the lexicographically least variable string for this
/// orientation.
inline Law relabel_first_occurrence(const Law& law) {
  std::array<int, 256> map;
  map.fill(-1);
  int next = 0;
  auto f = [&](Var v) {
    if (map[v] < 0) map[v] = next++;
    return Var(map[v]);
  };
  Law out;
  out.lhs = law.lhs.map_vars(f);
  out.rhs = law.rhs.map_vars(f);
  return out;
}

/// Total order on laws used by the global numbering: total order, then the
/// lhs shape, then the rhs shape, then the variable string (smaller string,
/// smaller law).
inline std::strong_ordering compare_laws(const Law& a, const Law& b) {
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  if (auto c = compare_shapes(a.lhs, b.lhs); c != 0) return c;
  if (auto c = compare_shapes(a.rhs, b.rhs); c != 0) return c;
  return a.var_string() <=> b.var_string();
}

/// Least member of the definitional-equivalence class (relabeling and side
/// swap).
inline Law normalize(const Law& law) {
  Law a = relabel_first_occurrence(law);
  Law b = relabel_first_occurrence(law.swapped());
  return compare_laws(b, a) < 0 ? b : a;
}

inline bool is_normalized(const Law& law) { return normalize(law) == law; }

/// The law satisfied by opposite magmas: every product reversed, then
/// renormalized.
inline Law dual(const Law& law) {
  return normalize(Law{law.lhs.mirrored(), law.rhs.mirrored()});
}

}  // namespace magmalaws

#endif  // MAGMALAWS_LAW_HPP
