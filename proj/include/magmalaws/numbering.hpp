#ifndef MAGMALAWS_NUMBERING_HPP
#define MAGMALAWS_NUMBERING_HPP

// Global numbering of equational laws. Laws of one total order are grouped by
// (lhs shape, rhs shape); within a shape pair the variable string is a
// restricted growth string (RGS), i.e. variables are labelled by first
// occurrence, and laws are ordered by that string.

#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "magmalaws/law.hpp"

namespace magmalaws {

using LawNumber = std::uint64_t;

/// Largest total order for which law_number / number_to_law are supported.
inline constexpr std::size_t kMaxRankedOrder = 8;

namespace detail {

inline constexpr std::size_t kShapeCacheOrder = 10;

/// Shapes (single-indeterminate words) of each order, in increasing shape
/// order.
inline const std::vector<std::vector<Word>>& shape_table() {
  static const std::vector<std::vector<Word>> table = [] {
    std::vector<std::vector<Word>> t(kShapeCacheOrder + 1);
    t[0].push_back(Word::var(0));
    for (std::size_t k = 1; k <= kShapeCacheOrder; ++k)
      for (std::size_t i = 0; i < k; ++i)
        for (const Word& l : t[i])
          for (const Word& r : t[k - 1 - i]) t[k].push_back(Word::op(l, r));
    return t;
  }();
  return table;
}

inline const std::vector<Word>& shapes_of_order(std::size_t k) {
  if (k > kShapeCacheOrder) throw std::out_of_range("shape order too large");
  return shape_table()[k];
}

using Rgs = std::vector<Var>;

/// Number of RGS tails of length `rest` when `blocks` labels are in use.
inline std::uint64_t rgs_tails(std::size_t rest, std::size_t blocks) {
  // T(0,k) = 1; T(r,k) = k T(r-1,k) + T(r-1,k+1)
  std::vector<std::uint64_t> row(rest + blocks + 2, 1);
  for (std::size_t r = 1; r <= rest; ++r)
    for (std::size_t k = 0; k + r <= rest + blocks; ++k)
      row[k] = k * row[k] + row[k + 1];
  return row[blocks];
}

inline std::uint64_t bell(std::size_t m) { return rgs_tails(m, 0); }

/// All RGS of length m, lexicographic.
inline std::vector<Rgs> all_rgs(std::size_t m) {
  std::vector<Rgs> out;
  Rgs cur(m);
  auto rec = [&](auto&& self, std::size_t i, int blocks) -> void {
    if (i == m) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c <= blocks && c < 255; ++c) {
      cur[i] = Var(c);
      self(self, i + 1, std::max(blocks, c + 1));
    }
  };
  rec(rec, 0, 0);
  return out;
}

/// RGS of (rhs half) ++ (lhs half), relabelled by first occurrence.
inline Rgs swapped_rgs(const Rgs& s, std::size_t lhs_leaves) {
  Rgs t(s.begin() + lhs_leaves, s.end());
  t.insert(t.end(), s.begin(), s.begin() + lhs_leaves);
  std::array<int, 256> map;
  map.fill(-1);
  int next = 0;
  for (auto& v : t) {
    if (map[v] < 0) map[v] = next++;
    v = Var(map[v]);
  }
  return t;
}

/// Variable strings admissible when both sides share a shape with m/2 leaves:
/// not larger than their swapped orientation, and not reflexive (except the
/// trivial law x = x).
inline const std::vector<Rgs>& same_shape_rgs(std::size_t m) {
  static std::vector<std::vector<Rgs>> cache(2 * (kMaxRankedOrder + 2) + 1);
  static std::vector<bool> ready(cache.size(), false);
  static std::mutex mu;
  if (m >= cache.size()) throw std::out_of_range("law order too large");
  std::lock_guard lock(mu);
  if (!ready[m]) {
    const std::size_t h = m / 2;
    std::vector<Rgs> out;
    for (Rgs& s : all_rgs(m)) {
      const bool reflexive = std::equal(s.begin(), s.begin() + h, s.begin() + h);
      if (reflexive && m != 2) continue;
      if (swapped_rgs(s, h) < s) continue;
      out.push_back(std::move(s));
    }
    cache[m] = std::move(out);
    ready[m] = true;
  }
  return cache[m];
}

struct ShapePair {
  const Word* lhs;
  const Word* rhs;
};

/// Shape pairs (lhs shape <= rhs shape) of total order n, in law order.
template <class F>
void for_each_shape_pair(std::size_t n, F&& f) {
  for (std::size_t i = 0; 2 * i <= n; ++i)
    for (const Word& l : shapes_of_order(i))
      for (const Word& r : shapes_of_order(n - i)) {
        if (i == n - i && compare_shapes(l, r) > 0) continue;
        if (!f(ShapePair{&l, &r})) return;
      }
}

inline std::uint64_t pair_count(const ShapePair& p) {
  const std::size_t m = p.lhs->leaves() + p.rhs->leaves();
  if (*p.lhs == *p.rhs) return same_shape_rgs(m).size();
  return bell(m);
}

inline Law fill_shapes(const ShapePair& p, const Rgs& s) {
  std::size_t i = 0;
  auto next = [&](Var) { return s[i++]; };
  Law law;
  law.lhs = p.lhs->map_vars(next);
  law.rhs = p.rhs->map_vars(next);
  return law;
}

inline std::uint64_t rank_rgs(const Rgs& s) {
  std::uint64_t rank = 0;
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t c = 0; c < s[i]; ++c)
      rank += rgs_tails(s.size() - i - 1, std::max(blocks, c + 1));
    blocks = std::max<std::size_t>(blocks, s[i] + 1);
  }
  return rank;
}

inline Rgs unrank_rgs(std::size_t m, std::uint64_t idx) {
  Rgs s(m);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c <= blocks; ++c) {
      const std::uint64_t cnt = rgs_tails(m - i - 1, std::max(blocks, c + 1));
      if (idx < cnt) {
        s[i] = Var(c);
        blocks = std::max(blocks, c + 1);
        break;
      }
      idx -= cnt;
    }
  return s;
}

inline std::uint64_t count_by_shapes(std::size_t n) {
  std::uint64_t total = 0;
  for_each_shape_pair(n, [&](const ShapePair& p) {
    total += pair_count(p);
    return true;
  });
  return total;
}

}  // namespace detail

/// Normalized laws of total order exactly `order`, increasing.
inline std::vector<Law> enumerate_laws_of_order(std::size_t order) {
  std::vector<Law> out;
  detail::for_each_shape_pair(order, [&](const detail::ShapePair& p) {
    const std::size_t m = p.lhs->leaves() + p.rhs->leaves();
    if (*p.lhs == *p.rhs) {
      for (const auto& s : detail::same_shape_rgs(m))
        out.push_back(detail::fill_shapes(p, s));
    } else {
      for (const auto& s : detail::all_rgs(m))
        out.push_back(detail::fill_shapes(p, s));
    }
    return true;
  });
  return out;
}

/// All normalized laws of total order <= max_order; element i is law E(i+1).
inline std::vector<Law> enumerate_laws(std::size_t max_order) {
  std::vector<Law> out;
  for (std::size_t n = 0; n <= max_order; ++n) {
    auto slice = enumerate_laws_of_order(n);
    out.insert(out.end(), std::make_move_iterator(slice.begin()),
               std::make_move_iterator(slice.end()));
  }
  return out;
}

/// Global number of a law (normalized first). Supports total order up to
/// kMaxRankedOrder.
inline LawNumber law_number(const Law& law) {
  const Law n = normalize(law);
  const std::size_t order = n.order();
  if (order > kMaxRankedOrder)
    throw std::out_of_range("law order exceeds numbering support");
  if (n.reflexive() && order > 0)
    throw std::invalid_argument("reflexive laws other than x = x are unnumbered");
  LawNumber number = 1;
  for (std::size_t k = 0; k < order; ++k) number += detail::count_by_shapes(k);
  const Word ls = shape_of(n.lhs), rs = shape_of(n.rhs);
  detail::for_each_shape_pair(order, [&](const detail::ShapePair& p) {
    if (*p.lhs == ls && *p.rhs == rs) return false;
    number += detail::pair_count(p);
    return true;
  });
  const detail::Rgs s = n.var_string();
  if (ls == rs) {
    const auto& valid = detail::same_shape_rgs(s.size());
    number += std::lower_bound(valid.begin(), valid.end(), s) - valid.begin();
  } else {
    number += detail::rank_rgs(s);
  }
  return number;
}

/// Inverse of law_number over laws of order <= max_order.
inline Law number_to_law(LawNumber number, std::size_t max_order) {
  if (number == 0) throw std::out_of_range("law numbers start at 1");
  if (max_order > kMaxRankedOrder)
    throw std::out_of_range("law order exceeds numbering support");
  std::uint64_t idx = number - 1;
  for (std::size_t k = 0; k <= max_order; ++k) {
    const std::uint64_t cnt = detail::count_by_shapes(k);
    if (idx >= cnt) {
      idx -= cnt;
      continue;
    }
    Law found;
    detail::for_each_shape_pair(k, [&](const detail::ShapePair& p) {
      const std::uint64_t pc = detail::pair_count(p);
      if (idx >= pc) {
        idx -= pc;
        return true;
      }
      const std::size_t m = p.lhs->leaves() + p.rhs->leaves();
      if (*p.lhs == *p.rhs)
        found = detail::fill_shapes(p, detail::same_shape_rgs(m)[idx]);
      else
        found = detail::fill_shapes(p, detail::unrank_rgs(m, idx));
      return false;
    });
    return found;
  }
  throw std::out_of_range("law number " + std::to_string(number) +
                          " exceeds the laws of order <= " +
                          std::to_string(max_order));
}

/// Catalan number C_n.
inline unsigned __int128 catalan(std::size_t n) {
  unsigned __int128 c = 1;
  for (std::size_t k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

/// Bell number B_n.
inline unsigned __int128 bell_number(std::size_t n) {
  std::vector<unsigned __int128> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<unsigned __int128> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

/// Number of partitions of {1..n} up to the reflection i -> n+1-i.
inline unsigned __int128 reflection_partitions(std::size_t n) {
  // Partitions fixed by the reflection: group its orbits; a group of g
  // two-element orbits is one invariant block or a swapped pair of blocks
  // (2^(g-1) ways); the middle point, if any, only joins invariant blocks.
  const std::size_t pairs = n / 2;
  auto binom = [](std::size_t a, std::size_t b) {
    unsigned __int128 r = 1;
    for (std::size_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  std::vector<unsigned __int128> fixed(pairs + 1, 0);
  fixed[0] = 1;
  for (std::size_t j = 1; j <= pairs; ++j)
    for (std::size_t g = 1; g <= j; ++g)
      fixed[j] += binom(j - 1, g - 1) *
                  ((unsigned __int128)1 + ((unsigned __int128)1 << (g - 1))) *
                  fixed[j - g];
  unsigned __int128 symmetric = fixed[pairs];
  if (n % 2 == 1) {
    symmetric = 0;
    for (std::size_t t = 0; t <= pairs; ++t)
      symmetric += binom(pairs, t) * fixed[pairs - t];
  }
  return (bell_number(n) + symmetric) / 2;
}

/// Closed-form number of numbered laws of total order exactly `order`.
inline std::uint64_t count_laws(std::size_t order) {
  if (order > 15) throw std::overflow_error("law count exceeds 64 bits");
  const std::size_t n = order;
  unsigned __int128 c;
  if (n == 0) {
    c = 2;
  } else if (n % 2 == 1) {
    c = catalan(n + 1) * bell_number(n + 2) / 2;
  } else {
    const auto half = catalan(n / 2);
    c = (catalan(n + 1) * bell_number(n + 2) +
         half * (2 * reflection_partitions(n + 2) - bell_number(n + 2))) / 2 -
        half * bell_number(n / 2 + 1);
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace magmalaws

#endif  // MAGMALAWS_NUMBERING_HPP
