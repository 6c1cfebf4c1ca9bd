#ifndef MAGMALAWS_CONSTRUCTIONS_HPP
#define MAGMALAWS_CONSTRUCTIONS_HPP

// Countermodel factories: twisted Cartesian powers and affine extensions
// G × Z/p whose extra term solves a linear cocycle equation.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "magmalaws/linear.hpp"
#include "magmalaws/magma.hpp"

namespace magmalaws {

/// k-th Cartesian power of `base` with (x ⋄ y)_i = x_{i+left_shift} ⋄ y_{i+right_shift},
/// indices mod k.
struct TwistSpec {
  FiniteMagma base;
  std::size_t power = 1;
  std::int64_t left_shift = 0;
  std::int64_t right_shift = 0;
};

/// Largest carrier twisted_power builds.
inline constexpr std::size_t kMaxTwistSize = 4096;

/// Tuple (x_0..x_{k-1}) is element sum x_i * n^i.
inline FiniteMagma twisted_power(const TwistSpec& spec) {
  const std::size_t n = spec.base.size(), k = spec.power;
  if (n == 0 || k == 0) throw std::invalid_argument("twisted_power needs a nonempty base and k >= 1");
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > kMaxTwistSize / n) throw std::invalid_argument("twisted power too large");
    total *= n;
  }
  const auto t = std::size_t(detail::mod(spec.left_shift, std::int64_t(k)));
  const auto u = std::size_t(detail::mod(spec.right_shift, std::int64_t(k)));
  std::vector<std::size_t> weight(k, 1);
  for (std::size_t i = 1; i < k; ++i) weight[i] = weight[i - 1] * n;
  const auto digit = [&](std::size_t x, std::size_t i) { return Elem(x / weight[i] % n); };
  return FiniteMagma::from_function(total, [&](Elem x, Elem y) {
    std::size_t z = 0;
    for (std::size_t i = 0; i < k; ++i)
      z += spec.base(digit(x, (i + t) % k), digit(y, (i + u) % k)) * weight[i];
    return Elem(z);
  });
}

/// f-table over G × G, row-major, entries mod p.
using CocycleTable = std::vector<std::int64_t>;

/// G × Z/p with (x,s) ⋄ (y,t) = (x ⋄ y, a s + b t + f(x,y)); pair (x,s) is
/// element x * p + s.
inline FiniteMagma affine_extension(const FiniteMagma& g, std::int64_t p, std::int64_t a,
                                    std::int64_t b, const CocycleTable& f) {
  const std::size_t n = g.size();
  if (p < 1) throw std::invalid_argument("modulus must be positive");
  if (f.size() != n * n) throw std::invalid_argument("cocycle table must have |G|^2 entries");
  return FiniteMagma::from_function(n * std::size_t(p), [&](Elem u, Elem v) {
    const Elem x = Elem(u / p), y = Elem(v / p);
    const std::int64_t s = u % p, t = v % p;
    return Elem(g(x, y) * p + detail::mod(a * s + b * t + f[x * n + y], p));
  });
}

/// Homogeneous system on f: one row per (assignment, equation), one column per
/// (g,h) cell of G, entries mod p.
struct CocycleSystem {
  FiniteMagma base;
  std::int64_t p = 2, a = 0, b = 0;
  Law law;
  std::vector<std::vector<std::int64_t>> rows;
};

namespace detail {

// Second coordinate of a word on the extension as a form in the f-unknowns;
// the contributions of the inputs' second coordinates cancel by precondition.
inline Elem cocycle_form(const FiniteMagma& g, const Word& w, const std::vector<Elem>& assign,
                         std::int64_t p, std::int64_t a, std::int64_t b,
                         std::vector<std::int64_t>& form) {
  if (w.is_var()) {
    std::fill(form.begin(), form.end(), 0);
    return assign[w.var_index()];
  }
  std::vector<std::int64_t> right(form.size());
  const Elem gl = cocycle_form(g, w.left(), assign, p, a, b, form);
  const Elem gr = cocycle_form(g, w.right(), assign, p, a, b, right);
  for (std::size_t i = 0; i < form.size(); ++i) form[i] = detail::mod(a * form[i] + b * right[i], p);
  std::int64_t& own = form[gl * g.size() + gr];
  own = detail::mod(own + 1, p);
  return g(gl, gr);
}

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline std::int64_t inverse_mod(std::int64_t x, std::int64_t p) {
  std::int64_t r = 1, e = p - 2;
  x = detail::mod(x, p);
  while (e > 0) {
    if (e & 1) r = r * x % p;
    x = x * x % p;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Throws std::invalid_argument unless p is prime, G satisfies the law and so
/// does the linear module s ⋄ t = a s + b t mod p.
inline CocycleSystem cocycle_system(const FiniteMagma& g, std::int64_t p, std::int64_t a,
                                    std::int64_t b, const Law& law) {
  if (!detail::is_prime(p)) throw std::invalid_argument("cocycle modulus must be prime");
  if (!satisfies(g, law)) throw std::invalid_argument("base magma does not satisfy the law");
  if (!satisfies(linear_magma(LinearModel{p, detail::mod(a, p), detail::mod(b, p), 0}), law))
    throw std::invalid_argument("linear module does not satisfy the law");
  CocycleSystem sys{g, p, detail::mod(a, p), detail::mod(b, p), law, {}};
  const std::size_t n = g.size(), cells = n * n;
  const int vars = law.var_bound();
  std::vector<Elem> assign(std::size_t(vars), 0);
  std::vector<std::int64_t> l(cells), r(cells);
  for (;;) {
    detail::cocycle_form(g, law.lhs, assign, p, sys.a, sys.b, l);
    detail::cocycle_form(g, law.rhs, assign, p, sys.a, sys.b, r);
    std::vector<std::int64_t> row(cells);
    bool zero = true;
    for (std::size_t i = 0; i < cells; ++i) zero &= (row[i] = detail::mod(l[i] - r[i], p)) == 0;
    if (!zero) sys.rows.push_back(std::move(row));
    int k = 0;
    while (k < vars && ++assign[k] == n) assign[k++] = 0;
    if (k == vars) break;
  }
  return sys;
}

struct CocycleSpace {
  std::int64_t p = 2;
  std::size_t dimension = 0;
  std::vector<CocycleTable> basis;
};

/// Null space of the system by Gauss-Jordan elimination mod p; one basis
/// vector per free column, free columns in increasing order.
inline CocycleSpace solve_cocycles(const CocycleSystem& sys) {
  const std::int64_t p = sys.p;
  const std::size_t cols = sys.base.size() * sys.base.size();
  auto m = sys.rows;
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t r = rank;
    while (r < m.size() && m[r][c] == 0) ++r;
    if (r == m.size()) continue;
    std::swap(m[r], m[rank]);
    const std::int64_t inv = detail::inverse_mod(m[rank][c], p);
    for (auto& v : m[rank]) v = v * inv % p;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][c] == 0) continue;
      const std::int64_t factor = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = detail::mod(m[i][j] - factor * m[rank][j], p);
    }
    pivot_col.push_back(c);
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  CocycleSpace out{p, cols - rank, {}};
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    CocycleTable f(cols, 0);
    f[free] = 1;
    for (std::size_t r = 0; r < rank; ++r) f[pivot_col[r]] = detail::mod(-m[r][free], p);
    out.basis.push_back(std::move(f));
  }
  return out;
}

/// Basis tables in the magma table layout ({"size", "table"} rows) under a
/// {"p": p} header.
inline nlohmann::json to_json(const CocycleSpace& s, std::size_t base_size) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& f : s.basis) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < base_size; ++i)
      rows.push_back(std::vector<std::int64_t>(f.begin() + i * base_size, f.begin() + (i + 1) * base_size));
    basis.push_back({{"size", base_size}, {"table", rows}});
  }
  return {{"p", s.p}, {"dimension", s.dimension}, {"basis", basis}};
}

}  // namespace magmalaws

#endif  // MAGMALAWS_CONSTRUCTIONS_HPP
