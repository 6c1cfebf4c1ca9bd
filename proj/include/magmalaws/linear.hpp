#ifndef MAGMALAWS_LINEAR_HPP
#define MAGMALAWS_LINEAR_HPP

// Linear, affine, quadratic and translation-invariant magmas on Z/n, and the
// coefficient polynomials that decide linear satisfaction symbolically.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "magmalaws/magma.hpp"

namespace magmalaws {

/// x ⋄ y = a x + b y + c (mod n). c = 0 for a linear model.
struct LinearModel {
  std::int64_t n = 1;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

namespace detail {
inline std::int64_t mod(std::int64_t v, std::int64_t n) {
  const std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}
}  // namespace detail

inline FiniteMagma linear_magma(const LinearModel& m) {
  if (m.n < 1) throw std::invalid_argument("modulus must be positive");
  return FiniteMagma::from_function(std::size_t(m.n), [&](Elem x, Elem y) {
    return detail::mod(m.a * x + m.b * y + m.c, m.n);
  });
}

/// x ⋄ y = a x² + b x y + c y² + d x + e y + f (mod n).
inline FiniteMagma quadratic_magma(std::int64_t n, std::int64_t a, std::int64_t b,
                                   std::int64_t c, std::int64_t d, std::int64_t e,
                                   std::int64_t f) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
  return FiniteMagma::from_function(std::size_t(n), [&](Elem xe, Elem ye) {
    const std::int64_t x = xe, y = ye;
    return detail::mod(a * x * x + b * x * y + c * y * y + d * x + e * y + f, n);
  });
}

/// Abelian translation-invariant model on Z/n: x ⋄ y = x + f(y - x).
inline FiniteMagma translation_magma(std::int64_t n, std::span<const std::int64_t> f) {
  if (n < 1 || std::int64_t(f.size()) != n)
    throw std::invalid_argument("translation table must have n entries");
  return FiniteMagma::from_function(std::size_t(n), [&](Elem x, Elem y) {
    return detail::mod(std::int64_t(x) + f[detail::mod(std::int64_t(y) - x, n)], n);
  });
}

/// Integer polynomial in commuting a, b: (deg_a, deg_b) -> coefficient.
using ABPolynomial = std::map<std::pair<int, int>, std::int64_t>;

/// For each variable index, the polynomial P with w = Σ P_i(a,b) x_i in every
/// linear magma x ⋄ y = a x + b y.
struct LinearCoefficients {
  std::vector<ABPolynomial> per_var;

  const ABPolynomial& operator[](std::size_t i) const {
    static const ABPolynomial zero;
    return i < per_var.size() ? per_var[i] : zero;
  }
};

namespace detail {

inline void add_scaled(ABPolynomial& into, const ABPolynomial& p, int da, int db) {
  for (const auto& [mono, coeff] : p) {
    auto key = std::make_pair(mono.first + da, mono.second + db);
    if ((into[key] += coeff) == 0) into.erase(key);
  }
}

inline __int128 eval_poly(const ABPolynomial& p, std::int64_t a, std::int64_t b) {
  __int128 total = 0;
  for (const auto& [mono, coeff] : p) {
    __int128 term = coeff;
    for (int i = 0; i < mono.first; ++i) term *= a;
    for (int i = 0; i < mono.second; ++i) term *= b;
    total += term;
  }
  return total;
}

// Affine constant: K(leaf) = 0, K(l ⋄ r) = a K(l) + b K(r) + 1, so that
// w = Σ P_i x_i + K c in x ⋄ y = a x + b y + c.
inline ABPolynomial affine_constant(const Word& w) {
  if (w.is_var()) return {};
  ABPolynomial k;
  add_scaled(k, affine_constant(w.left()), 1, 0);
  add_scaled(k, affine_constant(w.right()), 0, 1);
  if ((k[{0, 0}] += 1) == 0) k.erase({0, 0});
  return k;
}

}  // namespace detail

inline LinearCoefficients linear_coeffs(const Word& w) {
  LinearCoefficients out;
  out.per_var.resize(std::size_t(std::max(1, w.var_bound())));
  if (w.is_var()) {
    out.per_var[w.var_index()][{0, 0}] = 1;
    return out;
  }
  const auto l = linear_coeffs(w.left());
  const auto r = linear_coeffs(w.right());
  for (std::size_t i = 0; i < l.per_var.size(); ++i)
    detail::add_scaled(out.per_var[i], l.per_var[i], 1, 0);
  for (std::size_t i = 0; i < r.per_var.size(); ++i)
    detail::add_scaled(out.per_var[i], r.per_var[i], 0, 1);
  return out;
}

/// Whether x ⋄ y = a x + b y satisfies the law on Z/n for every n >= 1, i.e.
/// the coefficient polynomials agree as integers at (a, b).
inline bool linear_satisfies_all_n(const Law& law, std::int64_t a, std::int64_t b) {
  const auto l = linear_coeffs(law.lhs), r = linear_coeffs(law.rhs);
  const std::size_t vars = std::size_t(std::max(1, law.var_bound()));
  for (std::size_t i = 0; i < vars; ++i)
    if (detail::eval_poly(l[i], a, b) != detail::eval_poly(r[i], a, b)) return false;
  return true;
}

/// Symbolic satisfaction test for a single affine model on Z/n.
class LinearLawTest {
 public:
  explicit LinearLawTest(const Law& law)
      : lhs_(linear_coeffs(law.lhs)),
        rhs_(linear_coeffs(law.rhs)),
        klhs_(detail::affine_constant(law.lhs)),
        krhs_(detail::affine_constant(law.rhs)),
        vars_(std::size_t(std::max(1, law.var_bound()))) {}

  bool holds(const LinearModel& m) const {
    for (std::size_t i = 0; i < vars_; ++i)
      if (!same(lhs_[i], rhs_[i], m)) return false;
    if (m.c % m.n == 0) return true;
    const __int128 d = detail::eval_poly(klhs_, m.a, m.b) - detail::eval_poly(krhs_, m.a, m.b);
    return (d * m.c) % m.n == 0;
  }

 private:
  static bool same(const ABPolynomial& p, const ABPolynomial& q, const LinearModel& m) {
    return (detail::eval_poly(p, m.a, m.b) - detail::eval_poly(q, m.a, m.b)) % m.n == 0;
  }

  LinearCoefficients lhs_, rhs_;
  ABPolynomial klhs_, krhs_;
  std::size_t vars_;
};

struct SweepHit {
  LinearModel model;
  FiniteMagma magma;
};

/// First model (ascending modulus, then a, then b, then c) that satisfies
/// `hyp` and violates `target`. Moduli are scanned in ascending order.
inline std::optional<SweepHit> linear_sweep(const Law& hyp, const Law& target,
                                            std::vector<std::int64_t> moduli,
                                            bool affine) {
  if (moduli.empty()) throw std::invalid_argument("linear_sweep needs moduli");
  std::sort(moduli.begin(), moduli.end());
  moduli.erase(std::unique(moduli.begin(), moduli.end()), moduli.end());
  const LinearLawTest h(hyp), t(target);
  for (std::int64_t n : moduli) {
    if (n < 1) throw std::invalid_argument("moduli must be positive");
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = 0; b < n; ++b)
        for (std::int64_t c = 0; c < (affine ? n : 1); ++c) {
          const LinearModel m{n, a, b, c};
          if (!h.holds(m) || t.holds(m)) continue;
          FiniteMagma magma = linear_magma(m);
          if (satisfies(magma, hyp) && !satisfies(magma, target))
            return SweepHit{m, std::move(magma)};
        }
  }
  return std::nullopt;
}

}  // namespace magmalaws

#endif  // MAGMALAWS_LINEAR_HPP
