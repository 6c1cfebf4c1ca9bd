#ifndef MAGMALAWS_MAGMA_HPP
#define MAGMALAWS_MAGMA_HPP

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "magmalaws/law.hpp"

namespace magmalaws {

using Elem = std::uint32_t;

/// A finite magma on {0, ..., n-1}. The table is row-major: entry x*n + y
/// holds x ⋄ y.
class FiniteMagma {
 public:
  FiniteMagma() : FiniteMagma(1, {0}) {}

  FiniteMagma(std::size_t n, std::vector<Elem> table)
      : n_(n), table_(std::move(table)) {
    if (n_ == 0) throw std::invalid_argument("magma size must be positive");
    if (table_.size() != n_ * n_)
      throw std::invalid_argument("table must have size*size entries");
    for (Elem v : table_)
      if (v >= n_) throw std::invalid_argument("table entry out of range");
  }

  template <class F>
  static FiniteMagma from_function(std::size_t n, F&& f) {
    std::vector<Elem> t(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) t[x * n + y] = Elem(f(Elem(x), Elem(y)));
    return FiniteMagma(n, std::move(t));
  }

  std::size_t size() const noexcept { return n_; }
  Elem operator()(Elem x, Elem y) const noexcept { return table_[x * n_ + y]; }
  const std::vector<Elem>& table() const noexcept { return table_; }

  friend bool operator==(const FiniteMagma&, const FiniteMagma&) = default;
  friend auto operator<=>(const FiniteMagma& a, const FiniteMagma& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.table_ <=> b.table_;
  }

 private:
  std::size_t n_;
  std::vector<Elem> table_;
};

/// A word flattened to postfix for repeated evaluation.
class CompiledWord {
 public:
  explicit CompiledWord(const Word& w) {
    auto code = w.code();
    // preorder -> postfix by walking right to left with a stack of operands
    std::vector<std::vector<std::int16_t>> stack;
    for (std::size_t i = code.size(); i-- > 0;) {
      if (code[i] != kOp) {
        stack.push_back({std::int16_t(code[i])});
      } else {
        auto l = std::move(stack.back());
        stack.pop_back();
        auto r = std::move(stack.back());
        stack.pop_back();
        l.insert(l.end(), r.begin(), r.end());
        l.push_back(-1);
        stack.push_back(std::move(l));
      }
    }
    prog_ = std::move(stack.back());
    depth_ = 0;
    int d = 0;
    for (auto op : prog_) {
      d += op < 0 ? -1 : 1;
      depth_ = std::max(depth_, d);
    }
  }

  Elem eval(const FiniteMagma& m, std::span<const Elem> assignment) const {
    Elem stack[64] = {};
    std::vector<Elem> heap;
    Elem* s = stack;
    if (depth_ > 64) {
      heap.resize(depth_);
      s = heap.data();
    }
    int top = 0;
    const std::size_t n = m.size();
    const Elem* t = m.table().data();
    for (auto op : prog_) {
      if (op >= 0) {
        s[top++] = assignment[op];
      } else {
        --top;
        s[top - 1] = t[s[top - 1] * n + s[top]];
      }
    }
    return s[0];
  }

 private:
  std::vector<std::int16_t> prog_;
  int depth_;
};

inline Elem evaluate(const FiniteMagma& m, const Word& w,
                     std::span<const Elem> assignment) {
  return CompiledWord(w).eval(m, assignment);
}

/// A law compiled for repeated satisfaction checks.
class CompiledLaw {
 public:
  explicit CompiledLaw(const Law& law)
      : lhs_(law.lhs), rhs_(law.rhs), vars_(std::max(1, law.var_bound())) {}

  /// First assignment (odometer order, variable 0 fastest) violating the
  /// law, if any.
  std::optional<std::vector<Elem>> violation(const FiniteMagma& m) const {
    std::vector<Elem> a(vars_, 0);
    const Elem n = Elem(m.size());
    for (;;) {
      if (lhs_.eval(m, a) != rhs_.eval(m, a)) return a;
      std::size_t i = 0;
      while (i < a.size() && ++a[i] == n) a[i++] = 0;
      if (i == a.size()) return std::nullopt;
    }
  }

  bool satisfied_by(const FiniteMagma& m) const { return !violation(m); }

 private:
  CompiledWord lhs_, rhs_;
  int vars_;
};

/// True iff every assignment of the law's variables equates both sides.
inline bool satisfies(const FiniteMagma& m, const Law& law) {
  return CompiledLaw(law).satisfied_by(m);
}

inline std::optional<std::vector<Elem>> find_violation(const FiniteMagma& m,
                                                       const Law& law) {
  return CompiledLaw(law).violation(m);
}

inline FiniteMagma opposite(const FiniteMagma& m) {
  return FiniteMagma::from_function(m.size(),
                                    [&](Elem x, Elem y) { return m(y, x); });
}

/// Coordinatewise product; the pair (a, b) is element a * |m2| + b.
inline FiniteMagma direct_product(const FiniteMagma& m1, const FiniteMagma& m2) {
  const std::size_t n2 = m2.size();
  return FiniteMagma::from_function(m1.size() * n2, [&](Elem x, Elem y) {
    return m1(x / n2, y / n2) * n2 + m2(x % n2, y % n2);
  });
}

/// The isomorphic copy along the relabelling x -> perm[x].
inline FiniteMagma relabel(const FiniteMagma& m, std::span<const Elem> perm) {
  const std::size_t n = m.size();
  std::vector<Elem> t(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      t[perm[x] * n + perm[y]] = perm[m(Elem(x), Elem(y))];
  return FiniteMagma(n, std::move(t));
}

/// Row x: the left multiplication y -> x ⋄ y.
inline std::vector<Elem> left_mult(const FiniteMagma& m, Elem x) {
  return {m.table().begin() + x * m.size(), m.table().begin() + (x + 1) * m.size()};
}

/// Column y: the right multiplication x -> x ⋄ y.
inline std::vector<Elem> right_mult(const FiniteMagma& m, Elem y) {
  std::vector<Elem> c(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) c[x] = m(Elem(x), y);
  return c;
}

/// Diagonal: x -> x ⋄ x.
inline std::vector<Elem> squaring(const FiniteMagma& m) {
  std::vector<Elem> d(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) d[x] = m(Elem(x), Elem(x));
  return d;
}

inline nlohmann::json magma_to_json(const FiniteMagma& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t x = 0; x < m.size(); ++x) rows.push_back(left_mult(m, Elem(x)));
  return {{"size", m.size()}, {"table", rows}};
}

/// Accepts {"size": n, "table": [[...], ...]} or a bare list of rows.
inline FiniteMagma magma_from_json(const nlohmann::json& j) {
  const nlohmann::json& rows = j.is_array() ? j : j.at("table");
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("magma table must be a non-empty list of rows");
  const std::size_t n = rows.size();
  if (j.is_object() && j.contains("size") && j.at("size").get<std::size_t>() != n)
    throw std::invalid_argument("magma size does not match table");
  std::vector<Elem> t;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n)
      throw std::invalid_argument("magma table must be square");
    for (const auto& v : row) t.push_back(v.get<Elem>());
  }
  return FiniteMagma(n, std::move(t));
}

inline FiniteMagma parse_magma(std::string_view text) {
  return magma_from_json(nlohmann::json::parse(text));
}

}  // namespace magmalaws

#endif  // MAGMALAWS_MAGMA_HPP
