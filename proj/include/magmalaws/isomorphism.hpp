#ifndef MAGMALAWS_ISOMORPHISM_HPP
#define MAGMALAWS_ISOMORPHISM_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "magmalaws/magma.hpp"

namespace magmalaws {

/// Largest size canonical_form accepts (it walks all size! relabelings).
inline constexpr std::size_t kMaxCanonicalSize = 10;

/// Per-element data preserved by isomorphisms: how often the element occurs
/// in the table, whether it is idempotent, and how many elements it commutes
/// with.
struct ElementSignature {
  std::size_t frequency = 0;
  bool idempotent = false;
  std::size_t commuting = 0;

  friend auto operator<=>(const ElementSignature&, const ElementSignature&) = default;
};

inline std::vector<ElementSignature> element_signatures(const FiniteMagma& m) {
  const std::size_t n = m.size();
  std::vector<ElementSignature> sig(n);
  for (Elem v : m.table()) ++sig[v].frequency;
  for (std::size_t x = 0; x < n; ++x) {
    sig[x].idempotent = m(Elem(x), Elem(x)) == x;
    for (std::size_t y = 0; y < n; ++y)
      if (m(Elem(x), Elem(y)) == m(Elem(y), Elem(x))) ++sig[x].commuting;
  }
  return sig;
}

/// Sorted element signatures; differing discriminators rule out an
/// isomorphism without any permutation search.
inline std::vector<ElementSignature> discriminator(const FiniteMagma& m) {
  auto sig = element_signatures(m);
  std::sort(sig.begin(), sig.end());
  return sig;
}

/// The row-major lexicographically least table among all relabelings of m.
/// Two magmas are isomorphic iff their canonical forms are equal.
inline FiniteMagma canonical_form(const FiniteMagma& m) {
  const std::size_t n = m.size();
  if (n > kMaxCanonicalSize) throw std::invalid_argument("canonical_form supports size <= 10");
  // inv[i] is the original element that receives label i
  std::vector<Elem> inv(n), label(n);
  std::iota(inv.begin(), inv.end(), Elem{0});
  std::vector<Elem> best;
  do {
    for (std::size_t i = 0; i < n; ++i) label[inv[i]] = Elem(i);
    bool smaller = best.empty();
    bool decided = smaller;
    for (std::size_t i = 0; i < n && !decided; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Elem v = label[m(inv[i], inv[j])];
        const Elem b = best[i * n + j];
        if (v != b) {
          smaller = v < b;
          decided = true;
          break;
        }
      }
    if (smaller) {
      best.resize(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) best[i * n + j] = label[m(inv[i], inv[j])];
    }
  } while (std::next_permutation(inv.begin(), inv.end()));
  return FiniteMagma(n, std::move(best));
}

inline bool isomorphic(const FiniteMagma& a, const FiniteMagma& b) {
  if (a.size() != b.size()) return false;
  if (discriminator(a) != discriminator(b)) return false;
  return canonical_form(a) == canonical_form(b);
}

/// One representative (the first met) per isomorphism class, in input order.
inline std::vector<FiniteMagma> isofilter(const std::vector<FiniteMagma>& models) {
  std::map<std::tuple<std::size_t, std::vector<ElementSignature>>, std::vector<FiniteMagma>>
      seen;
  std::vector<FiniteMagma> out;
  for (const auto& m : models) {
    auto& bucket = seen[{m.size(), discriminator(m)}];
    FiniteMagma c = canonical_form(m);
    if (std::find(bucket.begin(), bucket.end(), c) != bucket.end()) continue;
    bucket.push_back(std::move(c));
    out.push_back(m);
  }
  return out;
}

}  // namespace magmalaws

#endif  // MAGMALAWS_ISOMORPHISM_HPP
