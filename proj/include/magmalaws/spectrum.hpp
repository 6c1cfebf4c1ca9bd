#ifndef MAGMALAWS_SPECTRUM_HPP
#define MAGMALAWS_SPECTRUM_HPP

// Which laws have models of every finite size. A law satisfied by
// x ⋄ y = a x + b y over the integers holds on every Z/n, hence has full
// spectrum; small sizes are settled by exhaustive tables.

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "magmalaws/finder.hpp"
#include "magmalaws/linear.hpp"
#include "magmalaws/numbering.hpp"

namespace magmalaws {

/// (a, b) pairs in the order they are tried.
inline constexpr std::array<std::pair<int, int>, 9> kSpectrumScan = {{
    {0, 0}, {1, 0}, {0, 1}, {1, -1}, {-1, 1}, {-1, -1}, {1, 1}, {-1, 0}, {0, -1}}};

inline std::optional<std::pair<int, int>> full_spectrum_by_linear(const Law& law) {
  for (auto [a, b] : kSpectrumScan)
    if (linear_satisfies_all_n(law, a, b)) return std::pair{a, b};
  return std::nullopt;
}

struct SpectrumReport {
  LawNumber law = 0;
  bool has2 = false;
  bool has3 = false;
  std::optional<std::pair<int, int>> certificate;
  bool uncertified_full = false;  // full spectrum by a model not built here
  std::vector<std::size_t> sizes;  // sizes up to the scanned bound with a model
};

struct SpectrumSummary {
  std::size_t laws = 0;
  std::size_t certified = 0;
  std::size_t no_size2 = 0;
  std::size_t size2_not_size3 = 0;
  std::size_t uncertified_full = 0;
};

namespace detail {
// Full spectrum by hand-built models that are not reproduced here; reported
// as such, never certified.
inline std::vector<LawNumber> uncertified_full_spectrum_laws() {
  std::vector<LawNumber> out;
  for (LawNumber e : {LawNumber(1482), LawNumber(1523), LawNumber(1682)}) {
    out.push_back(e);
    out.push_back(law_number(dual(number_to_law(e, kMaxRankedOrder))));
  }
  return out;
}
}  // namespace detail

/// Reports for every law of order <= max_order. Sizes 2 and 3 come from
/// scanning all tables; sizes 4..max_size (if any) from the finder.
inline std::vector<SpectrumReport> classify_spectrum(std::size_t max_order,
                                                     std::size_t max_size = 3,
                                                     const SearchBudget& budget = {}) {
  const auto laws = enumerate_laws(max_order);
  std::vector<SpectrumReport> out(laws.size());
  const auto adhoc = detail::uncertified_full_spectrum_laws();
  std::vector<std::vector<bool>> has(max_size + 1);
  for (std::size_t s = 2; s <= max_size; ++s) has[s] = exhaust_and_classify(laws, s, budget);
  for (std::size_t i = 0; i < laws.size(); ++i) {
    SpectrumReport& r = out[i];
    r.law = LawNumber(i + 1);
    r.has2 = max_size >= 2 && has[2][i];
    r.has3 = max_size >= 3 && has[3][i];
    r.certificate = full_spectrum_by_linear(laws[i]);
    r.uncertified_full =
        !r.certificate && std::find(adhoc.begin(), adhoc.end(), r.law) != adhoc.end();
    r.sizes.push_back(1);
    for (std::size_t s = 2; s <= max_size; ++s)
      if (has[s][i]) r.sizes.push_back(s);
  }
  return out;
}

inline SpectrumSummary summarize(const std::vector<SpectrumReport>& reports) {
  SpectrumSummary s;
  s.laws = reports.size();
  for (const auto& r : reports) {
    s.certified += r.certificate.has_value();
    s.no_size2 += !r.has2;
    s.size2_not_size3 += r.has2 && !r.has3;
    s.uncertified_full += r.uncertified_full;
  }
  return s;
}

/// `law,has2,has3,cert_a,cert_b`; uncertified laws leave the certificate
/// columns empty.
inline std::string spectrum_csv(const std::vector<SpectrumReport>& reports) {
  std::ostringstream os;
  os << "law,has2,has3,cert_a,cert_b\n";
  for (const auto& r : reports) {
    os << r.law << ',' << int(r.has2) << ',' << int(r.has3) << ',';
    if (r.certificate) os << r.certificate->first << ',' << r.certificate->second;
    else os << ',';
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json to_json(const SpectrumSummary& s) {
  return {{"laws", s.laws},
          {"certified_full_spectrum", s.certified},
          {"no_size2", s.no_size2},
          {"size2_not_size3", s.size2_not_size3},
          {"uncertified_full_spectrum", s.uncertified_full}};
}

}  // namespace magmalaws

#endif  // MAGMALAWS_SPECTRUM_HPP
