#ifndef MAGMALAWS_GRAPH_HPP
#define MAGMALAWS_GRAPH_HPP

// The dual implication graph over laws 1..N: a general (all magmas) and a
// finite (finite magmas) relation, each with Implied / Refuted bit matrices,
// per-edge provenance, closure and exports.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "magmalaws/numbering.hpp"

namespace magmalaws {

enum class Relation : std::uint8_t { General = 0, Finite = 1 };
enum class Status : std::uint8_t { Unknown, Implied, Refuted, Conjectured, Inconsistent };

inline std::string to_string(Relation r) { return r == Relation::General ? "general" : "finite"; }

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Unknown: return "unknown";
    case Status::Implied: return "implied";
    case Status::Refuted: return "refuted";
    case Status::Conjectured: return "conjectured";
    case Status::Inconsistent: return "inconsistent";
  }
  return "?";
}

inline Relation parse_relation(std::string_view s) {
  if (s == "general") return Relation::General;
  if (s == "finite") return Relation::Finite;
  throw std::invalid_argument("relation must be general or finite");
}

inline Status parse_status(std::string_view s) {
  if (s == "implied") return Status::Implied;
  if (s == "refuted") return Status::Refuted;
  if (s == "conjectured") return Status::Conjectured;
  if (s == "unknown") return Status::Unknown;
  throw std::invalid_argument("status must be implied, refuted, conjectured or unknown");
}

/// Square bit matrix, one row of 64-bit words per law.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t i, std::size_t j) const { return bits_[i * words_ + j / 64] >> (j % 64) & 1; }
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t(1) << (j % 64); }
  void reset(std::size_t i, std::size_t j) {
    bits_[i * words_ + j / 64] &= ~(std::uint64_t(1) << (j % 64));
  }

  std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }
  std::size_t words() const { return words_; }

  /// row(dst) |= row(src) of `from`; true if anything changed.
  bool or_row(std::size_t dst, const BitMatrix& from, std::size_t src) {
    std::uint64_t* d = row(dst);
    const std::uint64_t* s = from.row(src);
    std::uint64_t changed = 0;
    for (std::size_t k = 0; k < words_; ++k) {
      changed |= s[k] & ~d[k];
      d[k] |= s[k];
    }
    return changed != 0;
  }

  bool rows_intersect(std::size_t i, const BitMatrix& other, std::size_t j) const {
    const std::uint64_t* a = row(i);
    const std::uint64_t* b = other.row(j);
    for (std::size_t k = 0; k < words_; ++k)
      if (a[k] & b[k]) return true;
    return false;
  }

  BitMatrix transposed() const {
    BitMatrix t(n_);
    for_each([&](std::size_t i, std::size_t j) { t.set(j, i); });
    return t;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < n_; ++i) for_each_in_row(i, [&](std::size_t j) { f(i, j); });
  }

  template <class F>
  void for_each_in_row(std::size_t i, F&& f) const {
    const std::uint64_t* r = row(i);
    for (std::size_t k = 0; k < words_; ++k)
      for (std::uint64_t w = r[k]; w; w &= w - 1) f(k * 64 + std::size_t(std::countr_zero(w)));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : bits_) c += std::size_t(std::popcount(w));
    return c;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Where a status came from: a method tag plus a witness reference, written
/// "method:witness" (witness may be empty).
struct Provenance {
  std::string method;
  std::string witness;

  std::string text() const { return witness.empty() ? method : method + ":" + witness; }
  static Provenance parse(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) return {std::string(s), {}};
    return {std::string(s.substr(0, colon)), std::string(s.substr(colon + 1))};
  }
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Fact {
  LawNumber src = 0, dst = 0;
  Relation relation = Relation::General;
  Status status = Status::Unknown;
  Provenance provenance;
};

struct Inconsistency {
  LawNumber src = 0, dst = 0;
  Relation relation = Relation::General;
  std::string implied_by;
  std::string refuted_by;
};

/// Edges resolved per closure rule, and conflicts found.
struct ClosureReport {
  std::map<std::string, std::size_t> resolved;
  std::vector<Inconsistency> inconsistencies;
  std::size_t rounds = 0;
};

namespace detail {

// Closure rule tags (stored per derived edge).
enum Rule : std::uint8_t {
  kSeed = 0,
  kTransitivity,
  kWeakerSource,    // A ⊨ B, A ⊭ C  ⇒  B ⊭ C
  kStrongerTarget,  // A ⊨ B, C ⊭ B  ⇒  C ⊭ A
  kDuality,
  kGeneralToFinite,
  kFiniteToGeneral,
  kRuleCount
};

inline constexpr const char* kRuleNames[kRuleCount] = {
    "seed", "transitivity", "weaker-source", "stronger-target",
    "duality", "general-to-finite", "finite-to-general"};

inline Rule rule_from_name(std::string_view s) {
  for (int r = 1; r < kRuleCount; ++r)
    if (s == kRuleNames[r]) return Rule(r);
  throw std::invalid_argument("unknown closure rule '" + std::string(s) + "'");
}

}  // namespace detail

class ImplGraph {
 public:
  static constexpr std::size_t kDotLabelCap = 12;

  /// All laws of order <= max_order (numbers 1..count).
  explicit ImplGraph(std::size_t max_order) : max_order_(max_order) {
    const auto laws = enumerate_laws(max_order);
    n_ = laws.size();
    dual_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) dual_[i] = std::uint32_t(law_number(dual(laws[i])) - 1);
    for (auto& r : rel_) r = RelationData(n_);
  }

  std::size_t size() const { return n_; }
  std::size_t max_order() const { return max_order_; }
  LawNumber dual_of(LawNumber e) const { return dual_.at(index(e)) + 1; }
  bool poisoned() const { return !inconsistencies_.empty(); }
  const std::vector<Inconsistency>& inconsistencies() const { return inconsistencies_; }

  /// Records a fact. Conflicts with the current status are recorded as
  /// inconsistencies and return false; adding to a poisoned graph throws.
  bool add_fact(LawNumber e1, LawNumber e2, Relation relation, Status status,
                const Provenance& provenance) {
    if (poisoned()) throw std::logic_error("graph is poisoned by an earlier inconsistency");
    const std::size_t a = index(e1), b = index(e2);
    RelationData& d = rel_[int(relation)];
    switch (status) {
      case Status::Implied:
      case Status::Refuted: {
        const bool implied = status == Status::Implied;
        BitMatrix& same = implied ? d.implied : d.refuted;
        const BitMatrix& other = implied ? d.refuted : d.implied;
        if (other.test(a, b)) {
          const std::string existing = provenance_text(a, b, relation);
          inconsistencies_.push_back({e1, e2, relation, implied ? provenance.text() : existing,
                                      implied ? existing : provenance.text()});
          d.poison.set(a, b);
          return false;
        }
        if (same.test(a, b)) return true;
        same.set(a, b);
        seeds_[key(a, b, relation)] = provenance;
        dirty_ = true;
        return true;
      }
      case Status::Conjectured:
        conjectures_[key(a, b, relation)] = provenance;
        return true;
      default:
        throw std::invalid_argument("add_fact needs implied, refuted or conjectured");
    }
  }

  bool add_fact(const Fact& f) { return add_fact(f.src, f.dst, f.relation, f.status, f.provenance); }

  Status status(LawNumber e1, LawNumber e2, Relation relation) const {
    const std::size_t a = index(e1), b = index(e2);
    const RelationData& d = rel_[int(relation)];
    if (d.poison.test(a, b)) return Status::Inconsistent;
    if (d.implied.test(a, b)) return Status::Implied;
    if (d.refuted.test(a, b)) return Status::Refuted;
    if (conjectures_.count(key(a, b, relation))) return Status::Conjectured;
    return Status::Unknown;
  }

  Provenance provenance(LawNumber e1, LawNumber e2, Relation relation) const {
    return Provenance::parse(provenance_text(index(e1), index(e2), relation));
  }

  const BitMatrix& implied(Relation r) const { return rel_[int(r)].implied; }
  const BitMatrix& refuted(Relation r) const { return rel_[int(r)].refuted; }
  bool dirty() const { return dirty_; }

  /// Saturates both relations under transitivity, the two refutation
  /// propagation rules, duality, general ⊨ ⇒ finite ⊨ and finite ⊭ ⇒ general ⊭.
  /// Conjectures take part in nothing. Conflicts poison the edge.
  ClosureReport close() {
    ClosureReport report;
    for (int r = 1; r < detail::kRuleCount; ++r) report.resolved[detail::kRuleNames[r]] = 0;
    RelationData& gen = rel_[0];
    RelationData& fin = rel_[1];
    bool changed = true;
    while (changed) {
      changed = false;
      ++report.rounds;
      for (int r = 0; r < 2; ++r) changed |= mirror(rel_[r].implied, rel_[r].implied_rule, report);
      changed |= merge(fin.implied, fin.implied_rule, gen.implied, detail::kGeneralToFinite, report);
      for (int r = 0; r < 2; ++r) changed |= transitive(rel_[r], report);
      for (int r = 1; r >= 0; --r) {
        changed |= mirror(rel_[r].refuted, rel_[r].refuted_rule, report);
        changed |= propagate_refutations(rel_[r], report);
      }
      changed |= merge(gen.refuted, gen.refuted_rule, fin.refuted, detail::kFiniteToGeneral, report);
    }
    for (int r = 0; r < 2; ++r) {
      RelationData& d = rel_[r];
      for (std::size_t a = 0; a < n_; ++a) {
        if (!d.implied.rows_intersect(a, d.refuted, a)) continue;
        d.implied.for_each_in_row(a, [&](std::size_t b) {
          if (!d.refuted.test(a, b) || d.poison.test(a, b)) return;
          d.poison.set(a, b);
          Inconsistency inc{a + 1, b + 1, Relation(r), implied_text(a, b, Relation(r)),
                            refuted_text(a, b, Relation(r))};
          report.inconsistencies.push_back(inc);
          inconsistencies_.push_back(inc);
        });
      }
    }
    dirty_ = false;
    return report;
  }

  /// Seed facts that derive the current status of an edge (empty for
  /// Unknown/Conjectured). Implications come as a chain of seeds; a refutation
  /// as (implication chain to the seed's source, the seed refutation,
  /// implication chain from the target).
  std::vector<Fact> explain(LawNumber e1, LawNumber e2, Relation relation) const {
    const std::size_t a = index(e1), b = index(e2);
    const RelationData& d = rel_[int(relation)];
    if (d.implied.test(a, b)) return implication_chain(a, b, relation);
    if (!d.refuted.test(a, b)) return {};
    // a ⊭ b follows from a seed x ⊭ y (or its dual, or a finite seed) with x ⊨ a, b ⊨ y
    for (int source = int(relation); source <= 1; ++source) {
      const Relation sr = Relation(source);
      for (const auto& [k, prov] : seeds_) {
        const auto [x, y, r] = unkey(k);
        if (r != sr || !rel_[source].refuted.test(x, y) || !is_refutation_seed(x, y, sr)) continue;
        for (int flip = 0; flip < 2; ++flip) {
          const std::size_t sx = flip ? dual_[x] : x, sy = flip ? dual_[y] : y;
          if ((sx != a && !d.implied.test(sx, a)) || (b != sy && !d.implied.test(b, sy))) continue;
          std::vector<Fact> out = implication_chain(sx, a, relation);
          out.push_back({x + 1, y + 1, sr, Status::Refuted, prov});
          auto tail = implication_chain(b, sy, relation);
          out.insert(out.end(), tail.begin(), tail.end());
          return out;
        }
      }
    }
    return {};
  }

  // --- condensation ---------------------------------------------------------

  /// Classes of mutually implied laws (closed graph), each sorted, ordered by
  /// smallest member.
  std::vector<std::vector<LawNumber>> equivalence_classes(Relation r = Relation::General) const {
    const BitMatrix& m = rel_[int(r)].implied;
    std::vector<int> cls(n_, -1);
    std::vector<std::vector<LawNumber>> out;
    for (std::size_t a = 0; a < n_; ++a) {
      if (cls[a] >= 0) continue;
      cls[a] = int(out.size());
      out.push_back({LawNumber(a + 1)});
      m.for_each_in_row(a, [&](std::size_t b) {
        if (b != a && cls[b] < 0 && m.test(b, a)) {
          cls[b] = cls[a];
          out.back().push_back(LawNumber(b + 1));
        }
      });
    }
    return out;
  }

  /// Covering pairs (i, j) of class indices: class i implies class j with
  /// nothing strictly between.
  std::vector<std::pair<std::size_t, std::size_t>> hasse(
      const std::vector<std::vector<LawNumber>>& classes, Relation r = Relation::General) const {
    const BitMatrix& m = rel_[int(r)].implied;
    const std::size_t k = classes.size();
    BitMatrix above(k);  // strict order between classes
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j && m.test(index(classes[i][0]), index(classes[j][0]))) above.set(i, j);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < k; ++i)
      above.for_each_in_row(i, [&](std::size_t j) {
        bool covered = true;
        above.for_each_in_row(i, [&](std::size_t z) {
          if (z != j && above.test(z, j)) covered = false;
        });
        if (covered) out.emplace_back(i, j);
      });
    return out;
  }

  nlohmann::json stats() const {
    nlohmann::json j;
    j["laws"] = n_;
    j["max_order"] = max_order_;
    const std::size_t pairs = n_ * (n_ - 1);
    for (int r = 0; r < 2; ++r) {
      std::size_t imp = 0, ref = 0, conj = 0, bad = 0;
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) {
          if (a == b) continue;
          const Status s = status(a + 1, b + 1, Relation(r));
          imp += s == Status::Implied;
          ref += s == Status::Refuted;
          conj += s == Status::Conjectured;
          bad += s == Status::Inconsistent;
        }
      j[to_string(Relation(r))] = {{"implied", imp},
                                   {"refuted", ref},
                                   {"conjectured", conj},
                                   {"inconsistent", bad},
                                   {"unknown", pairs - imp - ref - conj - bad},
                                   {"resolved_fraction", pairs ? double(imp + ref) / pairs : 1.0}};
    }
    const auto classes = equivalence_classes();
    std::size_t largest = 0;
    LawNumber largest_rep = 0;
    for (const auto& c : classes)
      if (c.size() > largest) {
        largest = c.size();
        largest_rep = c.front();
      }
    j["classes"] = classes.size();
    j["largest_class"] = {{"size", largest}, {"representative", largest_rep}};
    j["inconsistencies"] = inconsistencies_.size();
    return j;
  }

  // --- export / import ------------------------------------------------------

  /// Every non-Unknown edge, row-major, general before finite.
  std::vector<Fact> facts() const {
    std::vector<Fact> out;
    for (int r = 0; r < 2; ++r)
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) {
          const Status s = status(a + 1, b + 1, Relation(r));
          if (s == Status::Unknown) continue;
          out.push_back({a + 1, b + 1, Relation(r), s,
                         Provenance::parse(provenance_text(a, b, Relation(r)))});
        }
    return out;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "src,dst,relation,status,provenance\n";
    for (const Fact& f : facts())
      os << f.src << ',' << f.dst << ',' << to_string(f.relation) << ',' << to_string(f.status)
         << ',' << csv_field(f.provenance.text()) << '\n';
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    for (const Fact& f : facts())
      edges.push_back({{"src", f.src},
                       {"dst", f.dst},
                       {"relation", to_string(f.relation)},
                       {"status", to_string(f.status)},
                       {"provenance", f.provenance.text()}});
    return {{"laws", n_}, {"edges", edges}};
  }

  /// Condensation Hasse diagram: classes as boxes, an arrow from each class
  /// to the classes it covers.
  std::string to_dot(Relation r = Relation::General) const {
    const auto classes = equivalence_classes(r);
    std::ostringstream os;
    os << "digraph implications {\n  rankdir=BT;\n  node [shape=box, style=rounded];\n";
    for (std::size_t i = 0; i < classes.size(); ++i) {
      std::string label;
      const std::size_t shown = std::min(classes[i].size(), kDotLabelCap);
      for (std::size_t k = 0; k < shown; ++k) {
        if (k) label += ", ";
        label += "E" + std::to_string(classes[i][k]);
      }
      if (classes[i].size() > shown) label += " +" + std::to_string(classes[i].size() - shown) + " more";
      os << "  c" << i << " [label=\"" << label << "\"];\n";
    }
    for (const auto& [i, j] : hasse(classes, r)) os << "  c" << i << " -> c" << j << ";\n";
    os << "}\n";
    return os.str();
  }

  /// Adds every row of an edge CSV. Rows whose provenance is a closure rule
  /// restore derived edges; all others are added as facts. Rows naming laws
  /// outside the graph throw.
  void import_csv(std::istream& in) {
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (header) {
        header = false;
        if (line.rfind("src,", 0) == 0) continue;
      }
      const auto cells = split_csv(line);
      if (cells.size() != 5) throw std::invalid_argument("edge CSV rows need 5 fields: " + line);
      import_fact({std::stoull(cells[0]), std::stoull(cells[1]), parse_relation(cells[2]),
                   parse_status(cells[3]), Provenance::parse(cells[4])});
    }
  }

  void import_json(const nlohmann::json& j) {
    if (j.at("laws").get<std::size_t>() != n_)
      throw std::invalid_argument("graph JSON has a different law count");
    for (const auto& e : j.at("edges"))
      import_fact({e.at("src").get<LawNumber>(), e.at("dst").get<LawNumber>(),
                   parse_relation(e.at("relation").get<std::string>()),
                   parse_status(e.at("status").get<std::string>()),
                   Provenance::parse(e.at("provenance").get<std::string>())});
  }

  /// Smallest max order whose law count is `laws`.
  static std::size_t order_for_count(std::size_t laws) {
    std::size_t total = 0;
    for (std::size_t k = 0; k <= kMaxRankedOrder; ++k) {
      total += count_laws(k);
      if (total == laws) return k;
      if (total > laws) break;
    }
    throw std::invalid_argument("law count does not match any max order");
  }

  friend bool operator==(const ImplGraph& x, const ImplGraph& y) {
    return x.n_ == y.n_ && x.to_csv() == y.to_csv();
  }

 private:
  struct RelationData {
    BitMatrix implied, refuted, poison;
    std::vector<std::uint8_t> implied_rule, refuted_rule;  // detail::Rule per derived edge
    RelationData() = default;
    explicit RelationData(std::size_t n)
        : implied(n), refuted(n), poison(n), implied_rule(n * n, 0), refuted_rule(n * n, 0) {}
  };

  std::size_t index(LawNumber e) const {
    if (e < 1 || e > n_) throw std::out_of_range("law E" + std::to_string(e) + " is not in the graph");
    return std::size_t(e - 1);
  }

  std::uint64_t key(std::size_t a, std::size_t b, Relation r) const {
    return (std::uint64_t(a) * n_ + b) * 2 + std::uint64_t(r);
  }
  std::tuple<std::size_t, std::size_t, Relation> unkey(std::uint64_t k) const {
    const Relation r = Relation(k % 2);
    k /= 2;
    return {std::size_t(k / n_), std::size_t(k % n_), r};
  }

  bool is_refutation_seed(std::size_t a, std::size_t b, Relation r) const {
    return rel_[int(r)].refuted_rule[a * n_ + b] == detail::kSeed;
  }

  std::string implied_text(std::size_t a, std::size_t b, Relation r) const {
    const auto& d = rel_[int(r)];
    const auto rule = d.implied_rule[a * n_ + b];
    if (rule != detail::kSeed) return std::string("closure:") + detail::kRuleNames[rule];
    auto it = seeds_.find(key(a, b, r));
    return it == seeds_.end() ? "" : it->second.text();
  }

  std::string refuted_text(std::size_t a, std::size_t b, Relation r) const {
    const auto& d = rel_[int(r)];
    const auto rule = d.refuted_rule[a * n_ + b];
    if (rule != detail::kSeed) return std::string("closure:") + detail::kRuleNames[rule];
    auto it = seeds_.find(key(a, b, r));
    return it == seeds_.end() ? "" : it->second.text();
  }

  std::string provenance_text(std::size_t a, std::size_t b, Relation r) const {
    const auto& d = rel_[int(r)];
    if (d.poison.test(a, b)) return "conflict";
    if (d.implied.test(a, b)) return implied_text(a, b, r);
    if (d.refuted.test(a, b)) return refuted_text(a, b, r);
    auto it = conjectures_.find(key(a, b, r));
    return it == conjectures_.end() ? "" : it->second.text();
  }

  void import_fact(const Fact& f) {
    if (f.status == Status::Unknown || f.status == Status::Inconsistent) return;
    if (f.provenance.method != "closure" || f.status == Status::Conjectured) {
      add_fact(f);
      return;
    }
    const std::size_t a = index(f.src), b = index(f.dst);
    RelationData& d = rel_[int(f.relation)];
    const auto rule = std::uint8_t(detail::rule_from_name(f.provenance.witness));
    if (f.status == Status::Implied) {
      d.implied.set(a, b);
      d.implied_rule[a * n_ + b] = rule;
    } else {
      d.refuted.set(a, b);
      d.refuted_rule[a * n_ + b] = rule;
    }
    dirty_ = true;
  }

  // Marks (a,b) derived by `rule` if it was clear.
  static bool derive(BitMatrix& m, std::vector<std::uint8_t>& rules, std::size_t n, std::size_t a,
                     std::size_t b, detail::Rule rule, ClosureReport& report) {
    if (m.test(a, b)) return false;
    m.set(a, b);
    rules[a * n + b] = rule;
    ++report.resolved[detail::kRuleNames[rule]];
    return true;
  }

  bool mirror(BitMatrix& m, std::vector<std::uint8_t>& rules, ClosureReport& report) {
    std::vector<std::pair<std::size_t, std::size_t>> add;
    m.for_each([&](std::size_t a, std::size_t b) {
      if (!m.test(dual_[a], dual_[b])) add.emplace_back(dual_[a], dual_[b]);
    });
    for (auto [a, b] : add) derive(m, rules, n_, a, b, detail::kDuality, report);
    return !add.empty();
  }

  bool merge(BitMatrix& into, std::vector<std::uint8_t>& rules, const BitMatrix& from,
             detail::Rule rule, ClosureReport& report) {
    bool changed = false;
    from.for_each([&](std::size_t a, std::size_t b) {
      changed |= derive(into, rules, n_, a, b, rule, report);
    });
    return changed;
  }

  // Warshall over bit rows; newly set bits are tagged as transitivity.
  bool transitive(RelationData& d, ClosureReport& report) {
    const BitMatrix before = d.implied;
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i)
        if (i != k && d.implied.test(i, k)) d.implied.or_row(i, d.implied, k);
    return tag_new(before, d.implied, d.implied_rule, detail::kTransitivity, report);
  }

  // Weaker source: B ⊭ C for every A ⊨ B with A ⊭ C. Stronger target:
  // C ⊭ A for every A ⊨ B with C ⊭ B. With a transitively closed ⊨ one pass
  // of each saturates.
  bool propagate_refutations(RelationData& d, ClosureReport& report) {
    const BitMatrix before = d.refuted;
    const BitMatrix imp_t = d.implied.transposed();
    for (std::size_t b = 0; b < n_; ++b)
      imp_t.for_each_in_row(b, [&](std::size_t a) {
        if (a != b) d.refuted.or_row(b, before, a);
      });
    bool changed = tag_new(before, d.refuted, d.refuted_rule, detail::kWeakerSource, report);
    const BitMatrix mid = d.refuted;
    BitMatrix ref_t = mid.transposed();
    const BitMatrix ref_t_before = ref_t;
    for (std::size_t a = 0; a < n_; ++a)
      d.implied.for_each_in_row(a, [&](std::size_t b) {
        if (a != b) ref_t.or_row(a, ref_t_before, b);
      });
    d.refuted = ref_t.transposed();
    changed |= tag_new(mid, d.refuted, d.refuted_rule, detail::kStrongerTarget, report);
    return changed;
  }

  bool tag_new(const BitMatrix& before, const BitMatrix& after, std::vector<std::uint8_t>& rules,
               detail::Rule rule, ClosureReport& report) {
    bool changed = false;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::uint64_t* b = before.row(i);
      const std::uint64_t* a = after.row(i);
      for (std::size_t k = 0; k < after.words(); ++k)
        for (std::uint64_t w = a[k] & ~b[k]; w; w &= w - 1) {
          rules[i * n_ + k * 64 + std::size_t(std::countr_zero(w))] = rule;
          ++report.resolved[detail::kRuleNames[rule]];
          changed = true;
        }
    }
    return changed;
  }

  // Seed implications (and their duals; general seeds for the finite
  // relation) forming a path a ⊨ ... ⊨ b.
  std::vector<Fact> implication_chain(std::size_t a, std::size_t b, Relation relation) const {
    if (a == b) return {};
    std::vector<std::vector<std::pair<std::size_t, Fact>>> adj(n_);
    for (const auto& [k, prov] : seeds_) {
      const auto [x, y, r] = unkey(k);
      if (int(r) > int(relation) || !rel_[int(r)].implied.test(x, y) ||
          rel_[int(r)].implied_rule[x * n_ + y] != detail::kSeed)
        continue;
      const Fact f{x + 1, y + 1, r, Status::Implied, prov};
      adj[x].emplace_back(y, f);
      adj[dual_[x]].emplace_back(dual_[y], f);
    }
    std::vector<std::optional<std::pair<std::size_t, Fact>>> from(n_);
    std::vector<std::size_t> queue{a};
    std::vector<bool> seen(n_, false);
    seen[a] = true;
    for (std::size_t qi = 0; qi < queue.size() && !seen[b]; ++qi)
      for (const auto& [y, f] : adj[queue[qi]])
        if (!seen[y]) {
          seen[y] = true;
          from[y] = std::pair{queue[qi], f};
          queue.push_back(y);
        }
    std::vector<Fact> out;
    if (!seen[b]) return out;
    for (std::size_t cur = b; cur != a; cur = from[cur]->first) out.push_back(from[cur]->second);
    std::reverse(out.begin(), out.end());
    return out;
  }

  static std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  static std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          out.back() += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          out.back() += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        out.emplace_back();
      } else {
        out.back() += c;
      }
    }
    return out;
  }

  std::size_t max_order_ = 0;
  std::size_t n_ = 0;
  std::vector<std::uint32_t> dual_;
  RelationData rel_[2];
  std::unordered_map<std::uint64_t, Provenance> seeds_;
  std::unordered_map<std::uint64_t, Provenance> conjectures_;
  std::vector<Inconsistency> inconsistencies_;
  bool dirty_ = false;
};

}  // namespace magmalaws

#endif  // MAGMALAWS_GRAPH_HPP
