#ifndef MAGMALAWS_FINDER_HPP
#define MAGMALAWS_FINDER_HPP

// Finite model search in the style of Mace4: cell-by-cell assignment of a
// partial multiplication table, propagation over ground instances of the
// positive laws, and least-number symmetry breaking.

#include <bit>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "magmalaws/magma.hpp"

namespace magmalaws {

enum class Verdict { Found, Exhausted, BudgetExceeded };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Found: return "found";
    case Verdict::Exhausted: return "exhausted";
    case Verdict::BudgetExceeded: return "budget";
  }
  return "budget";
}

struct SearchBudget {
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
  std::chrono::milliseconds time_limit{0};  // zero: no limit

  static SearchBudget unlimited() { return {}; }
};

struct SearchResult {
  Verdict verdict = Verdict::BudgetExceeded;
  std::size_t size = 0;
  std::optional<FiniteMagma> model;
  std::uint64_t nodes = 0;
  double millis = 0;
};

inline nlohmann::json to_json(const SearchResult& r) {
  nlohmann::json j = {{"verdict", to_string(r.verdict)},
                      {"size", r.size},
                      {"nodes", r.nodes},
                      {"millis", r.millis}};
  if (r.model) j["model"] = magma_to_json(*r.model)["table"];
  return j;
}

namespace detail {

// Postfix program of one side of a law: >= 0 pushes a variable, -1 applies the
// operation. For each position, parent[k] is the enclosing operation (-1 at
// the root) and left[k] tells which argument it is.
struct SideProgram {
  std::vector<std::int16_t> ops;
  std::vector<std::int16_t> parent;
  std::vector<bool> left;

  explicit SideProgram(const Word& w) {
    std::vector<std::vector<std::int16_t>> stack;
    auto code = w.code();
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
    ops = std::move(stack.back());
    int depth = 0, deepest = 0;
    for (auto op : ops) deepest = std::max(deepest, depth += op < 0 ? -1 : 1);
    if (deepest > 64) throw std::invalid_argument("law too deeply nested for model search");
    parent.assign(ops.size(), -1);
    left.assign(ops.size(), false);
    std::vector<std::int16_t> nodes;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (ops[k] < 0) {
        const auto r = nodes.back();
        nodes.pop_back();
        const auto l = nodes.back();
        nodes.pop_back();
        parent[r] = parent[l] = std::int16_t(k);
        left[l] = true;
      }
      nodes.push_back(std::int16_t(k));
    }
  }
};

class ModelSearch {
 public:
  ModelSearch(std::span<const Law> positive, std::span<const Law> negative,
              std::size_t n, const SearchBudget& budget)
      : n_(int(n)), cells_(int(n * n)), budget_(budget),
        negative_(negative.begin(), negative.end()),
        positive_(positive.begin(), positive.end()) {
    if (n < 1) throw std::invalid_argument("model size must be positive");
    if (n > 64) throw std::invalid_argument("model size above 64 unsupported");
    full_ = n == 64 ? ~0ull : ((1ull << n) - 1);
    value_.assign(cells_, -1);
    domain_.assign(cells_, full_);
    stamp_.assign(cells_, 0);
    watches_.assign(cells_, {});
    watch_count_.assign(cells_, 0);
    lines_.assign(2 * n, {});
    for (const Law& law : positive) {
      LawInstances li{SideProgram(law.lhs), SideProgram(law.rhs),
                      std::max(1, law.var_bound()), 0, {}};
      std::uint64_t count = 1;
      for (int i = 0; i < li.vars; ++i) {
        count *= std::uint64_t(n);
        if (count > (1u << 26))
          throw std::invalid_argument("too many ground instances for this size");
      }
      li.first_instance = std::uint32_t(instance_law_.size());
      li.digits.resize(count * li.vars);
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t rest = idx;
        for (int v = 0; v < li.vars; ++v) {
          li.digits[idx * li.vars + v] = std::uint8_t(rest % n);
          rest /= n;
        }
        instance_law_.push_back(std::uint32_t(laws_.size()));
      }
      laws_.push_back(std::move(li));
    }
    instance_watch_.assign(instance_law_.size(), -1);
    instance_line_.assign(instance_law_.size(), -1);
    for (const Law& law : positive) {
      for (const auto& [bare, product] : {std::pair{law.lhs, law.rhs}, std::pair{law.rhs, law.lhs}}) {
        if (!bare.is_var() || product.is_var()) continue;
        const Word l = product.left(), r = product.right();
        if (l.is_var() && l.var_index() != bare.var_index()) permuting_rows_ = true;
        if (r.is_var() && r.var_index() != bare.var_index()) permuting_cols_ = true;
      }
    }
  }

  SearchResult run() {
    start_ = std::chrono::steady_clock::now();
    SearchResult result;
    result.size = std::size_t(n_);
    bool ok = true;
    for (std::uint32_t i = 0; i < instance_law_.size() && ok; ++i)
      ok = process_instance(i);
    if (ok) ok = propagate();
    Verdict v = Verdict::Exhausted;
    if (ok) v = search(-1);
    result.verdict = v;
    result.nodes = nodes_;
    if (v == Verdict::Found) result.model = found_;
    result.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    return result;
  }

 private:
  struct LawInstances {
    SideProgram lhs, rhs;
    int vars;
    std::uint32_t first_instance;
    std::vector<std::uint8_t> digits;
  };

  struct Eval {
    int value = -1;    // >= 0 when fully evaluated
    int blocked = -1;  // first cell with known arguments and no value
    bool root = false; // the blocked cell is the side's outermost product
    int line = -1;     // row s (s) or column s (n + s) holding the blocked cell's parent
    int latest = -1;   // latest-assigned cell read during evaluation
    int at = 0;        // position of the blocked operation
    int top = 0;       // operand stack as it stood there
    std::uint8_t stack[64];
  };

  enum class Undo : std::uint8_t { Domain, Assignment, Watch, Line };

  // Watch and Line entries store the instance id in `old`.
  struct TrailEntry {
    int cell;
    std::uint64_t old;
    Undo kind;
  };

  // Value of the postfix slice [from, to), or -1 if some cell is undefined.
  int eval_slice(const SideProgram& side, const std::uint8_t* digits, std::size_t from,
                 std::size_t to) const {
    int stack[128];
    int top = 0;
    for (std::size_t k = from; k < to; ++k) {
      const auto op = side.ops[k];
      if (op >= 0) {
        stack[top++] = digits[op];
        continue;
      }
      --top;
      const int v = value_[stack[top - 1] * n_ + stack[top]];
      if (v < 0) return -1;
      stack[top - 1] = v;
    }
    return stack[0];
  }

  Eval evaluate(const SideProgram& side, const std::uint8_t* digits) const {
    Eval e;
    std::uint8_t* stack = e.stack;
    int top = 0;
    std::uint32_t best = 0;
    const auto& ops = side.ops;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const auto op = ops[k];
      if (op >= 0) {
        stack[top++] = digits[op];
        continue;
      }
      --top;
      const int cell = stack[top - 1] * n_ + stack[top];
      const int v = value_[cell];
      if (v < 0) {
        e.blocked = cell;
        e.at = int(k);
        e.top = top;
        e.root = k + 1 == ops.size();
        if (!e.root) {
          const std::size_t p = std::size_t(side.parent[k]);
          if (!side.left[k]) {
            e.line = stack[top - 2];
          } else {
            const int sib = eval_slice(side, digits, k + 1, p);
            if (sib >= 0) e.line = n_ + sib;
          }
        }
        return e;
      }
      if (stamp_[cell] >= best) {
        best = stamp_[cell];
        e.latest = cell;
      }
      stack[top - 1] = std::uint8_t(v);
    }
    e.value = stack[0];
    return e;
  }

  // Finishes a blocked evaluation with `v` in the blocked cell; -1 if another
  // undefined cell is reached.
  int resume(const SideProgram& side, const std::uint8_t* digits, const Eval& e, int v) const {
    std::uint8_t stack[64];
    std::copy(e.stack, e.stack + e.top, stack);
    int top = e.top;
    stack[top - 1] = std::uint8_t(v);
    const auto& ops = side.ops;
    for (std::size_t k = std::size_t(e.at) + 1; k < ops.size(); ++k) {
      const auto op = ops[k];
      if (op >= 0) {
        stack[top++] = digits[op];
        continue;
      }
      --top;
      const int w = value_[stack[top - 1] * n_ + stack[top]];
      if (w < 0) return -1;
      stack[top - 1] = std::uint8_t(w);
    }
    return stack[0];
  }

  void set_watch(std::uint32_t inst, int cell) {
    if (instance_watch_[inst] >= 0) --watch_count_[instance_watch_[inst]];
    instance_watch_[inst] = cell;
    if (cell >= 0) {
      ++watch_count_[cell];
      watches_[cell].push_back(inst);
    }
  }

  void set_line(std::uint32_t inst, int line) {
    instance_line_[inst] = line;
    if (line >= 0) lines_[line].push_back(inst);
  }

  bool assign(int cell, int v) {
    if (!(domain_[cell] >> v & 1)) return false;
    trail_.push_back({cell, domain_[cell], Undo::Assignment});
    value_[cell] = v;
    domain_[cell] = 1ull << v;
    stamp_[cell] = ++clock_;
    queue_.push_back(cell);
    const int row = cell / n_, col = cell % n_;
    const std::uint64_t others = ~(1ull << v);
    if (permuting_rows_)
      for (int c = row * n_; c < (row + 1) * n_; ++c)
        if (c != cell && !restrict_domain(c, others)) return false;
    if (permuting_cols_)
      for (int c = col; c < cells_; c += n_)
        if (c != cell && !restrict_domain(c, others)) return false;
    return true;
  }

  // In a line that must be a permutation, a value with a single possible
  // cell goes there.
  bool settle_line(int first, int step) {
    std::uint64_t once = 0, twice = 0;
    for (int k = 0, c = first; k < n_; ++k, c += step) {
      twice |= once & domain_[c];
      once |= domain_[c];
    }
    if (once != full_) return false;
    for (std::uint64_t d = once & ~twice; d; d &= d - 1) {
      const int v = std::countr_zero(d);
      for (int k = 0, c = first; k < n_; ++k, c += step)
        if (value_[c] < 0 && (domain_[c] >> v & 1) && !assign(c, v)) return false;
    }
    return true;
  }

  bool restrict_domain(int cell, std::uint64_t keep) {
    const std::uint64_t nd = domain_[cell] & keep;
    if (nd == domain_[cell]) return true;
    if (nd == 0) return false;
    trail_.push_back({cell, domain_[cell], Undo::Domain});
    domain_[cell] = nd;
    if (std::popcount(nd) == 1) return assign(cell, std::countr_zero(nd));
    return true;
  }

  // Hypothetically tries each candidate of `cell` and drops those that make
  // the blocked side evaluate to something other than `target`.
  bool eliminate(const Eval& open, const SideProgram& side, const std::uint8_t* digits,
                 int target) {
    const int cell = open.blocked;
    std::uint64_t keep = 0;
    for (std::uint64_t d = domain_[cell]; d; d &= d - 1) {
      const int v = std::countr_zero(d);
      value_[cell] = v;
      const int got = resume(side, digits, open, v);
      if (got < 0 || got == target) keep |= 1ull << v;
    }
    value_[cell] = -1;
    return restrict_domain(cell, keep);
  }

  // Re-evaluates one ground instance, propagating what it forces and moving
  // its watches. Returns false on conflict.
  bool process_instance(std::uint32_t inst) {
    const LawInstances& li = laws_[instance_law_[inst]];
    const std::uint8_t* digits =
        li.digits.data() + std::size_t(inst - li.first_instance) * li.vars;
    const Eval l = evaluate(li.lhs, digits);
    const Eval r = evaluate(li.rhs, digits);
    int target = -1, line = -1;
    bool ok = true;
    if (l.value >= 0 && r.value >= 0) {
      if (l.value != r.value) return false;
      target = std::max(l.latest, r.latest, [&](int a, int b) {
        return (a < 0 ? 0 : stamp_[a]) < (b < 0 ? 0 : stamp_[b]);
      });
    } else if (l.value >= 0 || r.value >= 0) {
      const Eval& known = l.value >= 0 ? l : r;
      const Eval& open = l.value >= 0 ? r : l;
      const SideProgram& open_side = l.value >= 0 ? li.rhs : li.lhs;
      target = open.blocked;
      line = open.line;
      if (open.root)
        ok = assign(open.blocked, known.value);
      else
        ok = eliminate(open, open_side, digits, known.value);
    } else {
      target = l.blocked;
    }
    if (target != instance_watch_[inst]) {
      trail_.push_back({instance_watch_[inst], inst, Undo::Watch});
      set_watch(inst, target);
    }
    if (line != instance_line_[inst]) {
      trail_.push_back({instance_line_[inst], inst, Undo::Line});
      set_line(inst, line);
    }
    return ok;
  }

  // Runs every instance registered on `list` whose registration is current.
  // `candidate` (when >= 0) skips instances whose blocked cell cannot take
  // that value.
  template <class Current>
  bool scan(std::vector<std::uint32_t>& list, Current current, int candidate = -1) {
    for (std::size_t i = 0; i < list.size();) {
      const std::uint32_t inst = list[i];
      if (!current(inst)) {
        list[i] = list.back();
        list.pop_back();
        continue;
      }
      if (candidate >= 0 && !(domain_[instance_watch_[inst]] >> candidate & 1)) {
        ++i;
        continue;
      }
      const bool ok = process_instance(inst);
      if (!current(inst)) {
        list[i] = list.back();
        list.pop_back();
      } else {
        ++i;
      }
      if (!ok) return false;
    }
    return true;
  }

  bool propagate() {
    while (qhead_ < queue_.size()) {
      const int cell = queue_[qhead_++];
      const int row = cell / n_, col = cell % n_;
      if (permuting_rows_ && !settle_line(row * n_, 1)) return false;
      if (permuting_cols_ && !settle_line(col, n_)) return false;
      if (!scan(watches_[cell], [&](std::uint32_t i) { return instance_watch_[i] == cell; }))
        return false;
      if (!scan(lines_[row], [&](std::uint32_t i) { return instance_line_[i] == row; }, col))
        return false;
      if (!scan(lines_[n_ + col],
                [&](std::uint32_t i) { return instance_line_[i] == n_ + col; }, row))
        return false;
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const TrailEntry& t = trail_.back();
      switch (t.kind) {
        case Undo::Watch: set_watch(std::uint32_t(t.old), t.cell); break;
        case Undo::Line: set_line(std::uint32_t(t.old), t.cell); break;
        case Undo::Assignment: value_[t.cell] = -1; [[fallthrough]];
        case Undo::Domain: domain_[t.cell] = t.old; break;
      }
      trail_.pop_back();
    }
    queue_.clear();
    qhead_ = 0;
  }

  bool out_of_budget() {
    if (nodes_ >= budget_.max_nodes) return true;
    if (budget_.time_limit.count() > 0 && (nodes_ & 255) == 0)
      return std::chrono::steady_clock::now() - start_ > budget_.time_limit;
    return false;
  }

  FiniteMagma current_table() const {
    std::vector<Elem> t(cells_);
    for (int c = 0; c < cells_; ++c) t[c] = Elem(value_[c]);
    return FiniteMagma(std::size_t(n_), std::move(t));
  }

  // Least-number heuristic: a cell whose row and column are at most m, with
  // m the largest element mentioned by any decision so far, may only take
  // values up to m + 1.
  std::uint64_t lnh_mask(int cell, int designated) const {
    const int m = std::max({designated, cell / n_, cell % n_});
    return m + 2 >= n_ ? full_ : ((1ull << (m + 2)) - 1);
  }

  Verdict search(int designated) {
    int best = -1;
    long best_size = 1L << 40;
    for (int c = 0; c < cells_; ++c) {
      if (value_[c] >= 0) continue;
      const int s = std::popcount(domain_[c] & lnh_mask(c, designated));
      // cells inside the LNH band first, then the cell most instances wait on,
      // then fewest values
      const int band = std::max(c / n_, c % n_);
      long key = (band > designated ? (1L << 30) : 0) - watch_count_[c] * 100L + s;
      if (s <= 1) key = -1;
      if (key < best_size) {
        best_size = key;
        best = c;
        if (s <= 1) break;
      }
    }
    if (best < 0) {
      FiniteMagma m = current_table();
      for (const Law& law : negative_)
        if (satisfies(m, law)) return Verdict::Exhausted;
      for (const Law& law : positive_)
        if (!satisfies(m, law)) return Verdict::Exhausted;
      found_ = std::move(m);
      return Verdict::Found;
    }
    const std::uint64_t candidates = domain_[best] & lnh_mask(best, designated);
    for (std::uint64_t d = candidates; d; d &= d - 1) {
      if (out_of_budget()) return Verdict::BudgetExceeded;
      ++nodes_;
      const int v = std::countr_zero(d);
      const std::size_t mark = trail_.size();
      const int next = std::max({designated, best / n_, best % n_, v});
      Verdict r = Verdict::Exhausted;
      if (assign(best, v) && propagate()) r = search(next);
      if (r == Verdict::Found) return r;
      undo_to(mark);
      if (r == Verdict::BudgetExceeded) return r;
    }
    return Verdict::Exhausted;
  }

  int n_, cells_;
  std::uint64_t full_ = 0;
  // Set when some positive law reads x = y ⋄ t (rows) or x = t ⋄ y (columns):
  // surjective translations of a finite set are bijective.
  bool permuting_rows_ = false, permuting_cols_ = false;
  SearchBudget budget_;
  std::vector<Law> negative_, positive_;
  std::vector<LawInstances> laws_;
  std::vector<std::uint32_t> instance_law_;
  std::vector<int> instance_watch_, instance_line_;
  std::vector<std::vector<std::uint32_t>> watches_, lines_;
  std::vector<int> watch_count_;
  std::vector<int> value_;
  std::vector<std::uint64_t> domain_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t clock_ = 0;
  std::vector<TrailEntry> trail_;
  std::vector<int> queue_;
  std::size_t qhead_ = 0;
  std::uint64_t nodes_ = 0;
  std::chrono::steady_clock::time_point start_;
  std::optional<FiniteMagma> found_;
};

}  // namespace detail

/// Searches for a magma of exactly `size` elements satisfying every positive
/// law and violating every negative law.
inline SearchResult find_model(std::span<const Law> positive, std::span<const Law> negative,
                               std::size_t size, const SearchBudget& budget = {}) {
  return detail::ModelSearch(positive, negative, size, budget).run();
}

struct SmallestModel {
  std::optional<std::size_t> size;
  std::optional<FiniteMagma> model;
  /// Verdict at each size tried, starting from size 2.
  std::vector<SearchResult> per_size;

  /// True when some size below the answer (or below max_size) is indefinite.
  bool indefinite() const {
    for (const auto& r : per_size)
      if (r.verdict == Verdict::BudgetExceeded) return true;
    return false;
  }
};

/// Least size in [2, max_size] with a model of `law`.
inline SmallestModel smallest_nontrivial_model(const Law& law, std::size_t max_size,
                                               const SearchBudget& budget = {}) {
  if (max_size < 2) throw std::invalid_argument("max_size must be at least 2");
  SmallestModel out;
  const Law positive[] = {law};
  for (std::size_t s = 2; s <= max_size; ++s) {
    auto r = find_model(positive, {}, s, budget);
    const bool found = r.verdict == Verdict::Found;
    if (found) {
      out.size = s;
      out.model = r.model;
    }
    out.per_size.push_back(std::move(r));
    if (found) break;
  }
  return out;
}

/// Calls f(magma) for every table on `size` elements (size^(size²) of them).
template <class F>
void for_each_table(std::size_t size, F&& f) {
  const std::size_t cells = size * size;
  std::vector<Elem> t(cells, 0);
  for (;;) {
    FiniteMagma m(size, t);
    f(static_cast<const FiniteMagma&>(m));
    std::size_t i = cells;
    while (i > 0 && ++t[i - 1] == size) t[--i] = 0;
    if (i == 0) return;
  }
}

/// For each law, whether some magma of exactly `size` elements satisfies it.
/// Sizes up to 3 scan every table; larger sizes run the finder per law (a
/// budget overrun reports false and is flagged in `indefinite`).
inline std::vector<bool> exhaust_and_classify(std::span<const Law> laws, std::size_t size,
                                              const SearchBudget& budget = {},
                                              std::vector<bool>* indefinite = nullptr) {
  std::vector<bool> has(laws.size(), false);
  if (indefinite) indefinite->assign(laws.size(), false);
  if (size <= 3) {
    std::vector<CompiledLaw> compiled;
    compiled.reserve(laws.size());
    for (const Law& l : laws) compiled.emplace_back(l);
    std::vector<std::size_t> open(laws.size());
    for (std::size_t i = 0; i < open.size(); ++i) open[i] = i;
    for_each_table(size, [&](const FiniteMagma& m) {
      for (std::size_t k = 0; k < open.size();) {
        if (compiled[open[k]].satisfied_by(m)) {
          has[open[k]] = true;
          open[k] = open.back();
          open.pop_back();
        } else {
          ++k;
        }
      }
    });
    return has;
  }
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const Law positive[] = {laws[i]};
    const auto r = find_model(positive, {}, size, budget);
    has[i] = r.verdict == Verdict::Found;
    if (indefinite) (*indefinite)[i] = r.verdict == Verdict::BudgetExceeded;
  }
  return has;
}

struct FactsResult {
  std::vector<std::size_t> satisfied;  // indices into the law list
  std::vector<std::size_t> violated;
};

/// Partitions `laws` by satisfaction in `m`.
inline FactsResult facts(const FiniteMagma& m, std::span<const Law> laws) {
  FactsResult out;
  for (std::size_t i = 0; i < laws.size(); ++i)
    (satisfies(m, laws[i]) ? out.satisfied : out.violated).push_back(i);
  return out;
}

}  // namespace magmalaws

#endif  // MAGMALAWS_FINDER_HPP
