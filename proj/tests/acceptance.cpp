// Acceptance suite: one PASS/FAIL line per criterion, each checked at its
// stated tolerance and time bound. Arguments select criteria by number.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "magmalaws/constructions.hpp"
#include "magmalaws/finder.hpp"
#include "magmalaws/graph.hpp"
#include "magmalaws/invariants.hpp"
#include "magmalaws/linear.hpp"
#include "magmalaws/numbering.hpp"
#include "magmalaws/proof_check.hpp"
#include "magmalaws/prover.hpp"
#include "magmalaws/resolve.hpp"
#include "magmalaws/spectrum.hpp"
#include "reference_laws.hpp"

using namespace magmalaws;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

Law E(LawNumber n) { return number_to_law(n, 4); }

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// --- independent brute force --------------------------------------------------

// Table-driven evaluation, separate from the library's evaluator.
std::size_t eval(const std::vector<std::size_t>& table, std::size_t n, const Word& w,
                 const std::vector<std::size_t>& env) {
  if (w.is_var()) return env[w.var_index()];
  return table[eval(table, n, w.left(), env) * n + eval(table, n, w.right(), env)];
}

bool holds(const std::vector<std::size_t>& table, std::size_t n, const Law& law) {
  const std::size_t vars = std::size_t(law.var_bound());
  std::vector<std::size_t> env(std::max<std::size_t>(vars, 1), 0);
  while (true) {
    if (eval(table, n, law.lhs, env) != eval(table, n, law.rhs, env)) return false;
    std::size_t k = 0;
    while (k < vars && ++env[k] == n) env[k++] = 0;
    if (k == vars) return true;
  }
}

// Calls f on every table of size n (as a flat row-major vector) until it returns true.
bool any_table(std::size_t n, const std::function<bool(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> t(n * n, 0);
  while (true) {
    if (f(t)) return true;
    std::size_t k = 0;
    while (k < t.size() && ++t[k] == n) t[k++] = 0;
    if (k == t.size()) return false;
  }
}

bool small_counterexample(const Law& hyp, const Law& goal, std::size_t max_size) {
  for (std::size_t n = 1; n <= max_size; ++n)
    if (any_table(n, [&](const auto& t) { return holds(t, n, hyp) && !holds(t, n, goal); }))
      return true;
  return false;
}

bool affine_counterexample(const Law& hyp, const Law& goal) {
  for (std::size_t n = 2; n <= 11; ++n)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          std::vector<std::size_t> t(n * n);
          for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) t[x * n + y] = (a * x + b * y + c) % n;
          if (holds(t, n, hyp) && !holds(t, n, goal)) return true;
        }
  return false;
}

// Leftmost/rightmost variable and variable multiplicities (optionally mod k)
// are preserved by every consequence of a law whose two sides agree on them.
bool syntactic_separation(const Law& hyp, const Law& goal) {
  const auto leftmost = [](Word w) {
    while (!w.is_var()) w = w.left();
    return w.var_index();
  };
  const auto rightmost = [](Word w) {
    while (!w.is_var()) w = w.right();
    return w.var_index();
  };
  const auto counts = [](const Word& w, unsigned k) {
    std::vector<unsigned> c(kNamedVars, 0);
    for (Var v : w.leaf_vars()) ++c[v];
    if (k) for (auto& x : c) x %= k;
    return c;
  };
  if (leftmost(hyp.lhs) == leftmost(hyp.rhs) && leftmost(goal.lhs) != leftmost(goal.rhs)) return true;
  if (rightmost(hyp.lhs) == rightmost(hyp.rhs) && rightmost(goal.lhs) != rightmost(goal.rhs))
    return true;
  for (unsigned k : {0u, 2u, 3u, 4u, 5u, 6u})
    if (counts(hyp.lhs, k) == counts(hyp.rhs, k) && counts(goal.lhs, k) != counts(goal.rhs, k))
      return true;
  return false;
}

bool witness_counterexample(const Law& hyp, const Law& goal, const Provenance& p) {
  if (p.method != "magma" && p.method != "finder") return false;
  try {
    const FiniteMagma m = parse_magma_witness(p.witness);
    std::vector<std::size_t> t(m.table().begin(), m.table().end());
    return holds(t, m.size(), hyp) && !holds(t, m.size(), goal);
  } catch (const std::exception&) {
    return false;
  }
}

// --- criteria -------------------------------------------------------------------

Outcome enumeration_counts() {
  const std::vector<std::size_t> expected = {2, 5, 39, 364, 4284};
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::size_t> got;
  for (std::size_t k = 0; k <= 4; ++k) got.push_back(enumerate_laws_of_order(k).size());
  const std::size_t total = enumerate_laws(4).size();
  const double base_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::size_t order5 = enumerate_laws_of_order(5).size();
  return {got == expected && total == 4694 && base_secs < 60 && order5 == 57882,
          "orders 0..4 = " + join(got) + ", total " + std::to_string(total) + " in " +
              std::to_string(base_secs) + " s, order 5 = " + std::to_string(order5)};
}

Outcome closed_form_counts() {
  bool ok = true;
  std::vector<std::size_t> got;
  for (std::size_t k = 0; k <= 4; ++k) {
    got.push_back(std::size_t(count_laws(k)));
    ok &= count_laws(k) == enumerate_laws_of_order(k).size();
  }
  return {ok, "count_laws 0..4 = " + join(got)};
}

Outcome numbering_anchors() {
  std::size_t good = 0, total = 0;
  std::string bad;
  for (const auto& [number, text] : reference::kNumberedLaws) {
    ++total;
    const LawNumber got = law_number(normalize(parse_law(text)));
    if (got == number) ++good;
    else bad += " E" + std::to_string(number) + "->" + std::to_string(got);
  }
  return {good == total, std::to_string(good) + "/" + std::to_string(total) + " anchors" + bad};
}

Outcome duality() {
  const auto laws = enumerate_laws(4);
  std::size_t involutive = 0;
  for (const Law& l : laws) involutive += dual(dual(l)) == l;
  const LawNumber d = law_number(dual(E(327)));
  return {d == 395 && involutive == laws.size(),
          "dual(E327) = E" + std::to_string(d) + ", involution on " + std::to_string(involutive) +
              "/" + std::to_string(laws.size())};
}

Outcome small_size_classification() {
  const auto s = summarize(classify_spectrum(4));
  return {s.no_size2 == 1558 && s.size2_not_size3 == 62,
          "no size 2: " + std::to_string(s.no_size2) +
              ", size 2 not 3: " + std::to_string(s.size2_not_size3)};
}

Outcome smallest_model_table() {
  // per order: counts at sizes 2, 3, 4, 5 and trivial-only
  const std::vector<std::vector<std::size_t>> expected = {
      {1, 0, 0, 0, 1}, {3, 0, 0, 0, 2}, {27, 0, 0, 0, 12}, {229, 14, 2, 0, 119}};
  bool ok = true;
  std::string detail;
  for (std::size_t order = 0; order <= 3; ++order) {
    std::vector<std::size_t> row(5, 0);
    std::size_t indefinite = 0;
    for (const Law& l : enumerate_laws_of_order(order)) {
      const auto r = smallest_nontrivial_model(l, 5);
      indefinite += r.indefinite();
      if (r.size) ++row[*r.size - 2];
      else ++row[4];
    }
    ok &= row == expected[order] && indefinite == 0;
    detail += (order ? "; order " : "order ") + std::to_string(order) + ": " + join(row);
  }
  return {ok, detail};
}

Outcome e1286_milestone() {
  const Law pos[] = {E(1286)};
  std::vector<std::size_t> exhausted;
  for (std::size_t s = 2; s <= 6; ++s)
    if (find_model(pos, {}, s).verdict == Verdict::Exhausted) exhausted.push_back(s);
  const auto r = find_model(pos, {}, 7);
  const bool found = r.verdict == Verdict::Found && satisfies(*r.model, E(1286));
  return {exhausted.size() == 5 && found,
          "exhausted sizes " + join(exhausted) + ", size 7 " + to_string(r.verdict)};
}

Outcome e677_milestone() {
  const Law pos[] = {E(677)};
  const auto r8 = find_model(pos, {}, 8);
  const auto r9 = find_model(pos, {}, 9);
  const bool found = r9.verdict == Verdict::Found && satisfies(*r9.model, E(677));
  return {r8.verdict == Verdict::Exhausted && found,
          "size 8 " + to_string(r8.verdict) + " (" + std::to_string(r8.millis) + " ms), size 9 " +
              to_string(r9.verdict) + " (" + std::to_string(r9.millis) + " ms)"};
}

Outcome linear_witness() {
  const ResolveConfig defaults;
  const auto hit = linear_sweep(E(1286), E(3), defaults.moduli, defaults.affine);
  if (!hit) return {false, "no witness"};
  const auto& m = hit->model;
  return {m == LinearModel{11, 1, 7, 0} && satisfies(hit->magma, E(1286)) && !satisfies(hit->magma, E(3)),
          "witness Z/" + std::to_string(m.n) + " a=" + std::to_string(m.a) + " b=" +
              std::to_string(m.b) + " c=" + std::to_string(m.c)};
}

Outcome twisting() {
  const FiniteMagma nand = FiniteMagma::from_function(2, [](Elem x, Elem y) { return Elem(1 - x * y); });
  const FiniteMagma t = twisted_power({nand, 5, 1, -1});
  const bool sat = satisfies(t, E(1485)), viol = !satisfies(t, E(151));
  return {t.size() == 32 && sat && viol, std::to_string(t.size()) + " elements, E1485 " +
                                             (sat ? "holds" : "fails") + ", E151 " +
                                             (viol ? "fails" : "holds")};
}

Outcome cohomology() {
  const FiniteMagma g = linear_magma({5, 3, 4, 0});
  const auto space = solve_cocycles(cocycle_system(g, 5, 3, -1, E(1110)));
  CocycleTable f(25);
  const auto pw = [](std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
  };
  for (std::int64_t x = 0; x < 5; ++x)
    for (std::int64_t y = 0; y < 5; ++y)
      f[x * 5 + y] = (pw(y, 5) + x * pw(y, 4) + pw(x, 2) * pw(y, 3) + 3 * pw(x, 3) * pw(y, 2) +
                      3 * pw(x, 4) * y) % 5;
  const FiniteMagma ext = affine_extension(g, 5, 3, -1, f);
  const bool sat = satisfies(ext, E(1110)), viol = !satisfies(ext, E(1629));
  return {space.dimension == 6 && ext.size() == 25 && sat && viol,
          "dimension " + std::to_string(space.dimension) + ", " + std::to_string(ext.size()) +
              " elements, E1110 " + (sat ? "holds" : "fails") + ", E1629 " + (viol ? "fails" : "holds")};
}

Outcome prover() {
  const ProverLimits small{6, 8, 50'000, 0, 10, 20'000};
  ProverLimits deep;
  deep.max_term_order = 8;
  deep.max_depth = 12;
  struct Goal {
    LawNumber hyp, target;
    ProverLimits lim;
  };
  const Goal goals[] = {{43, 4531, small}, {41, 46, small}, {46, 41, small}, {854, 378, deep}};
  bool ok = true;
  std::string detail;
  for (const auto& [h, t, lim] : goals) {
    const auto c = prove(E(h), E(t), lim);
    std::string verdict = "none";
    if (c) {
      const bool checked = check_proof(*c).valid();
      const bool sound = !small_counterexample(c->hyp, c->goal, 3);
      const bool one_step = h != 43 || c->steps.size() == 1;
      ok &= checked && sound && one_step;
      verdict = std::to_string(c->steps.size()) + " steps" + (checked ? "" : " UNCHECKED") +
                (sound ? "" : " UNSOUND");
    } else {
      ok = false;
    }
    detail += (detail.empty() ? "" : "; ") + ("E" + std::to_string(h) + "->E" + std::to_string(t) + ": ") + verdict;
  }
  return {ok, detail};
}

Outcome syntactic_refutations() {
  const auto kinds = standard_invariants(6);
  const auto refuted = [&](LawNumber h, LawNumber t) {
    for (const auto& k : kinds)
      if (invariant_refute(E(h), E(t), k)) return true;
    return false;
  };
  const bool inv = refuted(43, 4) && refuted(4, 5) && refuted(23, 3);
  const bool canon = canonizer_refute(parse_law("y*(x*(y*(y*y))) = x"), parse_law("x = (x*x)*(x*(x*x))"));
  return {inv && canon, std::string("invariants ") + (inv ? "refute all three" : "miss one") +
                            ", canonizer " + (canon ? "refutes" : "misses") + " the worked pair"};
}

Outcome spectrum() {
  std::size_t certified = 0;
  for (const Law& l : enumerate_laws(4)) certified += full_spectrum_by_linear(l).has_value();
  return {certified == 3068, std::to_string(certified) + " laws certified"};
}

Outcome graph_properties() {
  auto res = resolve_all(ResolveConfig{});
  ImplGraph& g = res.graph;
  const auto stats = g.stats();
  const double gen = stats["general"]["resolved_fraction"].get<double>();
  const double fin = stats["finite"]["resolved_fraction"].get<double>();
  const std::size_t bad = stats["inconsistencies"].get<std::size_t>();

  const std::string before = g.to_csv();
  g.close();
  const bool idempotent = g.to_csv() == before;

  bool symmetric = true;
  for (LawNumber a = 1; a <= g.size(); ++a)
    for (LawNumber b = 1; b <= g.size(); ++b)
      for (Relation r : {Relation::General, Relation::Finite})
        symmetric &= g.status(a, b, r) == g.status(g.dual_of(a), g.dual_of(b), r);

  const auto laws = enumerate_laws(2);
  std::mt19937 rng(2024);
  std::size_t agree = 0, sampled = 0;
  std::string disagreements;
  while (sampled < 20) {
    const LawNumber a = rng() % g.size() + 1, b = rng() % g.size() + 1;
    const Relation r = Relation(rng() % 2);
    const Status s = g.status(a, b, r);
    if (a == b || (s != Status::Implied && s != Status::Refuted)) continue;
    ++sampled;
    const Law& h = laws[a - 1];
    const Law& t = laws[b - 1];
    bool ok;
    if (s == Status::Implied) {
      ok = !small_counterexample(h, t, 3);
    } else {
      ok = small_counterexample(h, t, 3) || affine_counterexample(h, t) ||
           witness_counterexample(h, t, g.provenance(a, b, r)) ||
           (r == Relation::General && syntactic_separation(h, t));
    }
    agree += ok;
    if (!ok) disagreements += " E" + std::to_string(a) + "->E" + std::to_string(b) + "(" + to_string(r) + ")";
  }

  std::ostringstream detail;
  detail.precision(4);
  detail << "resolved general " << gen << ", finite " << fin << "; inconsistencies " << bad
         << "; idempotent " << (idempotent ? "yes" : "no") << "; dual-symmetric "
         << (symmetric ? "yes" : "no") << "; brute force agrees on " << agree << "/20" << disagreements;
  return {gen >= 0.95 && fin >= 0.95 && bad == 0 && idempotent && symmetric && agree == 20, detail.str()};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "enumeration counts", 60 + 600, enumeration_counts},
      {2, "closed form vs enumeration", 60, closed_form_counts},
      {3, "numbering anchors", 1, numbering_anchors},
      {4, "duality", 60, duality},
      {5, "size 2/3 classification", 600, small_size_classification},
      {6, "smallest-model table (orders 0-3)", 1800, smallest_model_table},
      {7, "E1286 milestone", 1200, e1286_milestone},
      {8, "E677 milestone", 3600, e677_milestone},
      {9, "linear witness for E1286 vs E3", 10, linear_witness},
      {10, "NAND twist", 1, twisting},
      {11, "cocycle space for E1110", 10, cohomology},
      {12, "prover certificates", 300, prover},
      {13, "syntactic refutations", 4, syntactic_refutations},
      {14, "full spectrum by linear models", 300, spectrum},
      {15, "graph properties on the order-2 slice", 1800, graph_properties},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.ok && in_time;
    failures += !pass;
    std::printf("criterion %2d %s: %s [%.2f s / %.0f s%s] %s\n", c.id, c.title, pass ? "PASS" : "FAIL",
                secs, c.limit_seconds, in_time ? "" : ", over time", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
