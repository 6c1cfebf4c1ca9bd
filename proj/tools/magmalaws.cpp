// magmalaws: command-line front end.
//
// Every subcommand prints one JSON document (or a terse line with --quiet)
// carrying the hash of its effective configuration. Exit status: 0 definite
// result, 2 unknown / budget exhausted, 1 error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "magmalaws/constructions.hpp"
#include "magmalaws/finder.hpp"
#include "magmalaws/graph.hpp"
#include "magmalaws/invariants.hpp"
#include "magmalaws/linear.hpp"
#include "magmalaws/proof_check.hpp"
#include "magmalaws/prover.hpp"
#include "magmalaws/resolve.hpp"
#include "magmalaws/spectrum.hpp"

namespace ml = magmalaws;
using nlohmann::json;

namespace {

constexpr int kDefinite = 0;
constexpr int kError = 1;
constexpr int kIndefinite = 2;

struct Output {
  bool quiet = false;
  json config;

  // FNV-1a over the canonical config text.
  std::string config_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : config.dump()) h = (h ^ c) * 1099511628211ull;
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
  }

  void emit(json j, const std::string& plain) const {
    if (quiet) {
      std::cout << plain << '\n';
      return;
    }
    j["config_hash"] = config_hash();
    std::cout << j.dump(2) << '\n';
  }
};

// "43", "E43" or law text.
ml::Law law_arg(const std::string& s) {
  std::string t = s;
  if (!t.empty() && (t[0] == 'E' || t[0] == 'e')) t = t.substr(1);
  if (!t.empty() && t.find_first_not_of("0123456789") == std::string::npos)
    return ml::number_to_law(std::stoull(t), ml::kMaxRankedOrder);
  return ml::parse_law(s);
}

std::vector<ml::Law> law_list(const std::vector<std::string>& items) {
  std::vector<ml::Law> out;
  for (const auto& s : items) out.push_back(law_arg(s));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

ml::ImplGraph load_graph(const std::string& path, std::size_t max_order) {
  const std::string text = read_file(path);
  if (path.ends_with(".json")) {
    const json j = json::parse(text);
    ml::ImplGraph g(ml::ImplGraph::order_for_count(j.at("laws").get<std::size_t>()));
    g.import_json(j);
    return g;
  }
  ml::ImplGraph g(max_order);
  std::istringstream in(text);
  g.import_csv(in);
  return g;
}

std::string export_graph(const ml::ImplGraph& g, const std::string& format) {
  if (format == "csv") return g.to_csv();
  if (format == "json") return g.to_json().dump(1) + "\n";
  if (format == "dot") return g.to_dot();
  throw std::invalid_argument("format must be dot, json or csv");
}

ml::FiniteMagma magma_arg(const std::string& s) {
  if (s == "nand") return ml::FiniteMagma(2, {1, 1, 1, 0});
  if (s.starts_with("linear:")) {
    std::vector<std::int64_t> v;
    std::stringstream ss(s.substr(7));
    for (std::string part; std::getline(ss, part, ':');) v.push_back(std::stoll(part));
    if (v.size() < 3) throw std::invalid_argument("linear magma needs linear:n:a:b[:c]");
    return ml::linear_magma({v[0], ml::detail::mod(v[1], v[0]), ml::detail::mod(v[2], v[0]),
                             v.size() > 3 ? ml::detail::mod(v[3], v[0]) : 0});
  }
  if (std::filesystem::exists(s)) return ml::parse_magma(read_file(s));
  return ml::parse_magma(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equational laws of magmas: numbering, models, proofs and the implication graph"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("-q,--quiet", out.quiet, "Terse plain output instead of JSON");

  // budgets shared by several subcommands; MAGMALAWS_* variables override defaults
  std::uint64_t max_nodes = 50'000'000;
  std::int64_t time_limit_ms = 0;
  ml::ProverLimits limits;
  const auto add_finder_budget = [&](CLI::App* c) {
    c->add_option("--max-nodes", max_nodes, "Finder node budget")->envname("MAGMALAWS_MAX_NODES");
    c->add_option("--time-limit-ms", time_limit_ms, "Finder time budget (0 = none)")
        ->envname("MAGMALAWS_TIME_LIMIT_MS");
  };
  const auto add_prover_limits = [&](CLI::App* c) {
    c->add_option("--max-term-order", limits.max_term_order)->envname("MAGMALAWS_MAX_TERM_ORDER");
    c->add_option("--max-depth", limits.max_depth)->envname("MAGMALAWS_MAX_DEPTH");
    c->add_option("--max-states", limits.max_states)->envname("MAGMALAWS_MAX_STATES");
    c->add_option("--lemma-order", limits.lemma_order, "0 disables lemmas")
        ->envname("MAGMALAWS_LEMMA_ORDER");
    c->add_option("--lemma-term-order", limits.lemma_term_order)
        ->envname("MAGMALAWS_LEMMA_TERM_ORDER");
  };
  const auto budget = [&] {
    return ml::SearchBudget{max_nodes, std::chrono::milliseconds(time_limit_ms)};
  };
  const auto limits_json = [&] {
    return json{{"max_term_order", limits.max_term_order},
                {"max_depth", limits.max_depth},
                {"max_states", limits.max_states},
                {"lemma_order", limits.lemma_order},
                {"lemma_term_order", limits.lemma_term_order}};
  };
  int status = kDefinite;

  // enumerate
  std::size_t max_order = 2;
  bool counts_only = false;
  auto* enumerate = app.add_subcommand("enumerate", "List laws in numbering order");
  enumerate->add_option("--max-order", max_order)->required();
  enumerate->add_flag("--counts", counts_only, "Only per-order counts");
  enumerate->callback([&] {
    out.config = {{"cmd", "enumerate"}, {"max_order", max_order}, {"counts", counts_only}};
    json counts = json::array();
    std::size_t total = 0;
    for (std::size_t k = 0; k <= max_order; ++k) {
      counts.push_back(ml::count_laws(k));
      total += ml::count_laws(k);
    }
    json j{{"counts", counts}, {"total", total}};
    if (!counts_only) {
      json laws = json::array();
      ml::LawNumber n = 0;
      for (const auto& l : ml::enumerate_laws(max_order)) laws.push_back({{"n", ++n}, {"law", ml::render_law(l)}});
      j["laws"] = laws;
    }
    std::string plain = std::to_string(total);
    out.emit(j, plain);
  });

  // number
  std::string law_text;
  auto* number = app.add_subcommand("number", "Number of a law");
  number->add_option("law", law_text)->required();
  number->callback([&] {
    out.config = {{"cmd", "number"}, {"law", law_text}};
    const ml::Law norm = ml::normalize(ml::parse_law(law_text));
    const auto n = ml::law_number(norm);
    out.emit({{"number", n}, {"normal_form", ml::render_law(norm)}}, std::to_string(n));
  });

  // dual
  std::string dual_arg;
  auto* dualc = app.add_subcommand("dual", "Number of the dual law");
  dualc->add_option("law", dual_arg)->required();
  dualc->callback([&] {
    out.config = {{"cmd", "dual"}, {"law", dual_arg}};
    const ml::Law d = ml::normalize(ml::dual(law_arg(dual_arg)));
    const auto n = ml::law_number(d);
    out.emit({{"dual", n}, {"law", ml::render_law(d)}}, std::to_string(n));
  });

  // prove
  std::string hyp_arg, target_arg;
  auto* prove = app.add_subcommand("prove", "Search for a rewrite proof hyp ⊨ target");
  prove->add_option("hyp", hyp_arg)->required();
  prove->add_option("target", target_arg)->required();
  add_prover_limits(prove);
  prove->callback([&] {
    out.config = {{"cmd", "prove"}, {"hyp", hyp_arg}, {"target", target_arg}, {"limits", limits_json()}};
    const auto cert = ml::prove(law_arg(hyp_arg), law_arg(target_arg), limits);
    if (!cert) {
      out.emit({{"result", "unknown"}}, "unknown");
      status = kIndefinite;
      return;
    }
    const auto check = ml::check_proof(*cert);
    out.emit({{"result", "proved"}, {"certificate", ml::to_json(*cert)}, {"checked", check.valid()}},
             "proved " + std::to_string(cert->steps.size()) + " steps");
    if (!check.valid()) status = kError;
  });

  // check-proof
  std::string cert_path;
  auto* checkp = app.add_subcommand("check-proof", "Replay a certificate JSON file");
  checkp->add_option("file", cert_path)->required()->check(CLI::ExistingFile);
  checkp->callback([&] {
    out.config = {{"cmd", "check-proof"}, {"file", cert_path}};
    json j;
    try {
      j = json::parse(read_file(cert_path));
    } catch (const json::exception&) {
      j = nullptr;
    }
    // accept the output of `prove` as well as a bare certificate
    if (j.is_object() && j.contains("certificate")) j = j["certificate"];
    const auto r = ml::check_proof_json(j);
    const char* names[] = {"valid", "mismatch", "malformed"};
    out.emit({{"status", names[int(r.status)]}, {"step", r.step}, {"detail", r.detail}},
             names[int(r.status)]);
    if (!r.valid()) status = kError;
  });

  // find-model
  std::vector<std::string> positive, negative;
  std::size_t size = 2;
  auto* findm = app.add_subcommand("find-model", "Search for a model of a given size");
  findm->add_option("--positive", positive, "Laws the model satisfies")->required()->delimiter(',');
  findm->add_option("--negative", negative, "Laws the model violates")->delimiter(',');
  findm->add_option("--size", size)->required();
  add_finder_budget(findm);
  findm->callback([&] {
    out.config = {{"cmd", "find-model"}, {"positive", positive}, {"negative", negative},
                  {"size", size}, {"max_nodes", max_nodes}, {"time_limit_ms", time_limit_ms}};
    const auto pos = law_list(positive), neg = law_list(negative);
    const auto r = ml::find_model(pos, neg, size, budget());
    json j = ml::to_json(r);
    j.erase("millis");
    out.emit(j, ml::to_string(r.verdict));
    if (r.verdict == ml::Verdict::BudgetExceeded) status = kIndefinite;
  });

  // exhaust
  std::string exhaust_law;
  std::size_t max_size = 4;
  auto* exhaust = app.add_subcommand("exhaust", "Smallest nontrivial model of a law");
  exhaust->add_option("law", exhaust_law)->required();
  exhaust->add_option("--max-size", max_size);
  add_finder_budget(exhaust);
  exhaust->callback([&] {
    out.config = {{"cmd", "exhaust"}, {"law", exhaust_law}, {"max_size", max_size},
                  {"max_nodes", max_nodes}, {"time_limit_ms", time_limit_ms}};
    const auto r = ml::smallest_nontrivial_model(law_arg(exhaust_law), max_size, budget());
    json sizes = json::array();
    std::size_t s = 2;
    for (const auto& p : r.per_size) sizes.push_back({{"size", s++}, {"verdict", ml::to_string(p.verdict)}});
    json j{{"per_size", sizes}, {"size", r.size ? json(*r.size) : json(nullptr)}};
    if (r.model) j["model"] = ml::magma_to_json(*r.model)["table"];
    const bool definite = !r.indefinite();
    out.emit(j, r.size ? std::to_string(*r.size) : (definite ? "none" : "unknown"));
    if (!definite) status = kIndefinite;
  });

  // sweep-linear
  std::vector<std::int64_t> moduli{2, 3, 5, 7, 11};
  bool affine = false;
  auto* sweep = app.add_subcommand("sweep-linear", "Linear models refuting hyp ⊨ target");
  sweep->add_option("hyp", hyp_arg)->required();
  sweep->add_option("target", target_arg)->required();
  sweep->add_option("--moduli", moduli)->delimiter(',');
  sweep->add_flag("--affine", affine, "Also try x⋄y = ax+by+c");
  sweep->callback([&] {
    out.config = {{"cmd", "sweep-linear"}, {"hyp", hyp_arg}, {"target", target_arg},
                  {"moduli", moduli}, {"affine", affine}};
    const auto hit = ml::linear_sweep(law_arg(hyp_arg), law_arg(target_arg), moduli, affine);
    if (!hit) {
      out.emit({{"result", "none"}}, "none");
      status = kIndefinite;
      return;
    }
    const auto& m = hit->model;
    out.emit({{"result", "refuted"}, {"n", m.n}, {"a", m.a}, {"b", m.b}, {"c", m.c}},
             "refuted n=" + std::to_string(m.n) + " a=" + std::to_string(m.a) +
                 " b=" + std::to_string(m.b) + " c=" + std::to_string(m.c));
  });

  // invariants
  auto* inv = app.add_subcommand("invariants", "Syntactic refutations of hyp ⊨ target");
  inv->add_option("hyp", hyp_arg)->required();
  inv->add_option("target", target_arg)->required();
  inv->callback([&] {
    out.config = {{"cmd", "invariants"}, {"hyp", hyp_arg}, {"target", target_arg}};
    const ml::Law h = law_arg(hyp_arg), t = law_arg(target_arg);
    json witnesses = json::array();
    for (const auto& kind : ml::standard_invariants())
      if (auto w = ml::invariant_refute(h, t, kind)) witnesses.push_back(ml::to_json(*w));
    if (auto w = ml::canonizer_refute_witness(h, t)) witnesses.push_back(ml::to_json(*w));
    const bool refuted = !witnesses.empty();
    out.emit({{"result", refuted ? "refuted" : "unknown"}, {"witnesses", witnesses}},
             refuted ? "refuted" : "unknown");
    if (!refuted) status = kIndefinite;
  });

  // twist
  std::string base_arg = "nand";
  std::size_t power = 1;
  std::int64_t shift_left = 0, shift_right = 0;
  std::vector<std::string> check_laws;
  bool print_table = false;
  auto* twist = app.add_subcommand("twist", "Twisted Cartesian power of a base magma");
  twist->add_option("--base", base_arg, "nand, linear:n:a:b[:c], a JSON table or a file");
  twist->add_option("--power", power)->required();
  twist->add_option("--shift-left", shift_left);
  twist->add_option("--shift-right", shift_right);
  twist->add_option("--check", check_laws, "Laws to test on the result")->delimiter(',');
  twist->add_flag("--table", print_table, "Include the table");
  twist->callback([&] {
    out.config = {{"cmd", "twist"}, {"base", base_arg}, {"power", power}, {"shift_left", shift_left},
                  {"shift_right", shift_right}, {"check", check_laws}};
    const auto m = ml::twisted_power({magma_arg(base_arg), power, shift_left, shift_right});
    json checks = json::object();
    std::string plain = std::to_string(m.size());
    for (const auto& s : check_laws) {
      const bool ok = ml::satisfies(m, law_arg(s));
      checks[s] = ok;
      plain += " " + s + "=" + (ok ? "1" : "0");
    }
    json j{{"size", m.size()}, {"satisfies", checks}};
    if (print_table) j["table"] = ml::magma_to_json(m)["table"];
    out.emit(j, plain);
  });

  // cohomology
  std::int64_t p = 5, ca = 0, cb = 0;
  std::string coh_law;
  std::vector<std::string> coh_check;
  auto* coh = app.add_subcommand("cohomology", "Cocycle space of affine extensions");
  coh->add_option("--base", base_arg, "nand, linear:n:a:b[:c], a JSON table or a file")->required();
  coh->add_option("--p", p)->required();
  coh->add_option("--a", ca)->required();
  coh->add_option("--b", cb)->required();
  coh->add_option("--law", coh_law)->required();
  coh->callback([&] {
    out.config = {{"cmd", "cohomology"}, {"base", base_arg}, {"p", p}, {"a", ca}, {"b", cb}, {"law", coh_law}};
    const auto g = magma_arg(base_arg);
    const auto sys = ml::cocycle_system(g, p, ca, cb, law_arg(coh_law));
    const auto space = ml::solve_cocycles(sys);
    out.emit(ml::to_json(space, g.size()), "dimension " + std::to_string(space.dimension));
  });

  // close
  std::string input, output, format = "json";
  auto* closec = app.add_subcommand("close", "Close an edge list and report");
  closec->add_option("--input", input, "Edge CSV or graph JSON")->required()->check(CLI::ExistingFile);
  closec->add_option("--max-order", max_order, "Law range for CSV input");
  closec->add_option("--output", output, "Write the closed graph here");
  closec->add_option("--format", format, "dot, json or csv")->check(CLI::IsMember({"dot", "json", "csv"}));
  closec->callback([&] {
    out.config = {{"cmd", "close"}, {"input", input}, {"max_order", max_order}, {"format", format}};
    auto g = load_graph(input, max_order);
    const auto report = g.close();
    json incs = json::array();
    for (const auto& i : report.inconsistencies)
      incs.push_back({{"src", i.src}, {"dst", i.dst}, {"relation", ml::to_string(i.relation)},
                      {"implied_by", i.implied_by}, {"refuted_by", i.refuted_by}});
    if (!output.empty()) write_file(output, export_graph(g, format));
    out.emit({{"resolved", report.resolved}, {"inconsistencies", incs}, {"stats", g.stats()}},
             std::to_string(report.inconsistencies.size()) + " inconsistencies");
    if (!report.inconsistencies.empty()) status = kError;
  });

  // resolve
  std::string out_dir = ".";
  unsigned workers = 0;
  ml::ResolveConfig rc;
  auto* resolve = app.add_subcommand("resolve", "Run the resolution pipeline");
  resolve->add_option("--max-order", rc.max_order)->required();
  resolve->add_option("--out-dir", out_dir);
  resolve->add_option("--workers", workers, "0 = all cores");
  resolve->add_option("--moduli", rc.moduli)->delimiter(',');
  resolve->add_option("--finder-size", rc.finder_size);
  resolve->callback([&] {
    rc.workers = workers;
    out.config = {{"cmd", "resolve"}, {"pipeline", ml::to_json(rc)}};
    const auto res = ml::resolve_all(rc);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "graph.csv", res.graph.to_csv());
    write_file(dir / "graph.json", res.graph.to_json().dump(1) + "\n");
    write_file(dir / "graph.dot", res.graph.to_dot());
    json stages = json::array();
    for (const auto& s : res.stages) stages.push_back({{"stage", s.name}, {"facts", s.facts}});
    json unknown = json::array();
    for (auto [a, b] : res.unknown) unknown.push_back({a, b});
    json j{{"stats", res.graph.stats()}, {"stages", stages}, {"unknown", unknown}};
    j["config_hash"] = out.config_hash();
    write_file(dir / "stats.json", j.dump(2) + "\n");
    out.emit(j, std::to_string(res.unknown.size()) + " unknown");
    if (res.graph.poisoned()) status = kError;
    else if (!res.unknown.empty()) status = kIndefinite;
  });

  // spectrum
  std::string csv_path;
  std::size_t spectrum_order = 4;
  auto* spectrum = app.add_subcommand("spectrum", "Full-spectrum certificates and small sizes");
  spectrum->add_option("--max-order", spectrum_order);
  spectrum->add_option("--csv", csv_path, "Write the per-law report");
  spectrum->callback([&] {
    out.config = {{"cmd", "spectrum"}, {"max_order", spectrum_order}};
    const auto reports = ml::classify_spectrum(spectrum_order);
    if (!csv_path.empty()) write_file(csv_path, ml::spectrum_csv(reports));
    const auto summary = ml::summarize(reports);
    out.emit(ml::to_json(summary), std::to_string(summary.certified) + " certified");
  });

  // export
  auto* exportc = app.add_subcommand("export", "Convert a graph between formats");
  exportc->add_option("--input", input)->required()->check(CLI::ExistingFile);
  exportc->add_option("--max-order", max_order, "Law range for CSV input");
  exportc->add_option("--format", format)->required()->check(CLI::IsMember({"dot", "json", "csv"}));
  exportc->add_option("--output", output);
  exportc->callback([&] {
    out.config = {{"cmd", "export"}, {"input", input}, {"format", format}};
    auto g = load_graph(input, max_order);
    g.close();
    const std::string text = export_graph(g, format);
    if (output.empty()) std::cout << text;
    else write_file(output, text);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return status;
}
