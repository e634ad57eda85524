// Copyright 2026 The sossubmod Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sossubmod/certify.hpp"
#include "sossubmod/dsopt.hpp"
#include "sossubmod/families.hpp"
#include "sossubmod/io.hpp"
#include "sossubmod/parallel.hpp"
#include "sossubmod/ratio.hpp"
#include "sossubmod/regression.hpp"
#include "sossubmod/rng.hpp"

namespace {

using namespace sossubmod;
using io::Json;

constexpr int kExitCertified = 0;
constexpr int kExitNotSos = 1;
constexpr int kExitNotSubmodular = 2;
constexpr int kExitIndeterminate = 3;
constexpr int kExitUsage = 64;     // bad arguments or unparsable input
constexpr int kExitCantCreate = 73;  // output exists without --force
constexpr int kExitFailure = 70;   // solver or internal failure

class OutputExists : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Global {
  int jobs = 1;
  std::string tolerance_path;
  bool force = false;
  bool sort = false;
  bool no_timing = false;
  ToleranceProfile tol;
};

int default_jobs() {
  if (const char* env = std::getenv("SOSSUBMOD_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid SOSSUBMOD_JOBS=" << env << "\n";
  }
  return 1;
}

Json tool_json() { return Json{{"name", "sossubmod"}, {"version", SOSSUBMOD_VERSION}}; }

Json report(const Global& g, const std::string& command, Json config, Json result) {
  config["jobs"] = g.jobs;
  config["tolerance"] = io::to_json(g.tol);
  return Json{{"tool", tool_json()}, {"command", command}, {"config", std::move(config)},
              {"result", std::move(result)}};
}

void write_output(const Global& g, const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  if (!g.force && std::filesystem::exists(path)) throw OutputExists(path + " exists; pass --force to overwrite");
  io::write_file(path, content, true);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Comment header plus rows; --sort orders the data rows.
std::string csv(const Global& g, const std::string& command, const Json& config, const std::string& header,
                std::vector<std::string> rows) {
  if (g.sort) std::sort(rows.begin(), rows.end());
  std::ostringstream out;
  Json echo = config;
  echo["jobs"] = g.jobs;
  echo["tolerance"] = io::to_json(g.tol);
  out << "# sossubmod " << SOSSUBMOD_VERSION << " " << command << "\n";
  out << "# config " << echo.dump() << "\n";
  out << header << "\n";
  for (const auto& r : rows) out << r << "\n";
  return out.str();
}

std::string num(double v) { return io::format_double(v); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SetFunction load_setfunction(const std::string& path) { return io::setfunction_from_json(io::read_json(path)); }

// --- certify -----------------------------------------------------------------

struct CertifyArgs {
  std::string input;
  std::optional<int> t;
  bool min_t = false;
  std::string out;
};

void print_report(const SubmodCertReport& r) {
  int failing = 0;
  for (const auto& p : r.pairs) {
    if (p.sos.verdict != SosVerdict::SOS) ++failing;
  }
  std::cout << "t=" << r.t << " verdict " << to_string(r.verdict) << " (" << r.pairs.size() - failing << "/"
            << r.pairs.size() << " pairs sos)\n";
  for (const auto& p : r.pairs) {
    if (p.sos.verdict == SosVerdict::SOS) continue;
    std::cout << "  pair (" << p.i << "," << p.j << ") " << to_string(p.sos.verdict) << " margin " << num(p.sos.margin)
              << " lower bound " << num(p.sos.lower_bound) << "\n";
  }
}

int run_certify(const Global& g, const CertifyArgs& a) {
  const SetFunction f = load_setfunction(a.input);
  Json config{{"input", a.input}};
  std::cout << "n=" << f.n() << " degree=" << f.degree() << "\n";

  if (a.min_t) {
    config["min_t"] = true;
    const MinimalTResult r = minimal_t(f, g.tol, g.jobs);
    std::cout << "t range [" << r.range.t_min << ", " << r.range.t_max << "]" << (r.modular ? " (modular)" : "")
              << "\n";
    for (const auto& rep : r.reports) print_report(rep);
    Json result{{"status", to_string(r.status)}, {"t_min", r.range.t_min}, {"t_max", r.range.t_max},
                {"modular", r.modular}};
    if (r.status == MinimalTStatus::FOUND) result["t"] = r.t;
    if (r.witness) {
      result["witness"] = Json{{"i", r.witness->i},
                               {"j", r.witness->j},
                               {"vertex", io::mask_string(r.witness->vertex, f.n())},
                               {"second_derivative", format_rational(r.witness->second_derivative)}};
    }
    Json levels = Json::array();
    for (const auto& rep : r.reports) levels.push_back(io::to_json(rep));
    result["certificates"] = std::move(levels);
    if (!a.out.empty()) write_output(g, a.out, dump(report(g, "certify", config, result)));
    switch (r.status) {
      case MinimalTStatus::FOUND:
        std::cout << "CERTIFIED at minimal t=" << r.t << "\n";
        return kExitCertified;
      case MinimalTStatus::NOT_SUBMODULAR:
        std::cout << "NOT_SUBMODULAR: d2F/dx" << r.witness->i << "dx" << r.witness->j << " = "
                  << format_rational(r.witness->second_derivative) << " at "
                  << io::mask_string(r.witness->vertex, f.n()) << "\n";
        return kExitNotSubmodular;
      case MinimalTStatus::CERT_GAP:
        std::cout << "no level certified: " << r.diagnostics << "\n";
        if (!r.reports.empty() && r.reports.back().verdict == CertVerdict::NOT_SOS) return kExitNotSos;
        return kExitIndeterminate;
    }
    return kExitFailure;
  }

  config["t"] = *a.t;
  if (f.n() <= kMaxEnumerationN) {
    const BruteForceResult bf = brute_force_submodular(f);
    if (!bf.submodular) {
      std::cout << "NOT_SUBMODULAR: d2F/dx" << bf.witness->i << "dx" << bf.witness->j << " = "
                << format_rational(bf.witness->second_derivative) << " at "
                << io::mask_string(bf.witness->vertex, f.n()) << "\n";
      Json result{{"status", "NOT_SUBMODULAR"},
                  {"witness", Json{{"i", bf.witness->i},
                                   {"j", bf.witness->j},
                                   {"vertex", io::mask_string(bf.witness->vertex, f.n())},
                                   {"second_derivative", format_rational(bf.witness->second_derivative)}}}};
      if (!a.out.empty()) write_output(g, a.out, dump(report(g, "certify", config, result)));
      return kExitNotSubmodular;
    }
  }
  const SubmodCertReport r = is_t_sos_submodular(f, *a.t, g.tol, g.jobs);
  print_report(r);
  if (!a.out.empty()) write_output(g, a.out, dump(report(g, "certify", config, io::to_json(r))));
  switch (r.verdict) {
    case CertVerdict::CERTIFIED:
      return kExitCertified;
    case CertVerdict::NOT_SOS:
      return kExitNotSos;
    case CertVerdict::INDETERMINATE:
      return kExitIndeterminate;
  }
  return kExitFailure;
}

// --- family ------------------------------------------------------------------

struct FamilyArgs {
  std::string spec;
  std::string out;
  bool values = false;
};

int run_family(const Global& g, const FamilyArgs& a) {
  const FamilySpec spec = io::familyspec_from_json(io::read_json(a.spec));
  Json doc;
  if (a.values) {
    doc = io::to_json(build_values(spec));
  } else {
    doc = io::to_json(build(spec));
  }
  write_output(g, a.out, dump(doc));
  std::cerr << family_name(spec) << " n=" << family_size(spec);
  if (const auto t = expected_minimal_t(spec)) std::cerr << " expected minimal t=" << *t;
  std::cerr << "\n";
  return 0;
}

// --- dataset -----------------------------------------------------------------

struct DatasetArgs {
  std::string kind = "log";
  int n = 8;
  int m = 400;
  double noise = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_dataset(const Global& g, const DatasetArgs& a) {
  const Dataset d = make_synthetic(synthetic_kind_from_string(a.kind), a.n, a.m, a.noise, *a.seed);
  write_output(g, a.out, io::dataset_to_csv(d));
  return 0;
}

// --- regress -----------------------------------------------------------------

struct RegressArgs {
  std::string data;
  std::string method = "tsos";
  std::vector<int> k{3};
  std::vector<int> t{1};
  std::vector<double> lambdas = kDefaultLambdaGrid;
  std::string out;
  std::string model;
};

int run_regress(const Global& g, const RegressArgs& a) {
  const Dataset data = io::dataset_from_csv(io::read_file(a.data));
  data.validate();
  const RegressionMethod method = method_from_string(a.method);
  const GridResult grid = grid_search(data, method, a.k, a.t, a.lambdas, g.tol, g.jobs);
  Json config{{"data", a.data}, {"method", a.method}, {"k", a.k}, {"t", a.t}, {"lambda_grid", a.lambdas}};
  std::vector<std::string> rows;
  for (const auto& c : grid.cells) {
    std::ostringstream r;
    r << to_string(c.method) << ',' << c.k << ',' << c.t << ',' << num(c.lambda) << ',';
    if (c.model) {
      r << num(c.model->rmse_train) << ',' << num(c.model->rmse_val) << ',' << num(c.model->rmse_test) << ','
        << num(g.no_timing ? 0.0 : c.model->solve_seconds);
    } else {
      r << ",,,";
      std::cerr << "cell k=" << c.k << " t=" << c.t << " lambda=" << num(c.lambda) << " failed: " << c.error << "\n";
    }
    rows.push_back(r.str());
  }
  write_output(g, a.out, csv(g, "regress", config, "method,k,t,lambda,rmse_train,rmse_val,rmse_test,solve_s", rows));
  if (!grid.best) {
    std::cerr << "no grid cell produced a model\n";
    return kExitFailure;
  }
  const RegressionModel& best = *grid.cells[*grid.best].model;
  std::cerr << "best " << to_string(best.method) << " k=" << best.k << " t=" << best.t
            << " lambda=" << num(best.lambda) << " rmse_val=" << num(best.rmse_val)
            << " rmse_test=" << num(best.rmse_test)
            << " submodular=" << (best.brute_force_submodular ? "yes" : "no") << "\n";
  if (!a.model.empty()) {
    Json result{{"method", to_string(best.method)},
                {"k", best.k},
                {"t", best.t},
                {"lambda", best.lambda},
                {"rmse_train", best.rmse_train},
                {"rmse_val", best.rmse_val},
                {"rmse_test", best.rmse_test},
                {"brute_force_submodular", best.brute_force_submodular},
                {"repair_shift", best.repair_shift},
                {"F", io::to_json(best.F)}};
    if (best.certificate) result["certificate_verdict"] = to_string(best.certificate->verdict);
    write_output(g, a.model, dump(report(g, "regress", config, result)));
  }
  return 0;
}

// --- ratio -------------------------------------------------------------------

struct RatioArgs {
  std::string input;
  std::string spec;
  bool oracle = false;
  bool spectral = false;
  std::vector<std::string> trunc;
  std::vector<int> tsos;
  std::string out;
};

std::pair<int, int> parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("expected k,t but got \"" + s + "\"");
  try {
    std::size_t p1 = 0, p2 = 0;
    const int k = std::stoi(s.substr(0, comma), &p1);
    const int t = std::stoi(s.substr(comma + 1), &p2);
    if (p1 != comma || p2 != s.size() - comma - 1) throw std::invalid_argument(s);
    return {k, t};
  } catch (const std::logic_error&) {
    throw ParseError("expected k,t but got \"" + s + "\"");
  }
}

int run_ratio(const Global& g, const RatioArgs& a) {
  if (a.input.empty() == a.spec.empty()) throw ParseError("give exactly one of --input or --spec");
  Json config{{"oracle", a.oracle}, {"spectral", a.spectral}, {"trunc", a.trunc}, {"tsos", a.tsos}};
  SetFunction f;
  std::optional<family::Determinantal> det;
  std::string instance_seed;
  if (!a.input.empty()) {
    config["input"] = a.input;
    f = load_setfunction(a.input);
  } else {
    config["spec"] = a.spec;
    const Json sj = io::read_json(a.spec);
    if (sj.contains("seed")) instance_seed = sj.at("seed").dump();
    const FamilySpec spec = io::familyspec_from_json(sj);
    if (const auto* d = std::get_if<family::Determinantal>(&spec)) det = *d;
    f = build(spec);
  }
  if (a.spectral && !det) throw ParseError("--spectral needs a Determinantal --spec");
  check_monotone_nonnegative(f);

  std::string gamma_star, gamma_spec;
  double base_time = 0.0;
  const auto start = std::chrono::steady_clock::now();
  if (a.oracle) gamma_star = num(gamma_star_bruteforce(f));
  if (a.spectral) gamma_spec = num(gamma_spectral(det->sigma_matrix, det->sigma));
  base_time = seconds_since(start);

  struct Job {
    int k, t;
    bool full;
  };
  std::vector<Job> jobs;
  for (const auto& s : a.trunc) {
    const auto [k, t] = parse_pair(s);
    jobs.push_back({k, t, false});
  }
  for (int t : a.tsos) jobs.push_back({f.degree(), t, true});
  std::vector<GammaBound> bounds(jobs.size());
  parallel_for(jobs.size(), g.jobs, [&](std::size_t i) {
    const Job& j = jobs[i];
    if (j.full) {
      bounds[i] = gamma_tsos(f, j.t, g.tol);
    } else if (det) {
      const auto [m, M] = determinantal_m_M(det->sigma_matrix, det->sigma, j.k);
      bounds[i] = gamma_trunc_sos(f, j.k, j.t, m.get_d(), M.get_d(), g.tol);
    } else {
      bounds[i] = gamma_trunc_sos(f, j.k, j.t, std::nullopt, std::nullopt, g.tol);
    }
  });

  std::vector<std::string> rows;
  auto row = [&](const std::string& k, const std::string& t, const std::string& trunc, double secs) {
    std::ostringstream r;
    r << instance_seed << ',' << f.n() << ',' << k << ',' << t << ',' << gamma_star << ',' << gamma_spec << ','
      << trunc << ',' << num(g.no_timing ? 0.0 : secs);
    rows.push_back(r.str());
  };
  if (jobs.empty()) row("", "", "", base_time);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    row(std::to_string(bounds[i].k), std::to_string(bounds[i].t), num(bounds[i].gamma), bounds[i].seconds);
    std::cerr << (jobs[i].full ? "tsos" : "trunc") << " k=" << bounds[i].k << " t=" << bounds[i].t
              << " gamma=" << num(bounds[i].gamma) << " status=" << to_string(bounds[i].status) << "\n";
  }
  write_output(g, a.out,
               csv(g, "ratio", config, "instance_seed,n,k,t,gamma_star,gamma_spectral,gamma_trunc,time_s", rows));
  return 0;
}

// --- decompose ---------------------------------------------------------------

struct DecomposeArgs {
  std::string input;
  std::string method = "tsos";
  std::optional<int> t;
  std::string out;
};

int run_decompose(const Global& g, const DecomposeArgs& a) {
  const SetFunction f = load_setfunction(a.input);
  Json config{{"input", a.input}, {"method", a.method}};
  Decomposition d;
  if (a.method == "trivial") {
    d = trivial_decomposition(f);
  } else if (a.method == "tsos") {
    const int t = a.t ? *a.t : std::max(0, 2 * ((f.degree() + 1) / 2) - 2);
    config["t"] = t;
    d = tsos_irreducible_decomposition(f, t, g.tol);
  } else {
    throw ParseError("--method must be trivial or tsos");
  }
  Json result = io::to_json(d);
  std::cerr << to_string(d.kind) << " decomposition, curvature " << num(curvature_objective(d.H).get_d())
            << "\n";
  write_output(g, a.out, dump(report(g, "decompose", config, result)));
  return 0;
}

// --- ssp ---------------------------------------------------------------------

struct SspArgs {
  std::string input;
  std::string decomp;
  int runs = 10;
  std::optional<std::uint64_t> seed;
  std::string instance_seed;
  int max_iterations = 1000;
  std::string out;
  std::string trace;
};

int run_ssp(const Global& g, const SspArgs& a) {
  const SetFunction f = load_setfunction(a.input);
  Json dj = io::read_json(a.decomp);
  if (dj.contains("result")) dj = dj.at("result");
  const Decomposition d = io::decomposition_from_json(dj);
  if (d.G - d.H != f) throw ParseError("decomposition does not satisfy G - H = F for this input");
  const MinimumResult opt = exact_min_bruteforce(f);
  Json config{{"input", a.input}, {"decomp", a.decomp}, {"runs", a.runs}, {"seed", *a.seed},
              {"max_iterations", a.max_iterations}};

  std::vector<SspTrace> traces(a.runs);
  std::vector<double> times(a.runs);
  parallel_for(static_cast<std::size_t>(a.runs), g.jobs, [&](std::size_t r) {
    const auto start = std::chrono::steady_clock::now();
    traces[r] = ssp(f, d, *a.seed + r, a.max_iterations);
    times[r] = seconds_since(start);
  });
  std::vector<std::string> rows;
  Json trace_json = Json::array();
  for (int r = 0; r < a.runs; ++r) {
    const SspTrace& tr = traces[r];
    const double final_value = tr.objective.back();
    std::ostringstream row;
    row << a.instance_seed << ',' << f.n() << ',' << f.degree() << ',' << to_string(d.kind) << ',' << tr.seed << ','
        << tr.iterates.size() - 1 << ',' << num(final_value) << ',' << num(opt.value) << ','
        << num(relative_gap(final_value, opt.value)) << ',' << num(g.no_timing ? 0.0 : times[r]);
    rows.push_back(row.str());
    Json iterates = Json::array();
    for (const auto& s : tr.iterates) iterates.push_back(io::mask_string(s, f.n()));
    trace_json.push_back(Json{{"run_seed", tr.seed},
                              {"iterates", std::move(iterates)},
                              {"objective", tr.objective},
                              {"permutations", tr.permutations},
                              {"permutation_seeds", tr.permutation_seeds},
                              {"stalled_steps", tr.stalled_steps},
                              {"termination", tr.termination}});
  }
  write_output(g, a.out,
               csv(g, "ssp", config, "instance_seed,n,d,method,run_seed,iterations,f_final,f_opt,rel_gap,time_s",
                   rows));
  if (!a.trace.empty()) write_output(g, a.trace, dump(report(g, "ssp", config, trace_json)));
  return 0;
}

// --- minimize ----------------------------------------------------------------

struct MinimizeArgs {
  std::string input;
  std::string out;
};

int run_minimize(const Global& g, const MinimizeArgs& a) {
  const SetFunction f = load_setfunction(a.input);
  const MinimumResult m = exact_min_bruteforce(f);
  Json result{{"set", m.set.indices()}, {"mask", io::mask_string(m.set, f.n())},
              {"value", format_rational(f.value(m.set))}};
  write_output(g, a.out, dump(report(g, "minimize", Json{{"input", a.input}}, result)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-squares certificates for submodularity and their applications"};
  app.set_version_flag("--version", std::string("sossubmod ") + SOSSUBMOD_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  g.jobs = default_jobs();
  app.add_option("--jobs,-j", g.jobs, "Worker threads (default: SOSSUBMOD_JOBS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-profile", g.tolerance_path, "JSON file overriding solver tolerances")
      ->check(CLI::ExistingFile);
  app.add_flag("--force", g.force, "Overwrite existing output files");
  app.add_flag("--sort", g.sort, "Sort CSV data rows");
  app.add_flag("--no-timing", g.no_timing, "Write 0 for timing columns (byte-reproducible output)");

  CertifyArgs ca;
  auto* certify = app.add_subcommand("certify", "Certify t-sos submodularity of a set function");
  certify->add_option("--input,-i", ca.input, "Set-function JSON")->required()->check(CLI::ExistingFile);
  auto* opt_t = certify->add_option("--t", ca.t, "Level to test")->check(CLI::NonNegativeNumber);
  auto* opt_min = certify->add_flag("--min-t", ca.min_t, "Find the smallest certified level");
  opt_t->excludes(opt_min);
  certify->add_option("--out,-o", ca.out, "Certificate JSON");

  FamilyArgs fa;
  auto* fam = app.add_subcommand("family", "Materialize a family as a set-function JSON");
  fam->add_option("--spec", fa.spec, "FamilySpec JSON")->required()->check(CLI::ExistingFile);
  fam->add_option("--out,-o", fa.out, "Output JSON (default stdout)");
  fam->add_flag("--values", fa.values, "Write the value table instead of the MLE");

  DatasetArgs da;
  auto* dataset = app.add_subcommand("dataset", "Generate a synthetic regression dataset");
  dataset->add_option("--kind", da.kind, "log, logdet or facloc")->check(CLI::IsMember({"log", "logdet", "facloc"}));
  dataset->add_option("--n", da.n, "Ground set size")->check(CLI::Range(1, 16));
  dataset->add_option("--m", da.m, "Number of samples")->check(CLI::PositiveNumber);
  dataset->add_option("--noise", da.noise, "Noise level relative to the label std")->check(CLI::NonNegativeNumber);
  dataset->add_option("--seed", da.seed, "RNG seed")->required();
  dataset->add_option("--out,-o", da.out, "Dataset CSV (default stdout)");

  RegressArgs ra;
  auto* regress = app.add_subcommand("regress", "Fit a set function to a dataset over a (k, t, lambda) grid");
  regress->add_option("--data", ra.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  regress->add_option("--method", ra.method, "poly, tsos or necessary")
      ->check(CLI::IsMember({"poly", "tsos", "necessary"}));
  regress->add_option("--k", ra.k, "Degrees")->delimiter(',');
  regress->add_option("--t", ra.t, "SOS levels (tsos only)")->delimiter(',');
  regress->add_option("--lambda-grid", ra.lambdas, "Ridge weights")->delimiter(',');
  regress->add_option("--out,-o", ra.out, "Results CSV (default stdout)");
  regress->add_option("--model", ra.model, "JSON for the best model");

  RatioArgs qa;
  auto* ratio = app.add_subcommand("ratio", "Bounds on the submodularity ratio");
  ratio->add_option("--input,-i", qa.input, "Set-function JSON")->check(CLI::ExistingFile);
  ratio->add_option("--spec", qa.spec, "FamilySpec JSON (needed for --spectral)")->check(CLI::ExistingFile);
  ratio->add_flag("--oracle", qa.oracle, "Exact ratio by enumeration");
  ratio->add_flag("--spectral", qa.spectral, "Spectral lower bound (determinantal only)");
  ratio->add_option("--trunc", qa.trunc, "Truncated SOS bound at k,t (repeatable)");
  ratio->add_option("--tsos", qa.tsos, "Untruncated SOS bound at level t (repeatable)");
  ratio->add_option("--out,-o", qa.out, "Results CSV (default stdout)");

  DecomposeArgs dca;
  auto* decompose = app.add_subcommand("decompose", "Difference-of-submodular decomposition");
  decompose->add_option("--input,-i", dca.input, "Set-function JSON")->required()->check(CLI::ExistingFile);
  decompose->add_option("--method", dca.method, "trivial or tsos")->check(CLI::IsMember({"trivial", "tsos"}));
  decompose->add_option("--t", dca.t, "SOS level (default 2 ceil(d/2) - 2)")->check(CLI::NonNegativeNumber);
  decompose->add_option("--out,-o", dca.out, "Decomposition JSON (default stdout)");

  SspArgs sa;
  auto* sspc = app.add_subcommand("ssp", "Run the submodular-supermodular procedure");
  sspc->add_option("--input,-i", sa.input, "Set-function JSON")->required()->check(CLI::ExistingFile);
  sspc->add_option("--decomp", sa.decomp, "Decomposition JSON")->required()->check(CLI::ExistingFile);
  sspc->add_option("--runs", sa.runs, "Number of runs")->check(CLI::PositiveNumber);
  sspc->add_option("--seed", sa.seed, "Base seed; run r uses seed + r")->required();
  sspc->add_option("--instance-seed", sa.instance_seed, "Label for the instance_seed column");
  sspc->add_option("--max-iterations", sa.max_iterations, "Iteration cap per run")->check(CLI::PositiveNumber);
  sspc->add_option("--out,-o", sa.out, "Benchmark CSV (default stdout)");
  sspc->add_option("--trace", sa.trace, "JSON with full traces");

  MinimizeArgs ma;
  auto* minimize = app.add_subcommand("minimize", "Exact minimum by enumeration");
  minimize->add_option("--input,-i", ma.input, "Set-function JSON")->required()->check(CLI::ExistingFile);
  minimize->add_option("--out,-o", ma.out, "Result JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!g.tolerance_path.empty()) g.tol = io::tolerance_from_json(io::read_json(g.tolerance_path));
    if (*certify) {
      if (!ca.t && !ca.min_t) throw ParseError("certify needs --t or --min-t");
      return run_certify(g, ca);
    }
    if (*fam) return run_family(g, fa);
    if (*dataset) return run_dataset(g, da);
    if (*regress) return run_regress(g, ra);
    if (*ratio) return run_ratio(g, qa);
    if (*decompose) return run_decompose(g, dca);
    if (*sspc) return run_ssp(g, sa);
    if (*minimize) return run_minimize(g, ma);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OutputExists& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCantCreate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
