#include "qcsvd/correlation.hpp"
#include "qcsvd/errors.hpp"
#include "qcsvd/exact_diag.hpp"
#include "qcsvd/four_site.hpp"
#include "qcsvd/io.hpp"
#include "qcsvd/mps.hpp"
#include "qcsvd/svd_analysis.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qcsvd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;

// Thrown for bad flag combinations the parser cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void apply_thread_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("QCSVD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

fs::path prepare_out(const std::string& dir) {
  const fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw FormatError("cannot create output directory " + dir + ": " + ec.message());
  return out;
}

json base_manifest(const std::string& command) {
  json m;
  m["command"] = command;
  m["timestamp"] = utc_timestamp();
  m["version"] = "0.1.0";
  return m;
}

json trace_check(const SvdSpectrum& spec, bool ground_state) {
  const double sum = spec.values.sum();
  const double expected = spec.size() / 4.0;
  json t;
  t["sum_sqrt_lambda"] = sum;
  t["expected"] = expected;
  t["abs_error"] = std::abs(sum - expected);
  t["applies"] = ground_state;
  if (ground_state) t["pass"] = std::abs(sum - expected) <= 1e-10;
  return t;
}

std::vector<int> parse_list(const std::string& s, int n_max) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) {
      const auto dash = item.find('-');
      try {
        if (dash != std::string::npos && dash > 0) {
          const int a = std::stoi(item.substr(0, dash));
          const int b = std::stoi(item.substr(dash + 1));
          for (int k = a; k <= b; ++k) out.push_back(k);
        } else {
          out.push_back(std::stoi(item));
        }
      } catch (const std::logic_error&) {
        throw UsageError("bad component list entry '" + item + "'");
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (int n : out) {
    if (n < 1 || n > n_max) {
      throw UsageError("component " + std::to_string(n) + " outside [1, " + std::to_string(n_max) + "]");
    }
  }
  return out;
}

// ---- solve

struct SolveArgs {
  std::string method;
  int n = 0;
  int chi = 10;
  int sweeps = 40;
  std::uint64_t seed = 0;
  double coupling = 1.0;
  int track = 5;
  std::string out;
};

int run_solve(const SolveArgs& a) {
  if (a.n < 4 || a.n % 2) throw InvalidSizeError("--n must be even and at least 4");
  const fs::path out = prepare_out(a.out);
  json m = base_manifest("solve");
  m["method"] = a.method;
  m["n_sites"] = a.n;
  m["J"] = a.coupling;
  m["seed"] = a.seed;
  std::vector<std::string> artifacts;

  if (a.method == "ed") {
    if (a.n > kMaxLanczosSites) {
      throw InvalidSizeError("ed supports n <= " + std::to_string(kMaxLanczosSites));
    }
    LanczosOptions opt;
    opt.seed = a.seed;
    const GroundSolution g = lanczos_ground_state(enumerate_sector(a.n, 0), a.coupling, opt);
    io::EdState st{a.n, a.coupling, g.energy, g.wf};
    io::write_json(out / "state.json", io::ed_state_to_json(st));
    artifacts.push_back("state.json");
    m["energy"] = g.energy;
    m["residual_norm"] = g.residual_norm;
    m["iterations"] = g.iterations;
  } else {
    if (a.chi < 1) throw InvalidSizeError("--chi must be positive");
    if (a.sweeps < 1) throw InvalidSizeError("--sweeps must be positive");
    MpsState state = random_init(a.n, a.chi, a.seed);
    SweepOptions opt;
    opt.n_sweeps = a.sweeps;
    opt.track_spectrum_last = std::min(a.track, a.sweeps - 1);
    opt.on_sweep = [](const SweepReport& r) {
      std::cerr << "sweep " << r.sweep_index << " E=" << io::format_double(r.energy);
      if (r.spectrum_change) std::cerr << " dlambda=" << *r.spectrum_change;
      std::cerr << '\n';
    };
    const auto reports = sweep_optimize(state, a.coupling, opt);
    io::write_json(out / "state.json", io::mps_to_json(state, a.coupling));
    artifacts.push_back("state.json");
    {
      std::ofstream csv(out / "sweeps.csv");
      csv << "sweep,energy,energy_change,spectrum_change\n";
      for (const auto& r : reports) {
        csv << r.sweep_index << ',' << io::format_double(r.energy) << ','
            << io::format_double(r.energy_change) << ','
            << (r.spectrum_change ? io::format_double(*r.spectrum_change) : std::string()) << '\n';
      }
    }
    artifacts.push_back("sweeps.csv");
    double worst = 0.0;
    for (const auto& r : reports) {
      if (r.spectrum_change) worst = std::max(worst, *r.spectrum_change);
    }
    m["chi"] = a.chi;
    m["sweeps"] = a.sweeps;
    m["energy"] = energy(state, a.coupling);
    if (opt.track_spectrum_last > 0) m["max_spectrum_change_tracked"] = worst;
  }
  m["artifacts"] = artifacts;
  io::write_json(out / "manifest.json", m);
  std::cout << io::format_double(m["energy"].get<double>()) << '\n';
  return kExitOk;
}

// ---- corr

struct CorrArgs {
  std::string state;
  std::optional<double> beta;
  std::optional<int> n;
  double coupling = 1.0;
  std::string out;
};

int run_corr(const CorrArgs& a) {
  json m = base_manifest("corr");
  CorrelationMatrix s;
  bool ground = false;
  if (a.beta) {
    int n = a.n.value_or(0);
    double coupling = a.coupling;
    if (!a.state.empty()) {
      const auto st = io::read_state(a.state);
      if (const auto* ed = std::get_if<io::EdState>(&st)) {
        n = ed->n_sites;
        coupling = ed->coupling;
      } else {
        n = std::get<MpsState>(st).n_sites();
      }
    }
    if (n == 0) throw UsageError("thermal mode needs --n or --state");
    const FullSpectrum fs = full_spectrum(n, coupling);
    s = build_thermal(fs, *a.beta);
    m["method"] = "thermal";
    m["beta"] = *a.beta;
    m["J"] = coupling;
    m["log_partition_function"] = fs.log_partition_function(*a.beta);
  } else {
    if (a.state.empty()) throw UsageError("corr needs --state, or --n with --beta");
    const auto st = io::read_state(a.state);
    if (const auto* ed = std::get_if<io::EdState>(&st)) {
      s = build_from_wavefunction(ed->wf);
      m["method"] = "ed";
      m["energy"] = ed->energy;
      m["J"] = ed->coupling;
      ground = ed->wf.basis->sz_total() == 0.0;
    } else {
      const auto& mps = std::get<MpsState>(st);
      s = build_from_mps(mps);
      m["method"] = "mps";
      m["chi"] = mps.chi();
      m["seed"] = mps.seed;
      m["sweeps"] = mps.sweep_count;
      const json raw = io::read_json(a.state);
      const double coupling = raw.value("J", 1.0);
      m["J"] = coupling;
      m["energy"] = energy(mps, coupling);
      ground = true;
    }
    m["state"] = a.state;
  }
  const fs::path out = prepare_out(a.out);
  io::write_matrix_csv(out / "matrix.csv", s.entries);
  io::write_heatmap_pgm(out / "heatmap.pgm", s.entries);
  const StructureReport r = check_structure(s);
  m["n_sites"] = s.n_sites();
  m["provenance"] = to_string(s.provenance);
  m["structure"] = {{"asymmetry", r.asymmetry},
                    {"diagonal_error", r.diagonal_error},
                    {"min_eigenvalue", r.min_eigenvalue},
                    {"max_row_sum", r.max_row_sum},
                    {"circulant_error", r.circulant_error}};
  m["notes"] = s.notes;
  m["trace_check"] = trace_check(eigendecompose(s), ground);
  m["artifacts"] = {"matrix.csv", "heatmap.pgm"};
  io::write_json(out / "manifest.json", m);
  return kExitOk;
}

// ---- analyze

struct AnalyzeArgs {
  std::string matrix;
  std::string components;
  bool fit = false;
  bool domains = false;
  int haar = -1;  // -1: off, 0: full depth
  bool haar_requested = false;
  double threshold = kDefaultDomainThreshold;
  double pair_tol = 0.1;
  std::string out;
};

int run_analyze(const AnalyzeArgs& a) {
  const Eigen::MatrixXd s = io::read_matrix_csv(a.matrix);
  const SvdSpectrum spec = eigendecompose(s);
  const int n = spec.size();
  const fs::path out = prepare_out(a.out);
  json m = base_manifest("analyze");
  m["matrix"] = a.matrix;
  m["n_sites"] = n;
  std::vector<std::string> artifacts;

  io::write_spectrum_csv(out / "spectrum.csv", spec);
  artifacts.push_back("spectrum.csv");

  const bool ground_like = (s.diagonal().array() - 0.25).abs().maxCoeff() <= 1e-8 &&
                           s.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-2;
  m["trace_check"] = trace_check(spec, ground_like);

  const DegeneracyPartition deg = degeneracy_pairs(spec, a.pair_tol);
  json pairs = json::array();
  for (const auto& [p, q] : deg.pairs) pairs.push_back({p, q});
  m["degeneracy"] = {{"rel_tol", a.pair_tol}, {"pairs", pairs}, {"singletons", deg.singletons}};
  m["lambda_ratio_last_first"] = spec.squared[n - 1] / spec.squared[0];

  if (!a.components.empty()) {
    json comps = json::array();
    for (int k : parse_list(a.components, n)) {
      Eigen::MatrixXd c = component(spec, k).matrix;
      const double f = c.norm();
      if (f > 0.0) c /= f;
      const std::string name = "component_" + std::to_string(k) + ".csv";
      io::write_matrix_csv(out / name, c);
      artifacts.push_back(name);
      const DomainMeasurement d = measure_domain_size(spec.vectors.col(k - 1), a.threshold);
      comps.push_back({{"n", k},
                       {"file", name},
                       {"normalization", "unit-frobenius"},
                       {"frobenius_before", f},
                       {"wavenumber", d.wavenumber},
                       {"domain_size", d.domain_size},
                       {"wall_count", d.wall_count}});
    }
    m["components"] = comps;
  }

  if (a.fit) {
    json f;
    try {
      const ScalingFit fit = fit_scaling(spec);
      f = {{"power", fit.power},
           {"amplitude", fit.amplitude},
           {"r_squared", fit.r_squared},
           {"fit_set", fit.fit_set},
           {"excluded", fit.excluded},
           {"uses_exp_cutoff", fit.uses_exp_cutoff}};
      if (!fit.excluded.empty()) {
        std::cerr << "warning: " << fit.excluded.size() << " nonpositive λ excluded from fit\n";
      }
    } catch (const FitError& e) {
      f = {{"error", e.what()}};
      std::cerr << "warning: " << e.what() << '\n';
    }
    io::write_json(out / "fit.json", f);
    artifacts.push_back("fit.json");
  }

  if (a.domains) {
    std::ofstream csv(out / "domains.csv");
    csv << "n,k,L,wall_count\n";
    for (int k = 1; k <= n; ++k) {
      const Eigen::VectorXd v = spec.vectors.col(k - 1);
      try {
        const DomainMeasurement d = measure_domain_size(v, a.threshold);
        csv << k << ',' << io::format_double(d.wavenumber) << ',' << io::format_double(d.domain_size) << ','
            << d.wall_count << '\n';
      } catch (const DegenerateStateError&) {
        csv << k << ',' << io::format_double(dominant_wavenumber(v)) << ",,\n";
      }
    }
    artifacts.push_back("domains.csv");
    m["domain_threshold"] = a.threshold;
  }

  if (a.haar_requested) {
    const int levels = a.haar > 0 ? a.haar : max_haar_levels(n);
    const Eigen::MatrixXd t = haar_transform(s, levels);
    io::write_matrix_csv(out / "haar.csv", t);
    io::write_heatmap_pgm(out / "haar.pgm", t);
    artifacts.push_back("haar.csv");
    artifacts.push_back("haar.pgm");
    m["haar"] = {{"levels", levels}, {"frobenius_in", s.norm()}, {"frobenius_out", t.norm()}};
  }

  m["artifacts"] = artifacts;
  io::write_json(out / "manifest.json", m);
  return kExitOk;
}

// ---- oracle4

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

int run_oracle4(const std::string& out_file) {
  using namespace four_site;
  json j;
  const Wavefunction g = oracle_ground_state();
  std::vector<std::string> labels;
  for (SpinConfig c : g.basis->configs()) {
    std::string s;
    for (int i = 0; i < 4; ++i) s += ((c >> i) & 1) ? "u" : "d";
    labels.push_back(s);
  }
  j["configurations"] = labels;
  j["ground_state"] = std::vector<double>(g.amps.begin(), g.amps.end());
  j["energy"] = energy_expectation(g, 1.0);
  const DensityMatrices d = oracle_density_matrices();
  j["rho_a"] = matrix_json(d.rho_a);
  j["rho_ab"] = matrix_json(d.rho_ab);
  const Entropies e = oracle_entropies();
  j["entropies"] = {{"s_ab", e.s_ab}, {"s_a", e.s_a}, {"s_b", e.s_b}, {"mutual_information", e.mutual_information}};
  j["correlation_matrix"] = matrix_json(oracle_correlation_matrix());
  const Eigen::Vector4d sv = oracle_singular_values();
  j["singular_values"] = std::vector<double>(sv.begin(), sv.end());
  json comps = json::array();
  for (const auto& c : oracle_components()) comps.push_back(matrix_json(c));
  j["components"] = comps;
  const PsiSplit p = oracle_psi_split();
  j["psi1"] = std::vector<double>(p.psi1.amps.begin(), p.psi1.amps.end());
  j["psi2"] = std::vector<double>(p.psi2.amps.begin(), p.psi2.amps.end());
  const DecompositionReport r = oracle_decomposition_check();
  j["decomposition"] = {{"s1", matrix_json(r.s1)},
                        {"s2", matrix_json(r.s2)},
                        {"s1_error", r.s1_error},
                        {"s2_factor4_error", r.s2_factor4_error},
                        {"s2_factor1_error", r.s2_factor1_error},
                        {"s2_best_factor", r.s2_best_factor},
                        {"overlap", r.overlap}};
  if (out_file.empty() || out_file == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    io::write_json(out_file, j);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg ring ground states and correlation-matrix SVD analysis"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* sc = app.add_subcommand("solve", "ground state by exact diagonalization or MPS");
  sc->add_option("--method", solve.method)->required()->check(CLI::IsMember({"ed", "mps"}));
  sc->add_option("--n", solve.n, "number of sites (even, >= 4)")->required();
  sc->add_option("--chi", solve.chi, "MPS bond dimension")->capture_default_str();
  sc->add_option("--sweeps", solve.sweeps, "MPS sweeps")->capture_default_str();
  sc->add_option("--seed", solve.seed)->capture_default_str();
  sc->add_option("--j", solve.coupling, "exchange coupling")->capture_default_str();
  sc->add_option("--track", solve.track, "track the spectrum over the last sweeps")->capture_default_str();
  sc->add_option("--out", solve.out)->required();

  CorrArgs corr;
  auto* cc = app.add_subcommand("corr", "correlation matrix from a state or a thermal ensemble");
  cc->add_option("--state", corr.state);
  cc->add_option("--beta", corr.beta, "inverse temperature (thermal mode)");
  cc->add_option("--n", corr.n, "number of sites for thermal mode");
  cc->add_option("--j", corr.coupling, "exchange coupling for thermal mode")->capture_default_str();
  cc->add_option("--out", corr.out)->required();

  AnalyzeArgs an;
  auto* ac = app.add_subcommand("analyze", "spectrum, components, fit, domains, Haar transform");
  ac->add_option("--matrix", an.matrix)->required();
  ac->add_option("--components", an.components, "ranks to export, e.g. 1,2,4-6");
  ac->add_flag("--fit", an.fit);
  ac->add_flag("--domains", an.domains);
  ac->add_option("--haar", an.haar, "Haar levels (omit value for full depth)")
      ->expected(0, 1)
      ->default_str("0");
  ac->add_option("--threshold", an.threshold, "domain sign threshold")->capture_default_str();
  ac->add_option("--pair-tol", an.pair_tol, "relative gap for degenerate pairs")->capture_default_str();
  ac->add_option("--out", an.out)->required();

  std::string oracle_out;
  auto* oc = app.add_subcommand("oracle4", "4-site reference values as JSON");
  oc->add_option("--out", oracle_out, "file to write (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  apply_thread_env();
  try {
    if (*sc) return run_solve(solve);
    if (*cc) return run_corr(corr);
    if (*ac) {
      an.haar_requested = ac->count("--haar") > 0;
      return run_analyze(an);
    }
    return run_oracle4(oracle_out);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return kExitNoConvergence;
  } catch (const ConditioningError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
