#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvpure/beamformer.hpp"
#include "mvpure/errors.hpp"
#include "mvpure/localizer.hpp"
#include "mvpure/matrix_io.hpp"
#include "mvpure/serialization.hpp"
#include "mvpure/spectrum.hpp"
#include "mvpure/verification.hpp"

namespace mvpure::cli {
namespace {

namespace fs = std::filesystem;

// Bad invocation or configuration; always exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WarningRedirect {
 public:
  explicit WarningRedirect(std::ostream& err) {
    set_warning_sink([&err](std::string_view msg) { err << "warning: " << msg << '\n'; });
  }
  ~WarningRedirect() { set_warning_sink(nullptr); }
  WarningRedirect(const WarningRedirect&) = delete;
  WarningRedirect& operator=(const WarningRedirect&) = delete;
};

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  return values;
}

std::pair<double, double> parse_window(const std::string& flag, const std::string& text) {
  const auto v = parse_list(flag, text);
  if (v.size() != 2) throw UsageError(flag + " expects two comma-separated times, e.g. -0.2,0");
  if (v[1] < v[0]) throw UsageError(flag + ": window end precedes its start");
  return {v[0], v[1]};
}

fs::path require_file(const std::string& flag, const std::string& path) {
  if (path.empty()) throw UsageError(flag + " is required");
  if (!fs::exists(path)) throw UsageError(flag + ": file '" + path + "' does not exist");
  return path;
}

int thread_width(int requested) {
  int width = resolve_width(requested);
  if (const char* env = std::getenv("MVPURE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) width = std::min(width, cap);
  }
  return width;
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

// Where the lead field and covariances come from. Covariances are read from
// matrix files, from a scenario directory, or estimated from epochs over the
// two windows.
struct InputFlags {
  std::string scenario;
  std::string leadfield;
  std::string data_cov;
  std::string noise_cov;
  std::string epochs;
  std::string data_window;
  std::string noise_window;
  double reg = 0.0;

  void add_to(CLI::App& cmd, bool with_leadfield, double default_reg) {
    reg = default_reg;
    cmd.add_option("--scenario", scenario, "Scenario directory supplying lead field and covariances");
    if (with_leadfield) cmd.add_option("--leadfield", leadfield, "Lead-field matrix (m x s), .mvpm or .csv");
    cmd.add_option("--data-cov", data_cov, "Data covariance R (m x m)");
    cmd.add_option("--noise-cov", noise_cov, "Noise covariance N (m x m)");
    cmd.add_option("--epochs", epochs, "Epochs file; covariances are estimated over the windows");
    cmd.add_option("--data-window", data_window, "Data window 't0,t1' in seconds");
    cmd.add_option("--noise-window", noise_window, "Noise window 't0,t1' in seconds");
    cmd.add_option("--reg", reg, "Diagonal loading gamma applied to R and N")->capture_default_str();
  }

  std::optional<Scenario> load_scenario() const {
    if (scenario.empty()) return std::nullopt;
    if (!fs::is_directory(scenario)) throw UsageError("--scenario: directory '" + scenario + "' does not exist");
    return io::read_scenario(scenario);
  }

  LeadField load_leadfield(const std::optional<Scenario>& sc) const {
    if (leadfield.empty() && sc) return sc->leadfield;
    return LeadField::from_gains(io::load_matrix_any(require_file("--leadfield", leadfield)));
  }

  std::pair<Covariance, Covariance> load_covariances(const std::optional<Scenario>& sc) const {
    if (reg < 0.0) throw UsageError("--reg must be non-negative");
    Covariance r, n;
    const bool from_files = !data_cov.empty() || !noise_cov.empty();
    const bool from_windows = !data_window.empty() || !noise_window.empty();
    if (from_files) {
      r = Covariance::make(io::load_matrix_any(require_file("--data-cov", data_cov)), CovarianceKind::kData);
      n = Covariance::make(io::load_matrix_any(require_file("--noise-cov", noise_cov)), CovarianceKind::kNoise);
    } else if (sc && !from_windows) {
      r = sc->R;
      n = sc->N;
    } else if (!epochs.empty()) {
      const Epochs ep = io::read_epochs(require_file("--epochs", epochs));
      if (noise_window.empty()) throw UsageError("--noise-window is required when estimating from --epochs");
      if (data_window.empty()) throw UsageError("--data-window is required when estimating from --epochs");
      const auto [n0, n1] = parse_window("--noise-window", noise_window);
      const auto [d0, d1] = parse_window("--data-window", data_window);
      if (n0 <= d1 && d0 <= n1) warn("noise and data windows overlap");
      n = sample_covariance(ep, n0, n1, CovarianceKind::kNoise);
      r = sample_covariance(ep, d0, d1, CovarianceKind::kData);
    } else {
      throw UsageError("--data-cov and --noise-cov (or --scenario, or --epochs with windows) are required");
    }
    if (reg > 0.0) {
      r = regularize(r, reg);
      n = regularize(n, reg);
    }
    return {r, n};
  }
};

struct ThresholdFlags {
  double l0_threshold = 0.1;
  double rank_threshold = 0.5;
  std::string rank_rule = "excess";

  void add_to(CLI::App& cmd) {
    cmd.add_option("--l0-threshold", l0_threshold, "Eigenvalues above 1 + this count as sources")
        ->capture_default_str();
    cmd.add_option("--rank-threshold", rank_threshold, "Rank threshold")->capture_default_str();
    cmd.add_option("--rank-rule", rank_rule,
                   "excess: lambda - 1 >= threshold; literal: lambda >= threshold")
        ->check(CLI::IsMember({"excess", "literal"}))
        ->capture_default_str();
  }

  SpectrumThresholds get() const {
    return {l0_threshold, rank_threshold, rank_rule == "literal" ? RankRule::kLiteral : RankRule::kExcessOverOne};
  }
};

void print_spectrum(std::ostream& out, const SpectrumReport& rep) {
  out << "l0_est: " << rep.l0_est << "\nr_opt: " << rep.r_opt << "\nlambdas:";
  const std::size_t shown = std::min<std::size_t>(rep.lambdas.size(), static_cast<std::size_t>(rep.l0_est) + 3);
  out << std::setprecision(6);
  for (std::size_t i = 0; i < shown; ++i) out << ' ' << rep.lambdas[i];
  if (shown < rep.lambdas.size()) out << " ...";
  out << '\n';
}

void spectrum_warnings(const SpectrumReport& rep) {
  if (rep.l0_est == 0) {
    warn("no eigenvalue of R N^-1 exceeds 1 + l0 threshold; no active sources detected");
  } else if (rep.r_opt == 0) {
    warn("no eigenvalue clears the rank threshold; use rank = l0 = " + std::to_string(rep.l0_est));
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  std::string out;
  int m = 32;
  int s = 12;
  int l0 = 2;
  std::string snr;
  std::string noise = "white";
  double correlation = 0.0;
  std::uint64_t seed = 0;
  double separation = 0.0;
  int n_epochs = 0;
  int n_baseline = 500;
  int n_active = 500;
  double sfreq = 1000.0;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  if (f.out.empty()) throw UsageError("--out is required");
  ScenarioParams p;
  p.m = f.m;
  p.s = f.s;
  p.l0 = f.l0;
  if (f.snr.empty()) {
    p.source_snr.clear();
    for (int j = 0; j < std::max(f.l0, 0); ++j) p.source_snr.push_back(std::max(0.5, 3.0 - 0.4 * j));
  } else {
    p.source_snr = parse_list("--snr", f.snr);
  }
  p.noise = f.noise == "spd" ? NoiseKind::kSeededSpd : NoiseKind::kWhite;
  p.correlation = f.correlation;
  p.seed = f.seed;
  p.min_separation_deg = f.separation;
  const Scenario sc = synth_scenario(p);
  io::write_scenario(f.out, sc);
  if (f.n_epochs > 0) {
    if (f.n_active < 1 || f.n_baseline < 0 || !(f.sfreq > 0.0)) {
      throw UsageError("--n-active must be positive, --n-baseline non-negative and --sfreq positive");
    }
    const Epochs ep = simulate_epochs(sc, f.n_epochs, f.n_baseline, f.n_active, f.sfreq, f.seed + 1);
    io::write_epochs(fs::path(f.out) / "epochs.mvpm", ep);
  }
  out << "scenario: " << f.out << "\ntrue_sources: " << join(sc.true_sources.indices()) << '\n';
  print_spectrum(out, analyze_spectrum(sc.R, sc.N, {1e-6, 0.5, RankRule::kExcessOverOne}));
  return kOk;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumFlags {
  InputFlags in;
  ThresholdFlags thr;
  std::string out;
  std::string csv;
};

int cmd_spectrum(const SpectrumFlags& f, std::ostream& out) {
  const auto sc = f.in.load_scenario();
  const auto [r, n] = f.in.load_covariances(sc);
  const SpectrumReport rep = analyze_spectrum(r, n, f.thr.get());
  spectrum_warnings(rep);
  if (!f.out.empty()) {
    fs::path csv = f.csv.empty() ? fs::path(f.out).replace_extension(".csv") : fs::path(f.csv);
    io::write_spectrum(f.out, csv, rep);
  }
  print_spectrum(out, rep);
  return kOk;
}

// ---------------------------------------------------------------- localize

struct LocalizeFlags {
  InputFlags in;
  ThresholdFlags thr;
  std::string index = "mpz-mvp";
  int rank = 0;
  int n_sources = 0;
  int threads = 0;
  std::string method = "greedy";
  std::uint64_t combo_limit = kDefaultComboLimit;
  bool record_candidates = false;
  std::string out;
};

int cmd_localize(const LocalizeFlags& f, std::ostream& out) {
  const auto sc = f.in.load_scenario();
  const LeadField lf = f.in.load_leadfield(sc);
  const auto [r, n] = f.in.load_covariances(sc);

  LocalizeOptions o;
  o.index_kind = parse_index_kind(f.index);
  o.record_candidates = f.record_candidates;
  o.parallel_width = thread_width(f.threads);
  if (f.n_sources > 0 && f.rank > 0) {
    o.n_sources = f.n_sources;
    o.rank = f.rank;
  } else {
    const SpectrumReport rep = analyze_spectrum(r, n, f.thr.get());
    o.n_sources = f.n_sources > 0 ? f.n_sources : rep.l0_est;
    if (o.n_sources < 1) {
      throw UsageError("no active sources detected in the spectrum; pass --n-sources explicitly");
    }
    if (f.rank > 0) {
      o.rank = f.rank;
    } else {
      const int suggested = suggest_rank(rep.lambdas, std::min<int>(o.n_sources, static_cast<int>(rep.lambdas.size())),
                                         f.thr.rank_threshold, f.thr.get().rank_rule);
      if (suggested == 0) warn("no eigenvalue clears the rank threshold; using rank = n-sources");
      o.rank = suggested == 0 ? o.n_sources : suggested;
    }
  }
  if (!is_reduced_rank(o.index_kind)) o.rank = o.n_sources;

  const IndexContext ctx(lf, r, n);
  const LocalizationResult res =
      f.method == "bruteforce" ? localize_bruteforce(ctx, o, f.combo_limit) : localize_iterative(ctx, o);
  for (const auto& s : res.skipped) warn("step " + std::to_string(s.step) + ": skipped candidate " +
                                         std::to_string(s.index) + " (" + s.reason + ")");
  if (!f.out.empty()) {
    io::write_localization(f.out, res);
    out << "sources: " << join(res.sources.indices()) << "\nindex: " << index_kind_name(res.index_kind)
        << "\nrank_used: " << res.rank_used << '\n';
  } else {
    out << io::to_json(res);
  }
  return kOk;
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructFlags {
  InputFlags in;
  std::string filter = "mvp-r";
  int rank = 0;
  std::string sources;
  std::string out;
};

int cmd_reconstruct(const ReconstructFlags& f, std::ostream& out) {
  if (f.out.empty()) throw UsageError("--out is required");
  const LocalizationResult found = io::read_localization(require_file("--sources", f.sources));
  const Epochs ep = io::read_epochs(require_file("--epochs", f.in.epochs));
  const auto sc = f.in.load_scenario();
  const LeadField lf = f.in.load_leadfield(sc);
  found.sources.validate(lf.num_sources(), lf.num_channels());
  const auto [r, n] = f.in.load_covariances(sc);

  const FilterKind kind = parse_filter_kind(f.filter);
  const int l = found.sources.size();
  int rank = f.rank > 0 ? f.rank : std::min(found.rank_used > 0 ? found.rank_used : l, l);
  const Matrix h0 = subset_leadfield(lf, found.sources);
  const SpatialFilter w = make_filter(h0, r, n, kind, rank, found.sources);

  const std::vector<Matrix> est = apply_filter(w, ep);
  io::Tensor t;
  const auto rows = static_cast<std::uint64_t>(w.weights.rows());
  const auto cols = static_cast<std::uint64_t>(ep.num_times());
  if (est.size() == 1) {
    t.dims = {rows, cols};
  } else {
    t.dims = {static_cast<std::uint64_t>(est.size()), rows, cols};
  }
  t.values.reserve(est.size() * rows * cols);
  for (const Matrix& e : est) {
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      for (Eigen::Index j = 0; j < e.cols(); ++j) t.values.push_back(e(i, j));
  }
  io::write_tensor(f.out, t);
  io::write_text(f.out + ".json", io::filter_sidecar_json(w));
  out << "filter: " << filter_kind_name(w.kind) << " rank " << w.rank << "\nsources: "
      << join(w.source_set.indices()) << "\ngain_check: " << w.gain_check << "\noutput: " << f.out << '\n';
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  std::string criteria;
  bool break_unbiasedness = false;
  int threads = 1;
};

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
  std::vector<int> ids;
  if (!f.criteria.empty()) {
    for (double v : parse_list("--criteria", f.criteria)) {
      if (v != std::floor(v) || v < 1 || v > static_cast<double>(criteria().size())) {
        throw UsageError("--criteria: no criterion " + std::to_string(v));
      }
      ids.push_back(static_cast<int>(v));
    }
  }
  VerifyOptions o;
  o.break_unbiasedness = f.break_unbiasedness;
  o.threads = thread_width(f.threads);
  bool ok = true;
  for (const auto& res : run_suite(o, ids)) {
    out << format_result(res) << '\n';
    ok = ok && res.passed;
  }
  out << (ok ? "all checks passed\n" : "verification FAILED\n");
  return ok ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- config

// Reads a JSON config into per-option argument lists. Nested "windows" and
// "thresholds" objects map onto their flag names.
std::vector<std::pair<std::string, nlohmann::json>> read_config(const std::string& path, std::string& command) {
  const std::string text = io::read_text(require_file("--config", path));
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("--config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("--config: top level must be a JSON object");
  std::vector<std::pair<std::string, nlohmann::json>> entries;
  for (const auto& [key, value] : j.items()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "command") {
      command = value.get<std::string>();
    } else if (flag == "windows" && value.is_object()) {
      for (const auto& [w, v] : value.items()) entries.emplace_back(w + "-window", v);
    } else if (flag == "thresholds" && value.is_object()) {
      for (const auto& [t, v] : value.items()) entries.emplace_back(t + "-threshold", v);
    } else {
      entries.emplace_back(flag, value);
    }
  }
  return entries;
}

std::string config_value(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + config_value(v[i]);
    return s;
  }
  return v.dump();
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  WarningRedirect redirect(err);

  CLI::App app{"Reduced-rank EEG/MEG source localization and reconstruction", "mvpure"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file of option values; command-line flags take precedence");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic scenario directory");
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_option("--m", sim.m, "Number of channels")->capture_default_str();
  simulate->add_option("--s", sim.s, "Number of candidate sources")->capture_default_str();
  simulate->add_option("--l0", sim.l0, "Number of active sources")->capture_default_str();
  simulate->add_option("--snr", sim.snr, "Comma-separated source amplitudes, one per active source");
  simulate->add_option("--noise", sim.noise, "Noise covariance model")
      ->check(CLI::IsMember({"white", "spd"}))
      ->capture_default_str();
  simulate->add_option("--correlation", sim.correlation, "Correlation between active sources")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--separation", sim.separation, "Minimum angle (deg) from true to other columns")
      ->capture_default_str();
  simulate->add_option("--n-epochs", sim.n_epochs, "Also simulate this many epochs (epochs.mvpm)")
      ->capture_default_str();
  simulate->add_option("--n-baseline", sim.n_baseline, "Noise-only samples per epoch")->capture_default_str();
  simulate->add_option("--n-active", sim.n_active, "Samples with active sources per epoch")->capture_default_str();
  simulate->add_option("--sfreq", sim.sfreq, "Sampling rate in Hz")->capture_default_str();

  SpectrumFlags spec;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of R N^-1 with source count and rank");
  spec.in.add_to(*spectrum, false, 0.0);
  spec.thr.add_to(*spectrum);
  spectrum->add_option("--out", spec.out, "Spectrum report JSON path");
  spectrum->add_option("--csv", spec.csv, "Two-column (index, lambda) CSV path; defaults next to --out");

  LocalizeFlags loc;
  auto* localize = app.add_subcommand("localize", "Find active sources");
  loc.in.add_to(*localize, true, 0.0);
  loc.thr.add_to(*localize);
  localize->add_option("--index", loc.index, "mai | mpz | mai-mvp | mpz-mvp")->capture_default_str();
  localize->add_option("--rank", loc.rank, "Rank r for reduced-rank indices (default: from spectrum)");
  localize->add_option("--n-sources", loc.n_sources, "Number of sources l0 (default: from spectrum)");
  localize->add_option("--threads", loc.threads, "Parallel width, 0 for all cores")->capture_default_str();
  localize->add_option("--method", loc.method, "Search strategy")
      ->check(CLI::IsMember({"greedy", "bruteforce"}))
      ->capture_default_str();
  localize->add_option("--combo-limit", loc.combo_limit, "Largest subset count for bruteforce")
      ->capture_default_str();
  localize->add_flag("--record-candidates", loc.record_candidates, "Keep every candidate's index value");
  localize->add_option("--out", loc.out, "Result JSON path (stdout when omitted)");

  ReconstructFlags rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "Estimate source time courses with a spatial filter");
  rec.in.add_to(*reconstruct, true, 0.05);
  reconstruct->add_option("--filter", rec.filter, "lcmv-r | lcmv-n | mvp-r | mvp-n")->capture_default_str();
  reconstruct->add_option("--rank", rec.rank, "Filter rank for mvp kinds (default: rank_used of --sources)");
  reconstruct->add_option("--sources", rec.sources, "Localization result JSON");
  reconstruct->add_option("--out", rec.out, "Output MVPM1 file; a .json sidecar is written next to it");

  VerifyFlags ver;
  auto* verify = app.add_subcommand("verify", "Run the property suite on seeded scenarios");
  verify->add_option("--criteria", ver.criteria, "Comma-separated criterion ids (default: all)");
  verify->add_flag("--break-unbiasedness", ver.break_unbiasedness, "Negative control that must fail");
  verify->add_option("--threads", ver.threads, "Parallel width, 0 for all cores")->capture_default_str();

  const std::vector<CLI::App*> commands{simulate, spectrum, localize, reconstruct, verify};
  auto find_command = [&](const std::string& name) -> CLI::App* {
    for (auto* c : commands)
      if (c->get_name() == name) return c;
    return nullptr;
  };

  try {
    // Pull --config out, expand it into flags placed right after the
    // subcommand so explicit flags that follow still win.
    std::vector<std::string> args(args_in.begin(), args_in.end());
    bool has_config = false;
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        config_path = args[i + 1];
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        has_config = true;
        break;
      }
      if (args[i].rfind("--config=", 0) == 0) {
        config_path = args[i].substr(9);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        has_config = true;
        break;
      }
    }
    std::size_t cmd_pos = 0;
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (find_command(args[i])) {
        cmd_pos = i;
        break;
      }
    }
    if (has_config) {
      std::string config_command;
      const auto entries = read_config(config_path, config_command);
      if (entries.empty() && config_command.empty()) {
        err << "error: --config: '" << config_path << "' is empty\n" << app.help();
        return kUsageError;
      }
      if (cmd_pos == 0) {
        if (config_command.empty() || !find_command(config_command)) {
          err << app.help();
          return kUsageError;
        }
        args.push_back(config_command);
        cmd_pos = args.size() - 1;
      }
      CLI::App* cmd = find_command(args[cmd_pos]);
      std::vector<std::string> expanded;
      for (const auto& [flag, value] : entries) {
        const CLI::Option* opt = cmd->get_option_no_throw("--" + flag);
        if (opt == nullptr) {
          const bool known_elsewhere = std::any_of(commands.begin(), commands.end(), [&](CLI::App* c) {
            return c->get_option_no_throw("--" + flag) != nullptr;
          });
          if (!known_elsewhere) throw UsageError("--config: unknown key '" + flag + "'");
          continue;
        }
        if (opt->get_type_size() == 0) {
          if (value.is_boolean() && value.get<bool>()) expanded.push_back("--" + flag);
          continue;
        }
        expanded.push_back("--" + flag);
        expanded.push_back(config_value(value));
      }
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(cmd_pos) + 1, expanded.begin(), expanded.end());
    }
    if (cmd_pos == 0 && !(args.size() > 1 && (args[1] == "--help" || args[1] == "-h"))) {
      err << app.help();
      return kUsageError;
    }

    std::vector<char*> argv;
    argv.reserve(args.size());
    for (auto& a : args) argv.push_back(a.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kUsageError;
    }

    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (spectrum->parsed()) return cmd_spectrum(spec, out);
    if (localize->parsed()) return cmd_localize(loc, out);
    if (reconstruct->parsed()) return cmd_reconstruct(rec, out);
    if (verify->parsed()) return cmd_verify(ver, out);
    err << app.help();
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kNumericalFailure : kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace mvpure::cli
