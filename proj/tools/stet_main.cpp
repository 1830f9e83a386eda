#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stet/errors.hpp"
#include "stet/io.hpp"
#include "stet/metrics.hpp"
#include "stet/pipeline.hpp"
#include "stet/reconstruction.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumeric = 4;

// Parses "A=1,b=62.8,c=628" into a key/value map.
std::map<std::string, double> parse_kv(const std::string& text, const std::string& what) {
  std::map<std::string, double> kv;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw stet::ConfigError(what + ": expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    try {
      size_t pos = 0;
      const double value = std::stod(item.substr(eq + 1), &pos);
      if (pos != item.size() - eq - 1) throw std::invalid_argument(item);
      kv[key] = value;
    } catch (const std::exception&) {
      throw stet::ConfigError(what + ": bad numeric value in '" + item + "'");
    }
  }
  if (kv.empty()) throw stet::ConfigError(what + ": empty component recipe");
  return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key, double fallback,
            bool required, const std::string& what) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    if (required) throw stet::ConfigError(what + ": missing required key '" + key + "'");
    return fallback;
  }
  const double v = it->second;
  kv.erase(it);
  return v;
}

void reject_leftovers(const std::map<std::string, double>& kv, const std::string& what) {
  if (!kv.empty()) throw stet::ConfigError(what + ": unknown key '" + kv.begin()->first + "'");
}

// Analysis options shared by analyze/metrics/reconstruct.
struct AnalysisCli {
  std::string input;
  double beta = 0.0;
  double sigma_ms = 0.0;
  int n_fft = 0;
  double gamma = stet::kDefaultGamma;
  double boundary = 0.0;
  std::uint64_t seed = 0;

  void attach(CLI::App* app, bool with_input = true) {
    if (with_input)
      app->add_option("--input", input, "input signal (.csv or .wav)")->required();
    app->add_option("--beta", beta, "Gaussian window beta in s^2");
    app->add_option("--sigma-ms", sigma_ms, "window sigma in ms (beta = (sigma_ms/1000)^2)");
    app->add_option("--nfft", n_fft, "FFT length (default: next pow2 >= 4x window)");
    app->add_option("--gamma", gamma, "validity threshold relative to max|V|");
    app->add_option("--boundary", boundary, "chirp-rate routing boundary override, rad/s^2");
    app->add_option("--seed", seed, "noise seed for --snr-sweep and synth --snr");
  }

  double resolve_beta() const {
    if (beta > 0.0 && sigma_ms > 0.0)
      throw stet::ConfigError("--beta and --sigma-ms are mutually exclusive");
    if (sigma_ms > 0.0) {
      const double sigma_s = sigma_ms / 1000.0;
      return sigma_s * sigma_s;
    }
    return beta;
  }
};

struct LoadedSignal {
  stet::Signal signal;
  bool analytic_conversion = false;
};

LoadedSignal load_signal(const std::string& path) {
  LoadedSignal out;
  out.signal = stet::read_signal(path);
  bool real_only = true;
  for (Eigen::Index i = 0; i < out.signal.samples.size() && real_only; ++i)
    real_only = out.signal.samples[i].imag() == 0.0;
  if (real_only) {
    out.signal = stet::to_analytic(out.signal);
    out.analytic_conversion = true;
  }
  return out;
}

json resolved_config_json(const AnalysisCli& cli, const stet::AnalysisConfig& cfg,
                          const LoadedSignal& in, const std::string& method) {
  json j;
  j["input"] = cli.input;
  j["method"] = method;
  j["fs_hz"] = in.signal.sample_rate_hz;
  j["n_samples"] = in.signal.samples.size();
  j["analytic_conversion"] = in.analytic_conversion;
  j["beta_s2"] = cfg.window.beta_s2;
  j["sigma_ms"] = std::sqrt(cfg.window.beta_s2) * 1000.0;
  j["window_half_len"] = cfg.window.half_len;
  j["n_fft"] = cfg.n_fft;
  j["gamma"] = cfg.extraction.gamma;
  j["boundary_rad_s2"] = cfg.extraction.boundary_rad_s2;
  j["freq_tolerance_rad_s"] = cfg.extraction.freq_tolerance;
  j["time_tolerance_s"] = cfg.extraction.time_tolerance;
  j["seed"] = cli.seed;
  return j;
}

fs::path prepare_out_dir(const std::string& out) {
  if (out.empty()) throw stet::ConfigError("--out is required");
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw stet::InputError("cannot create output directory " + dir.string());
  return dir;
}

void check_finite_grid(const stet::TFGrid& g) {
  if (!g.values.allFinite()) throw stet::NumericError("transform produced non-finite values");
}

int run_synth(const std::vector<std::string>& tones, const std::vector<std::string>& lfms,
              const std::vector<std::string>& impulses, double fs, double dur,
              std::optional<double> snr_db, std::uint64_t seed, const std::string& out) {
  std::vector<stet::Signal> parts;
  for (const std::string& text : tones) {
    auto kv = parse_kv(text, "--tone");
    const double amplitude = take(kv, "A", 1.0, false, "--tone");
    double omega = take(kv, "omega", 0.0, false, "--tone");
    const double f_hz = take(kv, "f", 0.0, false, "--tone");
    reject_leftovers(kv, "--tone");
    if (omega == 0.0 && f_hz == 0.0) throw stet::ConfigError("--tone needs omega= or f=");
    if (omega == 0.0) omega = 2.0 * std::numbers::pi * f_hz;
    parts.push_back(stet::synth_harmonic(amplitude, omega, dur, fs));
  }
  for (const std::string& text : lfms) {
    auto kv = parse_kv(text, "--lfm");
    const double amplitude = take(kv, "A", 1.0, false, "--lfm");
    const double a = take(kv, "a", 0.0, false, "--lfm");
    const double b = take(kv, "b", 0.0, true, "--lfm");
    const double c = take(kv, "c", 0.0, true, "--lfm");
    reject_leftovers(kv, "--lfm");
    parts.push_back(stet::synth_lfm(amplitude, a, b, c, dur, fs));
  }
  for (const std::string& text : impulses) {
    auto kv = parse_kv(text, "--impulse");
    const double amplitude = take(kv, "A", 1.0, false, "--impulse");
    const double t0 = take(kv, "t0", 0.0, true, "--impulse");
    reject_leftovers(kv, "--impulse");
    parts.push_back(stet::synth_impulse(amplitude, t0, dur, fs));
  }
  if (parts.empty())
    throw stet::ConfigError("synth needs at least one of --tone/--lfm/--impulse");
  stet::Signal s = stet::mix(parts);
  if (snr_db) s = stet::add_noise(s, *snr_db, seed);
  // Synthetic records model real-valued measurements; the analysis commands
  // restore the analytic signal on ingestion.
  stet::write_signal_csv(out, s, /*include_imag=*/false);
  return kExitOk;
}

int run_analyze(const AnalysisCli& cli, const std::string& method_name, const std::string& format,
                bool export_fields, const std::string& out) {
  const stet::Method method = stet::method_from_name(method_name);
  if (format != "csv" && format != "bin")
    throw stet::ConfigError("--format must be csv or bin");
  const fs::path dir = prepare_out_dir(out);

  const LoadedSignal in = load_signal(cli.input);
  const stet::AnalysisConfig cfg =
      stet::make_analysis_config(in.signal.sample_rate_hz, in.signal.samples.size(),
                                 cli.resolve_beta(), cli.n_fft, cli.gamma, cli.boundary);
  const stet::Analysis a = stet::analyze(in.signal, cfg);

  std::vector<std::string> files;
  json params = resolved_config_json(cli, cfg, in, method_name);
  params["format"] = format;

  stet::TFGrid grid;
  if (method == stet::Method::Stet || method == stet::Method::Stet2) {
    const stet::StetResult r = stet::extract_stet(a, method == stet::Method::Stet2);
    grid = r.grid;
    stet::write_branch_map_csv(dir / "branch_map.csv", r.branch);
    files.push_back("branch_map.csv");
    params["fallback_pixels"] = r.fallback_pixel_count;
  } else {
    grid = stet::extract(a, method);
  }
  check_finite_grid(grid);

  if (format == "bin") {
    stet::write_tfr_bin(dir / "tfr.bin", grid);
    files.insert(files.begin(), "tfr.bin");
  } else {
    stet::write_tfr_csv(dir / "tfr.csv", grid);
    files.insert(files.begin(), "tfr.csv");
  }
  {
    std::ofstream sidecar(dir / "sidecar.json");
    sidecar << stet::tfr_sidecar_json(grid, json{{"config", params}}.dump());
  }
  files.push_back("sidecar.json");

  if (export_fields) {
    stet::write_field_csv(dir / "fields_omega_hat.csv", a.fields.omega_hat);
    stet::write_field_csv(dir / "fields_t_hat.csv", a.fields.t_hat);
    stet::write_field_csv(dir / "fields_chirp_rate.csv", a.fields.chirp_rate);
    files.push_back("fields_omega_hat.csv");
    files.push_back("fields_t_hat.csv");
    files.push_back("fields_chirp_rate.csv");
  }

  stet::write_manifest(dir, files, params.dump());
  return kExitOk;
}

int run_metrics(const AnalysisCli& cli, const std::string& method_name, int curve_points,
                double ridge_penalty, const std::string& sweep_text, const std::string& out) {
  const stet::Method method = stet::method_from_name(method_name);
  const fs::path dir = prepare_out_dir(out);

  const LoadedSignal in = load_signal(cli.input);
  const stet::AnalysisConfig cfg =
      stet::make_analysis_config(in.signal.sample_rate_hz, in.signal.samples.size(),
                                 cli.resolve_beta(), cli.n_fft, cli.gamma, cli.boundary);
  const stet::Analysis a = stet::analyze(in.signal, cfg);
  const stet::TFGrid grid = extract(a, method);
  check_finite_grid(grid);

  const stet::ConcentrationReport report =
      stet::concentration_report(grid, curve_points, 3.0, ridge_penalty);

  json j;
  j["method"] = method_name;
  j["renyi_entropy_bits"] = report.renyi_entropy_bits;
  j["renyi_alpha"] = report.renyi_alpha;
  j["normalized_energy"] = json::array();
  for (const auto& p : report.normalized_energy)
    j["normalized_energy"].push_back({p.coefficient_count, p.energy_fraction});
  j["config"] = resolved_config_json(cli, cfg, in, method_name);

  std::vector<std::string> files;
  {
    std::vector<std::pair<double, double>> rows;
    for (const auto& p : report.normalized_energy)
      rows.emplace_back(static_cast<double>(p.coefficient_count), p.energy_fraction);
    stet::write_xy_csv(dir / "energy_curve.csv", "coefficient_count", "energy_fraction", rows);
    files.push_back("energy_curve.csv");
  }
  {
    std::ofstream ridge(dir / "ridge.csv");
    ridge << "time_s,omega_rad_s,magnitude\n";
    char buf[128];
    for (const auto& p : report.ridge.points) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.time_s, p.omega_rad_s, p.magnitude);
      ridge << buf;
    }
    files.push_back("ridge.csv");
  }
  if (!sweep_text.empty()) {
    std::vector<double> snrs;
    std::stringstream ss(sweep_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        snrs.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw stet::ConfigError("--snr-sweep: bad value '" + item + "'");
      }
    }
    const auto sweep = stet::snr_sweep(in.signal, snrs, method, cfg, cli.seed);
    std::vector<std::pair<double, double>> rows;
    j["snr_sweep"] = json::array();
    for (const auto& p : sweep) {
      rows.emplace_back(p.snr_db, p.renyi_entropy_bits);
      j["snr_sweep"].push_back({p.snr_db, p.renyi_entropy_bits});
    }
    stet::write_xy_csv(dir / "sweep.csv", "snr_db", "renyi_entropy_bits", rows);
    files.push_back("sweep.csv");
  }
  {
    std::ofstream rep(dir / "report.json");
    rep << j.dump(2) << "\n";
    files.insert(files.begin(), "report.json");
  }
  stet::write_manifest(dir, files, j["config"].dump());
  return kExitOk;
}

int run_reconstruct(const AnalysisCli& cli, const std::string& out) {
  const fs::path dir = prepare_out_dir(out);
  const LoadedSignal in = load_signal(cli.input);
  const stet::AnalysisConfig cfg =
      stet::make_analysis_config(in.signal.sample_rate_hz, in.signal.samples.size(),
                                 cli.resolve_beta(), cli.n_fft, cli.gamma, cli.boundary);
  const stet::Analysis a = stet::analyze(in.signal, cfg);
  const stet::StetResult extracted = stet::extract_stet(a, true);
  check_finite_grid(extracted.grid);
  const stet::ReconstructionResult r = stet::reconstruct(extracted);
  if (!r.total.samples.allFinite())
    throw stet::NumericError("reconstruction produced non-finite samples");

  stet::write_signal_csv(dir / "s1.csv", r.s1);
  stet::write_signal_csv(dir / "s2.csv", r.s2);
  stet::write_signal_csv(dir / "total.csv", r.total);

  // Interior reconstruction SNR against the (analytic) input as reference.
  double ref_energy = 0.0, err_energy = 0.0;
  Eigen::Index interior_begin = -1, interior_end = -1;
  for (Eigen::Index n = 0; n < in.signal.samples.size(); ++n) {
    if (!r.interior_mask[n]) continue;
    if (interior_begin < 0) interior_begin = n;
    interior_end = n + 1;
    ref_energy += std::norm(in.signal.samples[n]);
    err_energy += std::norm(in.signal.samples[n] - r.total.samples[n]);
  }
  json j;
  j["interior_snr_db"] = err_energy > 0.0 && ref_energy > 0.0
                             ? 10.0 * std::log10(ref_energy / err_energy)
                             : std::numeric_limits<double>::infinity();
  j["interior_begin_sample"] = interior_begin;
  j["interior_end_sample"] = interior_end;
  j["s1_energy"] = r.s1.samples.squaredNorm();
  j["s2_energy"] = r.s2.samples.squaredNorm();
  j["input_energy"] = in.signal.samples.squaredNorm();
  j["fallback_pixels"] = extracted.fallback_pixel_count;
  if (in.signal.samples.size() > cfg.n_fft)
    j["warning"] = "record longer than n_fft; impulsive-branch reconstruction is periodized";
  j["config"] = resolved_config_json(cli, cfg, in, "stet2");
  std::ofstream rep(dir / "recon_report.json");
  rep << j.dump(2) << "\n";

  stet::write_manifest(dir, {"s1.csv", "s2.csv", "total.csv", "recon_report.json"},
                       j["config"].dump());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp time-frequency analysis by synchro/transient extraction"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic signal CSV");
  std::vector<std::string> tones, lfms, impulses;
  double fs = 0.0, dur = 0.0;
  double snr_value = 0.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  synth->add_option("--fs", fs, "sample rate, Hz")->required();
  synth->add_option("--dur", dur, "duration, s")->required();
  synth->add_option("--tone", tones, "tone recipe A=..,omega=..|f=.. (repeatable)");
  synth->add_option("--lfm", lfms, "chirp recipe A=..,a=..,b=..,c=.. (repeatable)");
  synth->add_option("--impulse", impulses, "impulse recipe A=..,t0=.. (repeatable)");
  auto* snr_opt = synth->add_option("--snr", snr_value, "add noise at this SNR, dB");
  synth->add_option("--seed", synth_seed, "noise seed");
  synth->add_option("--out", synth_out, "output CSV path")->required();

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "compute a TFR and export it");
  AnalysisCli analyze_cli;
  analyze_cli.attach(analyze_cmd);
  std::string analyze_method = "stet2", analyze_format = "csv", analyze_out;
  bool export_fields = false;
  analyze_cmd->add_option("--method", analyze_method, "stft|set|tet|stet|stet2");
  analyze_cmd->add_option("--format", analyze_format, "tfr export format: csv|bin");
  analyze_cmd->add_flag("--export-fields", export_fields, "also export estimator fields");
  analyze_cmd->add_option("--out", analyze_out, "output directory")->required();

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "concentration metrics for a TFR");
  AnalysisCli metrics_cli;
  metrics_cli.attach(metrics_cmd);
  std::string metrics_method = "stet2", sweep_text, metrics_out;
  int curve_points = 200;
  double ridge_penalty = 1.0;
  metrics_cmd->add_option("--method", metrics_method, "stft|set|tet|stet|stet2");
  metrics_cmd->add_option("--points", curve_points, "energy curve sample count");
  metrics_cmd->add_option("--ridge-penalty", ridge_penalty, "ridge smoothness penalty");
  metrics_cmd->add_option("--snr-sweep", sweep_text, "comma-separated SNR levels, dB");
  metrics_cmd->add_option("--out", metrics_out, "output directory")->required();

  // reconstruct
  auto* recon_cmd = app.add_subcommand("reconstruct", "improved-STET component reconstruction");
  AnalysisCli recon_cli;
  recon_cli.attach(recon_cmd);
  std::string recon_out;
  recon_cmd->add_option("--out", recon_out, "output directory")->required();

  try {
    app.parse(argc, argv);
    if (synth->parsed()) {
      std::optional<double> snr;
      if (snr_opt->count() > 0) snr = snr_value;
      return run_synth(tones, lfms, impulses, fs, dur, snr, synth_seed, synth_out);
    }
    if (analyze_cmd->parsed())
      return run_analyze(analyze_cli, analyze_method, analyze_format, export_fields, analyze_out);
    if (metrics_cmd->parsed())
      return run_metrics(metrics_cli, metrics_method, curve_points, ridge_penalty, sweep_text,
                         metrics_out);
    if (recon_cmd->parsed()) return run_reconstruct(recon_cli, recon_out);
    std::fprintf(stderr, "E_CONFIG: no subcommand given\n");
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::fprintf(stderr, "E_CONFIG: %s\n", e.what());
    return kExitConfig;
  } catch (const stet::ConfigError& e) {
    std::fprintf(stderr, "E_CONFIG: %s\n", e.what());
    return kExitConfig;
  } catch (const stet::InputError& e) {
    std::fprintf(stderr, "E_INPUT: %s\n", e.what());
    return kExitInput;
  } catch (const stet::NumericError& e) {
    std::fprintf(stderr, "E_NUMERIC: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "E_NUMERIC: %s\n", e.what());
    return kExitNumeric;
  }
}
