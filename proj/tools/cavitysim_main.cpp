// cavitysim: batch front end for the cavity-QED analysis toolkit.
//
// Commands: spectrum, fit, readout, carve, gate, bell-fidelity, sweep.
// Flags:    --config <path>, --set key=value, --out <dir>, --seed <u64>,
//           --format csv|json.
// Exit:     0 success, 2 validation error, 3 numerical non-convergence.

#include <chrono>
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

#include "cavitysim/models.hpp"
#include "cavitysim/protocols.hpp"
#include "cavitysim/readout.hpp"
#include "cavitysim/spectra.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cavitysim;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Ctx {
  json cfg = json::object();
  fs::path out_dir = ".";
  std::uint64_t seed = 1;
  std::string format = "json";
};

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double getd(const json& j, const std::string& key, double def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument("config key '" + key + "' must be numeric");
  return v.get<double>();
}

std::int64_t geti(const json& j, const std::string& key, std::int64_t def) {
  if (!j.contains(key)) return def;
  return j.at(key).get<std::int64_t>();
}

std::string gets(const json& j, const std::string& key, const std::string& def) {
  if (!j.contains(key)) return def;
  return j.at(key).get<std::string>();
}

void apply_override(json& cfg, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
  std::string key = kv.substr(0, eq);
  std::string val = kv.substr(eq + 1);
  json parsed;
  try {
    parsed = json::parse(val);
  } catch (const json::parse_error&) {
    parsed = val; // bare strings stay strings
  }
  cfg[key] = parsed;
}

void load_config(Ctx& ctx, const std::string& path,
                 const std::vector<std::string>& overrides) {
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    try {
      ctx.cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (!ctx.cfg.is_object())
      throw std::invalid_argument("config root must be a JSON object");
  }
  for (const auto& kv : overrides) apply_override(ctx.cfg, kv);
}

CavityParams cavity_params(const json& c) {
  CavityParams p;
  double g = getd(c, "g", p.g_A);
  p.g_A = getd(c, "g_A", g);
  p.g_B = getd(c, "g_B", g);
  p.kappa = getd(c, "kappa", p.kappa);
  p.gamma = getd(c, "gamma", p.gamma);
  p.delta_c = getd(c, "delta_c", 0.0);
  p.delta_a = getd(c, "delta_a", 0.0);
  p.omega_probe = getd(c, "omega_probe", 1.0);
  p.omega_side_A = getd(c, "omega_side_A", getd(c, "omega_side", 0.0));
  p.omega_side_B = getd(c, "omega_side_B", getd(c, "omega_side", 0.0));
  p.phi_rel = getd(c, "phi_rel", 0.0);
  if (!p.valid()) throw std::invalid_argument("invalid cavity parameters");
  return p;
}

Rb87Params rb87_params(const json& c) {
  Rb87Params p;
  p.g = getd(c, "g", p.g);
  p.kappa = getd(c, "kappa", p.kappa);
  p.gamma = getd(c, "gamma", p.gamma);
  p.omega = getd(c, "omega", p.omega);
  p.delta = getd(c, "delta", p.delta);
  p.delta2 = getd(c, "delta2", p.delta2);
  p.delta3 = getd(c, "delta3", p.delta3);
  if (p.g <= 0 || p.kappa <= 0 || p.gamma <= 0)
    throw std::invalid_argument("rb87 parameters must be positive");
  return p;
}

std::vector<double> detuning_grid(const json& c, double lo, double hi, int n) {
  lo = getd(c, "detuning_min", lo);
  hi = getd(c, "detuning_max", hi);
  n = static_cast<int>(geti(c, "points", n));
  if (n < 2 || hi <= lo)
    throw std::invalid_argument("need points >= 2 and detuning_max > detuning_min");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

json header_json(const Ctx& ctx, const std::string& command) {
  return json{{"toolkit", "cavitysim"},
              {"version", kVersion},
              {"command", command},
              {"seed", ctx.seed},
              {"timestamp", timestamp_utc()},
              {"config", ctx.cfg}};
}

void write_report(const Ctx& ctx, const std::string& command, json results) {
  json report = header_json(ctx, command);
  report["results"] = std::move(results);
  fs::create_directories(ctx.out_dir);
  fs::path path = ctx.out_dir / (command + "_report.json");
  std::ofstream out(path);
  out << report.dump(2) << "\n";
  std::cout << report.dump(2) << "\n";
}

void write_csv(const Ctx& ctx, const std::string& name,
               const std::string& columns,
               const std::vector<std::vector<double>>& rows) {
  fs::create_directories(ctx.out_dir);
  fs::path path = ctx.out_dir / (name + ".csv");
  std::ofstream out(path);
  out << "# cavitysim " << kVersion << " config=" << ctx.cfg.dump() << "\n";
  out << "# timestamp=" << timestamp_utc() << "\n";
  out << columns << "\n";
  out << std::setprecision(12);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      out << (i ? "," : "") << r[i];
    out << "\n";
  }
}

json spectrum_json(const Spectrum& s) {
  return json{{"label", s.label},
              {"detunings_mhz", s.detunings_mhz},
              {"signal", s.signal},
              {"peaks_mhz", find_peaks(s)}};
}

// ---- commands --------------------------------------------------------

void cmd_spectrum(const Ctx& ctx) {
  CavityParams p = cavity_params(ctx.cfg);
  auto grid = detuning_grid(ctx.cfg, -250.0, 250.0, 501);
  std::string kind = gets(ctx.cfg, "drive", "probe");

  std::vector<Spectrum> traces;
  for (int n_atoms : {0, 1, 2}) {
    CavityParams q = p;
    if (n_atoms < 2) q.g_B = 0;
    if (n_atoms < 1) q.g_A = 0;
    Spectrum s = kind == "side"
                     ? side_drive_spectrum_analytic(q, n_atoms, grid)
                     : probe_transmission_analytic(q, grid);
    s.label = std::to_string(n_atoms) + "_atoms";
    traces.push_back(std::move(s));
  }
  if (ctx.format == "csv") {
    for (const auto& s : traces) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < s.signal.size(); ++i)
        rows.push_back({s.detunings_mhz[i], s.signal[i]});
      write_csv(ctx, "spectrum_" + s.label, "detuning_mhz,signal", rows);
    }
  }
  json res;
  for (const auto& s : traces) res["traces"].push_back(spectrum_json(s));
  write_report(ctx, "spectrum", res);
}

void cmd_fit(const Ctx& ctx) {
  CavityParams p = cavity_params(ctx.cfg);
  auto grid = detuning_grid(ctx.cfg, -250.0, 250.0, 201);

  std::vector<LabeledSpectrum> data;
  for (int n_atoms : {0, 1, 2}) {
    CavityParams q = p;
    if (n_atoms < 2) q.g_B = 0;
    if (n_atoms < 1) q.g_A = 0;
    data.push_back({probe_transmission_analytic(q, grid), n_atoms});
  }
  double g_guess = getd(ctx.cfg, "g_guess", 0.8 * p.g_A);
  double kappa_guess = getd(ctx.cfg, "kappa_guess", 1.2 * p.kappa);
  FitResult fit = fit_cavity_params(data, g_guess, kappa_guess, p.gamma);

  json res{{"g", fit.g},
           {"kappa", fit.kappa},
           {"g_err", fit.g_err},
           {"kappa_err", fit.kappa_err},
           {"residual_norm", fit.residual_norm},
           {"iterations", fit.iterations},
           {"converged", fit.converged}};
  write_report(ctx, "fit", res);
}

void cmd_readout(const Ctx& ctx) {
  ThresholdModel m;
  m.mu_low = getd(ctx.cfg, "mu_low", m.mu_low);
  m.mu_high = getd(ctx.cfg, "mu_high", m.mu_high);
  m.k_threshold = ctx.cfg.contains("k_threshold")
                      ? static_cast<int>(geti(ctx.cfg, "k_threshold", 3))
                      : optimal_threshold(m.mu_low, m.mu_high);
  if (!m.valid()) throw std::invalid_argument("invalid threshold model");
  auto [p_fp, p_fn] = readout_error_probs(m);

  DetectorModel d;
  d.dead_time_ns = getd(ctx.cfg, "dead_time_ns", d.dead_time_ns);
  d.dark_rate_cps = getd(ctx.cfg, "dark_rate_cps", d.dark_rate_cps);
  d.n_detectors = static_cast<int>(geti(ctx.cfg, "n_detectors", d.n_detectors));

  json res{{"k_threshold", m.k_threshold},
           {"p_false_positive", p_fp},
           {"p_false_negative", p_fn},
           {"dead_time_rollover_cps", dead_time_rollover_cps(d)}};

  std::int64_t n_mc = geti(ctx.cfg, "mc_windows", 0);
  if (n_mc > 0) {
    for (bool coupled : {false, true}) {
      auto counts = simulate_windows(coupled, m, n_mc, ctx.seed + (coupled ? 1 : 0));
      std::int64_t wrong = 0;
      for (int c : counts) {
        bool high = c > m.k_threshold;
        if (high == coupled) ++wrong; // coupled should read low
      }
      auto [lo, hi] = clopper_pearson(wrong, n_mc);
      json blk{{"windows", n_mc},
               {"errors", wrong},
               {"rate", static_cast<double>(wrong) / n_mc},
               {"ci95", {lo, hi}}};
      res[coupled ? "mc_coupled" : "mc_uncoupled"] = blk;
    }
  }
  write_report(ctx, "readout", res);
}

json outcome_json(const CarvingOutcome& o) {
  return json{{"fidelity", o.fidelity},
              {"success_probability", o.success_probability},
              {"pulse_time_us", o.pulse_time_us}};
}

void cmd_carve(const Ctx& ctx) {
  std::string model = gets(ctx.cfg, "model", "simplified");
  double t = getd(ctx.cfg, "pulse_time_us", 100.0);
  json res{{"model", model}};
  if (model == "simplified") {
    double gamma = getd(ctx.cfg, "gamma", 6.0);
    double coop = getd(ctx.cfg, "cooperativity", 101.0);
    double omega = getd(ctx.cfg, "omega", 0.1);
    res["outcome"] = outcome_json(carving_outcome_simplified(omega, gamma, coop, t));
  } else if (model == "rb87" || model == "rb87-closed-form") {
    Rb87Params p = rb87_params(ctx.cfg);
    bool exact = model == "rb87";
    CarvingRates r = carving_rates_rb87(p, exact);
    res["outcome"] = outcome_json(carving_outcome_rb87(p, t, exact));
    res["ceiling"] = carving_ceiling_rb87(p, exact);
    res["rates"] = json{{"delta3_tilde", r.delta3_tilde},
                        {"delta4_tilde", r.delta4_tilde},
                        {"gamma3d", r.gamma3d},
                        {"gamma3nd", r.gamma3nd},
                        {"gamma4d", r.gamma4d},
                        {"gamma4nd", r.gamma4nd}};
  } else {
    throw std::invalid_argument("carve: unknown model '" + model + "'");
  }
  write_report(ctx, "carve", res);
}

json metrics_json(const GateMetrics& m) {
  return json{{"omega_opt", m.omega_opt},
              {"f_uncorr", m.f_uncorr},
              {"p_success", m.p_success},
              {"f_corr", m.f_corr},
              {"f_phase_corrected", m.f_phase_corrected},
              {"alpha", m.alpha},
              {"alpha_balanced_p", m.alpha_balanced_p},
              {"t_gate_us", m.t_gate_us}};
}

void cmd_gate(const Ctx& ctx) {
  std::string model = gets(ctx.cfg, "model", "simplified");
  std::optional<double> omega;
  if (ctx.cfg.contains("omega")) omega = getd(ctx.cfg, "omega", 0.0);
  GateMetrics m;
  if (model == "simplified") {
    double gamma = getd(ctx.cfg, "gamma", 6.0);
    double kappa = getd(ctx.cfg, "kappa", 65.0);
    if (ctx.cfg.contains("cooperativity"))
      m = cz_gate_metrics_simplified_coop(gamma, kappa,
                                          getd(ctx.cfg, "cooperativity", 101.0),
                                          omega);
    else
      m = cz_gate_metrics_simplified(gamma, kappa, getd(ctx.cfg, "g", 100.0),
                                     omega);
  } else if (model == "rb87") {
    Rb87Params p = rb87_params(ctx.cfg);
    m = omega ? cz_gate_metrics_rb87(p) : cz_gate_optimal_rb87(p);
    if (omega) m.omega_opt = *omega;
  } else {
    throw std::invalid_argument("gate: unknown model '" + model + "'");
  }
  json res{{"model", model}, {"metrics", metrics_json(m)}};
  write_report(ctx, "gate", res);
}

void cmd_bell_fidelity(const Ctx& ctx) {
  if (!ctx.cfg.contains("populations"))
    throw std::invalid_argument(
        "bell-fidelity: config needs 'populations' (3x4 array, bases x,y,z)");
  MeasurementSet ms;
  const auto& pops = ctx.cfg.at("populations");
  if (!pops.is_array() || pops.size() != 3)
    throw std::invalid_argument("populations must be a 3x4 array");
  for (int b = 0; b < 3; ++b) {
    const auto& row = pops.at(b);
    if (!row.is_array() || row.size() != 4)
      throw std::invalid_argument("populations must be a 3x4 array");
    for (int i = 0; i < 4; ++i) ms.populations[b][i] = row.at(i).get<double>();
  }
  if (ctx.cfg.contains("errors")) {
    const auto& errs = ctx.cfg.at("errors");
    for (int b = 0; b < 3; ++b)
      for (int i = 0; i < 4; ++i) ms.errors[b][i] = errs.at(b).at(i).get<double>();
  }
  std::string target = gets(ctx.cfg, "target", "phi-");
  BellTarget bt;
  if (target == "phi-") bt = BellTarget::PhiMinus;
  else if (target == "phi+") bt = BellTarget::PhiPlus;
  else throw std::invalid_argument("target must be phi+ or phi-");
  BellFidelity f = bell_fidelity(ms, bt);

  json res{{"target", target},
           {"fidelity", f.fidelity},
           {"uncertainty", f.uncertainty}};
  for (int b = 0; b < 3; ++b) {
    auto [par, tr] = parity_and_trace(ms, b);
    res["parities"].push_back(par);
    res["traces"].push_back(tr);
  }
  write_report(ctx, "bell-fidelity", res);
}

void cmd_sweep(const Ctx& ctx) {
  std::string target = gets(ctx.cfg, "target", "gate");
  std::string param = gets(ctx.cfg, "param", "omega");
  double lo = getd(ctx.cfg, "from", 0.0);
  double hi = getd(ctx.cfg, "to", 0.0);
  int n = static_cast<int>(geti(ctx.cfg, "points", 0));
  if (n < 2 || hi <= lo)
    throw std::invalid_argument("sweep: need from < to and points >= 2");

  std::vector<std::vector<double>> rows;
  std::string columns;
  for (int i = 0; i < n; ++i) {
    double x = lo + (hi - lo) * i / (n - 1);
    json cfg = ctx.cfg;
    cfg[param] = x;
    if (target == "gate") {
      std::string model = gets(cfg, "model", "simplified");
      GateMetrics m;
      if (model == "rb87") {
        Rb87Params p = rb87_params(cfg);
        m = cz_gate_metrics_rb87(p);
      } else if (cfg.contains("cooperativity")) {
        m = cz_gate_metrics_simplified_coop(getd(cfg, "gamma", 6.0),
                                            getd(cfg, "kappa", 65.0),
                                            getd(cfg, "cooperativity", 101.0),
                                            getd(cfg, "omega", 1.0));
      } else {
        m = cz_gate_metrics_simplified(getd(cfg, "gamma", 6.0),
                                       getd(cfg, "kappa", 65.0),
                                       getd(cfg, "g", 100.0),
                                       getd(cfg, "omega", 1.0));
      }
      columns = param + ",f_uncorr,p_success,f_corr";
      rows.push_back({x, m.f_uncorr, m.p_success, m.f_corr});
    } else if (target == "carve") {
      std::string model = gets(cfg, "model", "simplified");
      CarvingOutcome o;
      if (model == "simplified")
        o = carving_outcome_simplified(getd(cfg, "omega", 0.1),
                                       getd(cfg, "gamma", 6.0),
                                       getd(cfg, "cooperativity", 101.0),
                                       getd(cfg, "pulse_time_us", 100.0));
      else
        o = carving_outcome_rb87(rb87_params(cfg),
                                 getd(cfg, "pulse_time_us", 100.0));
      columns = param + ",fidelity,success_probability";
      rows.push_back({x, o.fidelity, o.success_probability});
    } else {
      throw std::invalid_argument("sweep: unknown target '" + target + "'");
    }
  }
  write_csv(ctx, "sweep_" + target + "_" + param, columns, rows);
  json res{{"target", target},
           {"param", param},
           {"points", n},
           {"columns", columns},
           {"rows", rows}};
  write_report(ctx, "sweep", res);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavitysim: cavity-QED spectra, readout, carving and gate analysis"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir = ".", format = "json";
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--set", overrides, "flat key=value config overrides");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  const std::vector<std::pair<std::string, void (*)(const Ctx&)>> commands = {
      {"spectrum", cmd_spectrum},     {"fit", cmd_fit},
      {"readout", cmd_readout},       {"carve", cmd_carve},
      {"gate", cmd_gate},             {"bell-fidelity", cmd_bell_fidelity},
      {"sweep", cmd_sweep}};
  for (const auto& [name, fn] : commands)
    app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (app.get_subcommands().empty()) {
    std::cout << app.help() << "\n";
    return 0;
  }

  Ctx ctx;
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  ctx.format = format;
  try {
    load_config(ctx, config_path, overrides);
    for (const auto& [name, fn] : commands)
      if (app.get_subcommand(name)->parsed()) fn(ctx);
    return 0;
  } catch (const std::invalid_argument& e) {
    json err{{"error", "validation"}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err{{"error", "numerical"}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 3;
  }
}
