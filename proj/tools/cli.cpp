#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "gaussriesz/calibration.hpp"
#include "gaussriesz/format.hpp"
#include "gaussriesz/riesz_kernel.hpp"
#include "gaussriesz/riesz_spectral.hpp"
#include "gaussriesz/suites.hpp"

namespace gaussriesz::cli {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::vector<std::string> kKeys{"n",       "degree", "nodes",  "alpha",       "family", "k",
                                     "seed",    "out",    "input",  "range",       "kernel", "samples",
                                     "atoms",   "calibration"};

// Flag values over config values, remembering where each came from.
class Settings {
 public:
  std::map<std::string, std::string> flags;
  std::map<std::string, ConfigEntry> config;
  std::string config_name;

  std::optional<std::string> raw(const std::string& key) const {
    if (auto it = flags.find(key); it != flags.end()) return it->second;
    if (auto it = config.find(key); it != config.end()) return it->second.value;
    return std::nullopt;
  }
  bool has(const std::string& key) const { return raw(key).has_value(); }

  std::string where(const std::string& key) const {
    if (flags.count(key)) return "--" + key;
    const auto it = config.find(key);
    return config_name + ":" + std::to_string(it->second.line) + ": " + key;
  }

  template <class F>
  auto convert(const std::string& key, F f) const -> decltype(f(std::string())) {
    const std::string v = *raw(key);
    try {
      return f(v);
    } catch (const std::exception& e) {
      throw UsageError(where(key) + ": invalid value '" + v + "' (" + e.what() + ")");
    }
  }

  std::string text(const std::string& key, const std::string& fallback) const { return raw(key).value_or(fallback); }

  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    return convert(key, [](const std::string& v) {
      std::size_t pos = 0;
      const long x = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("not an integer");
      return x;
    });
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return convert(key, [](const std::string& v) {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument("not a finite number");
      return x;
    });
  }

  bool boolean(const std::string& key) const {
    if (!has(key)) return false;
    return convert(key, [](const std::string& v) {
      if (v == "true" || v == "1" || v == "yes") return true;
      if (v == "false" || v == "0" || v == "no") return false;
      throw std::invalid_argument("expected true or false");
    });
  }
};

struct Common {
  int n = 1;
  bool n_given = false;
  std::optional<MultiIndex> alpha;
  Family family = Family::Old;
  int k = 1;
  bool k_given = false;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string calibration = "calibration.txt";
};

Common common(const Settings& s) {
  Common c;
  c.n_given = s.has("n");
  c.n = static_cast<int>(s.integer("n", 1));
  if (c.n < 1 || c.n > 3) throw UsageError((c.n_given ? s.where("n") : "n") + ": n must be 1, 2 or 3");
  if (s.has("alpha")) {
    c.alpha = s.convert("alpha", [](const std::string& v) { return MultiIndex::parse(v); });
    if (c.alpha->order() < 1) throw UsageError(s.where("alpha") + ": |alpha| must be at least 1");
    if (c.n_given && c.alpha->dim() != c.n)
      throw UsageError(s.where("alpha") + ": alpha has " + std::to_string(c.alpha->dim()) + " entries but n = " +
                       std::to_string(c.n));
    c.n = c.alpha->dim();
    if (c.n > 3) throw UsageError(s.where("alpha") + ": at most 3 entries");
  }
  if (s.has("family")) c.family = s.convert("family", [](const std::string& v) { return parse_family(v); });
  c.k_given = s.has("k");
  c.k = static_cast<int>(s.integer("k", 1));
  if (c.k < 1 || c.k > 3) throw UsageError(s.where("k") + ": k must be 1, 2 or 3");
  const long seed = s.integer("seed", static_cast<long>(kDefaultSeed));
  if (seed < 0) throw UsageError(s.where("seed") + ": seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.out = s.text("out", "");
  c.calibration = s.text("calibration", c.calibration);
  return c;
}

int positive(const Settings& s, const std::string& key, int fallback, int max) {
  const long v = s.integer(key, fallback);
  if (v < 1 || v > max) throw UsageError(s.where(key) + ": must be between 1 and " + std::to_string(max));
  return static_cast<int>(v);
}

void write_report(const std::string& dir, const SweepReport& r) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / (r.experiment + ".csv"));
  write_csv(f, r);
}

nlohmann::json report_json(const SweepReport& r, const std::string& dir) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["seed"] = r.seed;
  j["rows"] = r.rows;
  j["violations"] = r.violations;
  j["passed"] = r.passed();
  j["failures"] = r.failures;
  j["notes"] = r.notes;
  j["runtime_seconds"] = r.runtime_seconds;
  nlohmann::json obs = nlohmann::json::object();
  for (const auto& [k, v] : r.observed) obs[k] = v;
  j["observed"] = obs;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  if (!dir.empty()) j["csv"] = (std::filesystem::path(dir) / (r.experiment + ".csv")).string();
  return j;
}

// ---- transform

int cmd_transform(const Settings& s, std::ostream& out) {
  const Common c = common(s);
  if (!c.alpha) throw UsageError("transform: --alpha is required");
  if (!s.has("input")) throw UsageError("transform: --input is required");
  const Budget b = budget(c.n);
  const int degree = positive(s, "degree", 30, b.max_degree);
  const int nodes = positive(s, "nodes", c.n == 1 ? 21 : 9, b.max_nodes);
  const double range = s.real("range", 2.0);
  if (!(range > 0.0)) throw UsageError(s.where("range") + ": must be positive");
  const bool kernel = s.boolean("kernel");
  const HermiteCoeffs f =
      s.convert("input", [&](const std::string& v) { return parse_input(v, c.n); });
  if (f.max_degree() > degree)
    throw UsageError(s.where("input") + ": input degree " + std::to_string(f.max_degree()) + " exceeds --degree " +
                     std::to_string(degree));

  const auto t0 = std::chrono::steady_clock::now();
  const RieszOrder order(*c.alpha, c.family);
  const HermiteCoeffs g = riesz_apply(order, f);

  std::optional<KernelSpec> spec;
  CompactFunction masked;
  if (kernel) {
    spec = calibrated_spec(*c.alpha, c.family, read_calibration(c.calibration));
    masked.f = [&f](const Eigen::Ref<const Eigen::VectorXd>& y) { return calibration_mask(y) * f.evaluate(y); };
    masked.support = Ball{Eigen::VectorXd::Zero(c.n), kMaskOuter};
  }

  SweepReport rep;
  rep.experiment = "transform";
  rep.seed = c.seed;
  rep.param("family", to_string(c.family));
  rep.param("alpha", c.alpha->to_string(':'));
  rep.param("input", *s.raw("input"));
  rep.param("degree", cell(degree));
  rep.param("nodes", cell(nodes));
  rep.param("range", cell(range));
  for (int i = 0; i < c.n; ++i) rep.columns.push_back("x" + std::to_string(i + 1));
  rep.columns.insert(rep.columns.end(), {"input", "spectral"});
  if (kernel) {
    rep.param("kernel_normalization", cell(spec->normalization));
    rep.param("kernel_input", "input times the calibration mask");
    rep.columns.insert(rep.columns.end(), {"kernel", "kernel_reliable"});
  }

  long total = 1;
  for (int i = 0; i < c.n; ++i) total *= nodes;
  Eigen::VectorXd x(c.n);
  for (long id = 0; id < total; ++id) {
    long rest = id;
    for (int i = c.n - 1; i >= 0; --i) {
      const long j = rest % nodes;
      rest /= nodes;
      x(i) = nodes == 1 ? 0.0 : -range + 2.0 * range * static_cast<double>(j) / (nodes - 1);
    }
    std::vector<std::string> row;
    for (int i = 0; i < c.n; ++i) row.push_back(cell(x(i)));
    row.push_back(cell(f.evaluate(x)));
    row.push_back(cell(g.evaluate(x)));
    if (kernel) {
      const PVResult pv = apply_riesz_pv(*spec, masked, x);
      row.push_back(cell(pv.value));
      row.push_back(pv.reliable ? "1" : "0");
    }
    rep.add_row(row);
  }
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(c.out, rep);
  write_csv(out, rep);
  return kExitPass;
}

// ---- verify

std::vector<SweepReport> run_atom_sweep(const Settings& s, const Common& c) {
  std::vector<int> e(static_cast<std::size_t>(c.n), 0);
  e[0] = c.k;
  const MultiIndex alpha = c.alpha.value_or(MultiIndex(e));
  const int atoms = positive(s, "atoms", 20, 1000);
  FamilySettings fs;
  fs.count = atoms;
  fs.dim = c.n;
  fs.k = c.k;
  fs.min_fraction = c.k == 3 ? 0.3 : 0.05;
  fs.offsets = c.family == Family::New;
  fs.seed = c.seed;
  const auto family = random_atom_family(fs);

  std::vector<SweepReport> out;
  if (c.family == Family::Old) {
    CertificateSettings cs;
    cs.seed = c.seed;
    cs.scattered = family;
    out.push_back(certify_atom_families(cs));
    out.back().experiment = "atom-certificates";
  }
  BoundednessSettings b;
  b.alpha = alpha;
  b.family = c.family;
  b.kind = c.family == Family::Old ? AtomKind::Xk : AtomKind::H1;
  b.atoms = family;
  b.include_constant = c.family == Family::New;
  b.seed = c.seed;
  if (c.n >= 2) {
    b.pv.angular_nodes = 192;
    b.cross_check_every = 2;
  }
  out.push_back(sweep_atom_boundedness(b));
  return out;
}

std::vector<SweepReport> run_selector(const std::string& what, const Settings& s, const Common& c,
                                      nlohmann::json& suites) {
  std::vector<SweepReport> out;
  if (what == "geometry") {
    GeometrySettings st;
    st.seed = c.seed;
    st.samples = static_cast<std::size_t>(positive(s, "samples", 100000, 10000000));
    if (c.n_given) st.dims = {c.n};
    out.push_back(check_geometry_lemma(st));
  } else if (what == "phi-bound") {
    PhiSettings st;
    st.seed = c.seed;
    if (c.n_given) st.dims = {c.n};
    out.push_back(check_phi_bound(st));
  } else if (what == "halfpower") {
    HalfPowerSettings st;
    st.seed = c.seed;
    if (c.k_given) {
      if (c.k % 2 == 0) throw UsageError(s.where("k") + ": halfpower needs odd k");
      st.orders = {c.k};
    }
    if (c.n > 2) throw UsageError("halfpower: n must be 1 or 2");
    st.dim = c.n;
    out.push_back(check_halfpower_scaling(st));
  } else if (what == "atom-sweep") {
    if (c.n > 2) throw UsageError("atom-sweep: n must be 1 or 2");
    out = run_atom_sweep(s, c);
  } else if (what == "h1-probe") {
    CounterprobeSettings st;
    st.seed = c.seed;
    if (c.alpha) {
      if (c.alpha->dim() != 2) throw UsageError(s.where("alpha") + ": h1-probe runs in n = 2");
      st.alpha = *c.alpha;
    }
    out.push_back(sweep_h1_counterprobe(st));
  } else if (what == "nu-s") {
    if (c.n > 2) throw UsageError("nu-s: n must be 1 or 2");
    NuSettings st;
    st.seed = c.seed;
    st.alpha = c.alpha.value_or(MultiIndex::unit(c.n, 0));
    st.samples = positive(s, "samples", 100, 100000);
    out.push_back(estimate_nu_s(st));
  } else if (what == "ladder") {
    LadderSettings st;
    st.seed = c.seed;
    out.push_back(check_ladder_identities(st));
  } else if (what == "oracle") {
    OracleSettings st;
    st.seed = c.seed;
    st.calibration = read_calibration(c.calibration);
    if (c.alpha) st.alphas = {*c.alpha};
    out.push_back(check_spectral_kernel_oracle(st));
  } else if (what == "all") {
    SuiteOptions opt;
    opt.seed = c.seed;
    opt.calibration = read_calibration(c.calibration);
    for (auto fn : {suite_ladder, suite_oracle, suite_geometry, suite_phi, suite_halfpower, suite_certificates,
                    suite_theorem1, suite_theorem2}) {
      SuiteResult r = fn(opt);
      nlohmann::json j;
      j["name"] = r.name;
      j["passed"] = r.passed();
      j["failures"] = r.failures;
      j["runtime_seconds"] = r.runtime_seconds;
      nlohmann::json obs = nlohmann::json::object();
      for (const auto& [k, v] : r.observed) obs[k] = v;
      j["observed"] = obs;
      suites.push_back(j);
      out.insert(out.end(), r.reports.begin(), r.reports.end());
    }
  } else {
    throw UsageError("verify: unknown experiment '" + what + "'");
  }
  return out;
}

int cmd_verify(const Settings& s, const std::string& what, std::ostream& out) {
  const Common c = common(s);
  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json suites = nlohmann::json::array();
  const auto reports = run_selector(what, s, c, suites);
  bool passed = true;
  nlohmann::json summary;
  summary["command"] = "verify";
  summary["experiment"] = what;
  summary["seed"] = c.seed;
  summary["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    write_report(c.out, r);
    summary["reports"].push_back(report_json(r, c.out));
    passed = passed && r.passed();
  }
  if (!suites.empty()) {
    summary["suites"] = suites;
    for (const auto& j : suites) passed = passed && j["passed"].get<bool>();
  }
  summary["passed"] = passed;
  summary["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string text = summary.dump(2);
  if (!c.out.empty()) std::ofstream(std::filesystem::path(c.out) / ("summary-" + what + ".json")) << text << "\n";
  out << text << "\n";
  return passed ? kExitPass : kExitAssertion;
}

// ---- calibrate

int cmd_calibrate(const Settings& s, std::ostream& out, std::ostream& err) {
  const Common c = common(s);
  if (!c.alpha) throw UsageError("calibrate: --alpha is required");
  CalibrationSettings cs;
  if (s.has("nodes")) cs.pv.radial_nodes = positive(s, "nodes", 8, 64);
  auto table = read_calibration(c.calibration);
  const CalibrationRecord rec = calibrate_kernel(*c.alpha, c.family, cs);
  upsert_calibration(table, rec);
  write_calibration(c.calibration, table);
  nlohmann::json j;
  j["command"] = "calibrate";
  j["table"] = c.calibration;
  j["record"] = format_calibration_line(rec);
  j["c"] = rec.c;
  j["analytic_c"] = rec.analytic_c;
  j["residual"] = rec.residual;
  j["flagged"] = rec.flagged;
  out << j.dump(2) << "\n";
  if (rec.flagged) {
    err << "warning: calibration residual " << format_double(rec.residual) << " above threshold "
        << format_double(cs.threshold) << "\n";
    return kExitCalibration;
  }
  return kExitPass;
}

}  // namespace

std::map<std::string, ConfigEntry> read_config(std::istream& in, const std::string& name) {
  std::map<std::string, ConfigEntry> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(name + ":" + std::to_string(no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw std::invalid_argument(name + ":" + std::to_string(no) + ": unknown key '" + key + "'");
    if (value.empty()) throw std::invalid_argument(name + ":" + std::to_string(no) + ": empty value for '" + key + "'");
    if (out.count(key))
      throw std::invalid_argument(name + ":" + std::to_string(no) + ": '" + key + "' already set on line " +
                                  std::to_string(out[key].line));
    out[key] = ConfigEntry{value, no};
  }
  return out;
}

HermiteCoeffs parse_input(const std::string& text, int dim) {
  HermiteCoeffs f(dim);
  std::string rest = text;
  bool any = false;
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    std::size_t end = rest.find('+', pos);
    if (end == std::string::npos) end = rest.size();
    const std::string term = trim(rest.substr(pos, end - pos));
    pos = end + 1;
    if (term.empty()) throw std::invalid_argument("empty term");
    double coeff = 1.0;
    std::string h = term;
    if (const auto star = term.find('*'); star != std::string::npos) {
      const std::string num = trim(term.substr(0, star));
      std::size_t used = 0;
      coeff = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument("bad coefficient '" + num + "'");
      h = trim(term.substr(star + 1));
    }
    if (h.size() < 2 || h[0] != 'h') throw std::invalid_argument("term '" + term + "' is not of the form c*h<index>");
    const MultiIndex beta = MultiIndex::parse(h.substr(1));
    if (beta.dim() != dim)
      throw std::invalid_argument("index '" + h.substr(1) + "' has " + std::to_string(beta.dim()) +
                                  " entries, expected " + std::to_string(dim));
    f.add(beta, coeff);
    any = true;
  }
  if (!any) throw std::invalid_argument("empty input");
  return f;
}

Budget budget(int n) {
  switch (n) {
    case 1: return {80, 4001};
    case 2: return {40, 401};
    case 3: return {20, 61};
  }
  throw std::invalid_argument("n must be 1, 2 or 3");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian Riesz transforms, atoms and estimate checks", "gaussriesz"};
  app.require_subcommand(1);
  std::map<std::string, std::string> flag_values;
  std::string config_path;
  std::string selector;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value file; flags override it");
    sub->add_option("--n", flag_values["n"], "dimension 1..3");
    sub->add_option("--degree", flag_values["degree"], "truncation degree of the input");
    sub->add_option("--nodes", flag_values["nodes"], "grid nodes per axis (calibrate: radial nodes per panel)");
    sub->add_option("--alpha", flag_values["alpha"], "multi-index, comma separated");
    sub->add_option("--family", flag_values["family"], "old or new");
    sub->add_option("--k", flag_values["k"], "atom order 1..3");
    sub->add_option("--seed", flag_values["seed"], "random seed");
    sub->add_option("--out", flag_values["out"], "directory for CSV and JSON files");
    sub->add_option("--input", flag_values["input"], "sum of c*h<index> terms");
    sub->add_option("--range", flag_values["range"], "evaluation grid half-width");
    sub->add_option("--kernel", flag_values["kernel"], "also evaluate the kernel route (true/false)");
    sub->add_option("--samples", flag_values["samples"], "sample count (geometry, nu-s)");
    sub->add_option("--atoms", flag_values["atoms"], "atoms per sweep");
    sub->add_option("--calibration", flag_values["calibration"], "calibration table file");
  };
  auto* transform = app.add_subcommand("transform", "evaluate R_alpha f or R*_alpha f on a grid");
  auto* verify = app.add_subcommand("verify", "run checks and write reports");
  auto* calibrate = app.add_subcommand("calibrate", "calibrate a kernel normalization");
  add_common(transform);
  add_common(verify);
  add_common(calibrate);
  verify->add_option("experiment", selector,
                     "geometry, phi-bound, halfpower, atom-sweep, h1-probe, nu-s, ladder, oracle or all")
      ->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    Settings s;
    CLI::App* sub = transform->parsed() ? transform : verify->parsed() ? verify : calibrate;
    for (const auto& key : kKeys) {
      if (sub->count("--" + key)) s.flags[key] = flag_values[key];
    }
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot read config file '" + config_path + "'");
      try {
        s.config = read_config(in, config_path);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      s.config_name = config_path;
    }
    if (sub == transform) return cmd_transform(s, out);
    if (sub == verify) return cmd_verify(s, selector, out);
    return cmd_calibrate(s, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
}

}  // namespace gaussriesz::cli
