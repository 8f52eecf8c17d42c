#include "gaussriesz/calibration.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gaussriesz/format.hpp"
#include "gaussriesz/parallel.hpp"
#include "gaussriesz/profiles.hpp"

namespace gaussriesz {

namespace {

constexpr const char* kHeader =
    "# n,alpha,family,c,analytic_c,ratio,residual,nodes_per_panel,radial_nodes,angular_nodes,log_s_panel,"
    "eps_outer,eps_inner,flag";

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

}  // namespace

HermiteCoeffs calibration_reference(int n) {
  HermiteCoeffs p(n);
  int idx = 0;
  for (const auto& beta : indices_up_to_degree(n, 4)) p.set(beta, std::cos(1.0 + 1.7 * idx++));
  return p;
}

std::vector<Eigen::VectorXd> calibration_points(int n) {
  std::vector<Eigen::VectorXd> pts;
  for (int j = 0; j < 8; ++j) {
    Eigen::VectorXd x(n);
    if (n == 1) {
      x(0) = -1.3 + 2.6 * (j + 0.5) / 8.0;
    } else {
      const double rad = 1.3 * std::sqrt((j + 0.5) / 8.0), t = 2.39996 * j;
      x(0) = rad * std::cos(t);
      x(1) = rad * std::sin(t);
      if (n == 3) x(2) = 0.9 * std::cos(1.3 * j + 0.4);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

double calibration_mask(const Eigen::Ref<const Eigen::VectorXd>& y) {
  return plateau(y.norm(), kMaskInner, kMaskOuter);
}

CalibrationRecord calibrate_kernel(const MultiIndex& alpha, Family family, const CalibrationSettings& settings) {
  const int n = alpha.dim();
  const RieszOrder order(alpha, family);
  KernelSpec spec{alpha, kernel_family(family), 1.0};
  spec.validate();
  const HermiteCoeffs p = calibration_reference(n);
  const HermiteCoeffs image = riesz_apply(order, p);
  const auto pts = calibration_points(n);
  const Ball support{Eigen::VectorXd::Zero(n), kMaskOuter};
  CompactFunction f{[&p](const Eigen::Ref<const Eigen::VectorXd>& y) { return p.evaluate(y) * calibration_mask(y); },
                    support};

  std::vector<double> K(pts.size()), S(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    K[i] = apply_riesz_pv(spec, f, pts[i], settings.pv).value;
    S[i] = image.evaluate(pts[i]);
  });
  double ks = 0.0, kk = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ks += K[i] * S[i];
    kk += K[i] * K[i];
    ss += S[i] * S[i];
  }
  if (!(kk > 0.0) || !(ss > 0.0)) throw std::runtime_error("degenerate calibration data");

  CalibrationRecord rec;
  rec.n = n;
  rec.alpha = alpha;
  rec.family = family;
  rec.c = ks / kk;
  rec.analytic_c = analytic_normalization(n, alpha.order());
  double res = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) res += (rec.c * K[i] - S[i]) * (rec.c * K[i] - S[i]);
  rec.residual = std::sqrt(res / ss);
  rec.nodes_per_panel = settings.pv.r_quad.nodes_per_panel;
  rec.radial_nodes = settings.pv.radial_nodes;
  rec.angular_nodes = settings.pv.angular_nodes;
  rec.log_s_panel = settings.pv.r_quad.log_s_panel;
  rec.eps_outer = settings.pv.eps_outer;
  rec.eps_inner = settings.pv.eps_inner;
  rec.flagged = !(rec.residual < settings.threshold);
  return rec;
}

std::string format_calibration_line(const CalibrationRecord& r) {
  std::ostringstream os;
  os << r.n << ',' << r.alpha.to_string(':') << ',' << to_string(r.family) << ',' << format_double(r.c) << ','
     << format_double(r.analytic_c) << ',' << format_double(r.ratio()) << ',' << format_double(r.residual) << ','
     << r.nodes_per_panel << ',' << r.radial_nodes << ',' << r.angular_nodes << ',' << format_double(r.log_s_panel)
     << ',' << format_double(r.eps_outer) << ',' << format_double(r.eps_inner) << ',' << (r.flagged ? "warn" : "ok");
  return os.str();
}

CalibrationRecord parse_calibration_line(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  for (std::string tok; std::getline(ss, tok, ',');) f.push_back(tok);
  if (f.size() != 14) throw std::invalid_argument("calibration record needs 14 fields");
  CalibrationRecord r;
  r.n = parse_int(f[0]);
  r.alpha = MultiIndex::parse(f[1]);
  if (r.alpha.dim() != r.n) throw std::invalid_argument("calibration record: alpha does not match n");
  r.family = parse_family(f[2]);
  r.c = parse_double(f[3]);
  r.analytic_c = parse_double(f[4]);
  r.residual = parse_double(f[6]);
  r.nodes_per_panel = parse_int(f[7]);
  r.radial_nodes = parse_int(f[8]);
  r.angular_nodes = parse_int(f[9]);
  r.log_s_panel = parse_double(f[10]);
  r.eps_outer = parse_double(f[11]);
  r.eps_inner = parse_double(f[12]);
  if (f[13] != "ok" && f[13] != "warn") throw std::invalid_argument("calibration flag must be ok or warn");
  r.flagged = f[13] == "warn";
  return r;
}

std::vector<CalibrationRecord> read_calibration(const std::string& path) {
  std::vector<CalibrationRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(parse_calibration_line(line));
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_calibration(const std::string& path, const std::vector<CalibrationRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kHeader << '\n';
  for (const auto& r : records) out << format_calibration_line(r) << '\n';
}

void upsert_calibration(std::vector<CalibrationRecord>& records, const CalibrationRecord& rec) {
  for (auto& r : records) {
    if (r.alpha == rec.alpha && r.family == rec.family) {
      r = rec;
      return;
    }
  }
  records.push_back(rec);
}

std::optional<CalibrationRecord> find_calibration(const std::vector<CalibrationRecord>& records,
                                                  const MultiIndex& alpha, Family family) {
  for (const auto& r : records) {
    if (r.alpha == alpha && r.family == family) return r;
  }
  return std::nullopt;
}

KernelSpec calibrated_spec(const MultiIndex& alpha, Family family, const std::vector<CalibrationRecord>& records) {
  const auto rec = find_calibration(records, alpha, family);
  const double c = rec && !rec->flagged ? rec->c : analytic_normalization(alpha.dim(), alpha.order());
  return KernelSpec{alpha, kernel_family(family), c};
}

}  // namespace gaussriesz
