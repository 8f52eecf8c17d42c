#include <algorithm>
#include <chrono>

#include "gaussriesz/suites.hpp"

namespace gaussriesz {

namespace {

using Clock = std::chrono::steady_clock;

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd vec1(double a) { return Eigen::VectorXd::Constant(1, a); }

std::vector<AtomSpec> family(int count, int dim, int k, double min_fraction, bool offsets, std::uint64_t seed,
                             double max_center = 3.0) {
  FamilySettings fs;
  fs.max_center = max_center;
  fs.count = count;
  fs.dim = dim;
  fs.k = k;
  fs.min_fraction = min_fraction;
  fs.offsets = offsets;
  fs.seed = seed;
  return random_atom_family(fs);
}

BoundednessSettings sweep(const MultiIndex& alpha, Family fam, AtomKind kind, std::vector<AtomSpec> atoms,
                          const SuiteOptions& opt) {
  BoundednessSettings b;
  b.alpha = alpha;
  b.family = fam;
  b.kind = kind;
  b.atoms = std::move(atoms);
  if (opt.atom_limit > 0 && b.atoms.size() > static_cast<std::size_t>(opt.atom_limit)) b.atoms.resize(opt.atom_limit);
  b.seed = opt.seed;
  if (alpha.dim() == 2) {
    b.pv.angular_nodes = 192;
    b.cross_check_every = 2;
  }
  b.experiment = (fam == Family::Old ? "theorem1-" : "theorem2-") + alpha.to_string(':');
  return b;
}

void time_suite(SuiteResult& s, Clock::time_point t0) {
  s.runtime_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

bool SuiteResult::passed() const {
  return failures.empty() && std::all_of(reports.begin(), reports.end(), [](const SweepReport& r) { return r.passed(); });
}

const SweepReport* SuiteResult::find(const std::string& experiment) const {
  for (const auto& r : reports) {
    if (r.experiment == experiment) return &r;
  }
  return nullptr;
}

SuiteResult suite_ladder(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  SuiteResult s;
  s.name = "ladder";
  LadderSettings st;
  st.seed = opt.seed;
  s.reports.push_back(check_ladder_identities(st));
  time_suite(s, t0);
  return s;
}

SuiteResult suite_oracle(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  SuiteResult s;
  s.name = "oracle";
  OracleSettings st;
  st.seed = opt.seed;
  st.calibration = opt.calibration;
  s.reports.push_back(check_spectral_kernel_oracle(st));
  time_suite(s, t0);
  return s;
}

SuiteResult suite_geometry(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  SuiteResult s;
  s.name = "geometry";
  GeometrySettings st;
  st.seed = opt.seed;
  s.reports.push_back(check_geometry_lemma(st));
  time_suite(s, t0);
  return s;
}

SuiteResult suite_phi(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  SuiteResult s;
  s.name = "phi-bound";
  PhiSettings st;
  st.seed = opt.seed;
  s.reports.push_back(check_phi_bound(st));
  time_suite(s, t0);
  return s;
}

SuiteResult suite_halfpower(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  SuiteResult s;
  s.name = "halfpower";
  HalfPowerSettings st;
  st.seed = opt.seed;
  s.reports.push_back(check_halfpower_scaling(st));
  time_suite(s, t0);
  return s;
}

CertificateSettings certificate_settings(const SuiteOptions& opt) {
  CertificateSettings st;
  st.seed = opt.seed;
  const Eigen::VectorXd c1 = vec1(0.7), c2 = vec2(0.5, 0.4);
  for (int k : {1, 2}) {
    st.families.push_back(shrinking_atom_family(c1, k, 5, 0.9, 0.5));
    st.families.push_back(shrinking_atom_family(c2, k, 5, 0.9, 0.5));
  }
  // Order 3 stays at |c_B| <= 1.2 and r_B >= 0.45 m(|c_B|). Below that the rounding in
  // L^3 u, evaluated in double precision, exceeds the reconstruction tolerance.
  st.families.push_back(shrinking_atom_family(c1, 3, 5, 0.9, 0.85));
  st.families.push_back(shrinking_atom_family(c2, 3, 4, 0.9, 0.8));
  auto add = [&](std::vector<AtomSpec> v) { st.scattered.insert(st.scattered.end(), v.begin(), v.end()); };
  add(family(22, 1, 1, 0.05, false, opt.seed + 1));
  add(family(22, 1, 2, 0.05, false, opt.seed + 2));
  add(family(10, 1, 3, 0.45, false, opt.seed + 3, 1.2));
  add(family(6, 2, 1, 0.05, false, opt.seed + 4));
  add(family(6, 2, 2, 0.05, false, opt.seed + 5));
  add(family(5, 2, 3, 0.45, false, opt.seed + 6, 1.2));
  if (opt.atom_limit > 0) {
    for (auto& f : st.families) {
      if (f.size() > static_cast<std::size_t>(opt.atom_limit)) f.resize(opt.atom_limit);
    }
    if (st.scattered.size() > static_cast<std::size_t>(opt.atom_limit)) st.scattered.resize(opt.atom_limit);
  }
  return st;
}

SuiteResult suite_certificates(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  SuiteResult s;
  s.name = "certificates";
  s.reports.push_back(certify_atom_families(certificate_settings(opt)));
  const SweepReport& r = s.reports.back();
  const double atoms = r.get("atoms").value_or(0.0);
  s.observed.emplace_back("atoms", atoms);
  if (opt.atom_limit == 0 && atoms < 100) s.failures.push_back("fewer than 100 certified atoms");
  time_suite(s, t0);
  return s;
}

std::vector<BoundednessSettings> theorem1_sweeps(const SuiteOptions& opt) {
  std::vector<BoundednessSettings> out;
  out.push_back(sweep(MultiIndex{1}, Family::Old, AtomKind::Xk, family(40, 1, 1, 0.05, false, opt.seed + 11), opt));
  out.push_back(sweep(MultiIndex{2}, Family::Old, AtomKind::Xk, family(30, 1, 2, 0.05, false, opt.seed + 12), opt));
  out.push_back(sweep(MultiIndex{2, 0}, Family::Old, AtomKind::Xk, family(12, 2, 2, 0.05, false, opt.seed + 13), opt));
  out.push_back(sweep(MultiIndex{1, 1}, Family::Old, AtomKind::Xk, family(8, 2, 2, 0.05, false, opt.seed + 14), opt));
  out.push_back(sweep(MultiIndex{1, 0}, Family::Old, AtomKind::Xk, family(10, 2, 1, 0.05, false, opt.seed + 15), opt));
  return out;
}

std::vector<BoundednessSettings> theorem2_sweeps(const SuiteOptions& opt) {
  std::vector<BoundednessSettings> out;
  out.push_back(sweep(MultiIndex{1}, Family::New, AtomKind::H1, family(50, 1, 1, 0.05, true, opt.seed + 21), opt));
  out.push_back(sweep(MultiIndex{2}, Family::New, AtomKind::H1, family(30, 1, 2, 0.05, true, opt.seed + 22), opt));
  out.push_back(sweep(MultiIndex{1, 0}, Family::New, AtomKind::H1, family(12, 2, 1, 0.05, true, opt.seed + 23), opt));
  out.push_back(sweep(MultiIndex{1, 1}, Family::New, AtomKind::H1, family(8, 2, 2, 0.05, true, opt.seed + 24), opt));
  for (auto& b : out) b.include_constant = true;
  return out;
}

namespace {

// Pooled sup/median over several sweeps, plus the atom count.
void pool(SuiteResult& s, double blowup, int first, int last) {
  std::vector<double> all;
  for (int i = first; i < last; ++i) {
    const SweepReport& r = s.reports[static_cast<std::size_t>(i)];
    const auto kinds = column(r, "kind"), norms = column(r, "l1");
    for (std::size_t j = 0; j < norms.size(); ++j) {
      if (kinds[j] != "constant" && norms[j] != "-") all.push_back(std::stod(norms[j]));
    }
  }
  std::sort(all.begin(), all.end());
  const double med = all.empty() ? 0.0 : (all.size() % 2 ? all[all.size() / 2] : 0.5 * (all[all.size() / 2 - 1] + all[all.size() / 2]));
  const double sup = all.empty() ? 0.0 : all.back();
  s.observed.emplace_back("pooled_atoms", static_cast<double>(all.size()));
  s.observed.emplace_back("pooled_sup", sup);
  s.observed.emplace_back("pooled_median", med);
  s.observed.emplace_back("pooled_sup_over_median", med > 0.0 ? sup / med : 0.0);
  if (!(sup <= blowup * med)) s.failures.push_back("pooled sup exceeds " + cell(blowup) + " x median");
}

}  // namespace

SuiteResult suite_theorem1(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  SuiteResult s;
  s.name = "theorem1";
  const auto sweeps = theorem1_sweeps(opt);
  for (const auto& b : sweeps) s.reports.push_back(sweep_atom_boundedness(b));
  pool(s, sweeps.front().blowup_factor, 0, static_cast<int>(sweeps.size()));
  if (opt.atom_limit == 0 && s.observed.front().second < 100) s.failures.push_back("fewer than 100 X^k atoms");
  CounterprobeSettings cp;
  cp.seed = opt.seed;
  s.reports.push_back(sweep_h1_counterprobe(cp));
  for (const char* key : {"h1_slope", "xk_slope", "h1_growth", "xk_growth"}) {
    if (auto v = s.reports.back().get(key)) s.observed.emplace_back(std::string("probe_") + key, *v);
  }
  time_suite(s, t0);
  return s;
}

SuiteResult suite_theorem2(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  SuiteResult s;
  s.name = "theorem2";
  const auto sweeps = theorem2_sweeps(opt);
  for (const auto& b : sweeps) s.reports.push_back(sweep_atom_boundedness(b));
  pool(s, sweeps.front().blowup_factor, 0, static_cast<int>(sweeps.size()));
  if (opt.atom_limit == 0 && s.observed.front().second < 100) s.failures.push_back("fewer than 100 H1 atoms");
  struct Nu {
    MultiIndex alpha;
    int samples;
  };
  for (const Nu& nu : {Nu{MultiIndex{1}, 100}, Nu{MultiIndex{2}, 100}, Nu{MultiIndex{1, 0}, 30}}) {
    NuSettings st;
    st.alpha = nu.alpha;
    st.samples = opt.atom_limit > 0 ? std::min(nu.samples, opt.atom_limit) : nu.samples;
    st.seed = opt.seed;
    SweepReport r = estimate_nu_s(st);
    r.experiment = "nu-s-" + nu.alpha.to_string(':');
    s.observed.emplace_back(r.experiment + "_fitted", r.get("fitted_nu_s").value_or(0.0));
    s.reports.push_back(std::move(r));
  }
  time_suite(s, t0);
  return s;
}

}  // namespace gaussriesz
