// Runs the nine acceptance properties at their default budgets and prints one
// line per property. Usage: gaussriesz_acceptance [csv-dir]
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "gaussriesz/format.hpp"
#include "gaussriesz/suites.hpp"

using namespace gaussriesz;

namespace {

std::string out_dir;

void save(const SuiteResult& s) {
  if (out_dir.empty()) return;
  for (const auto& r : s.reports) {
    std::ofstream f(std::filesystem::path(out_dir) / (r.experiment + ".csv"));
    write_csv(f, r);
  }
}

std::string observed_text(const SweepReport& r, const std::vector<std::string>& keys) {
  std::string s;
  for (const auto& k : keys) {
    if (auto v = r.get(k)) s += " " + k + "=" + format_double(*v);
  }
  return s;
}

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds, budget;
};

int failures = 0;

void print(const Line& l) {
  const bool in_time = l.seconds <= l.budget;
  const bool ok = l.pass && in_time;
  if (!ok) ++failures;
  std::printf("criterion %d %s: %s |%s | %.1fs of %.0fs%s\n", l.id, ok ? "PASS" : "FAIL", l.name.c_str(),
              l.detail.c_str(), l.seconds, l.budget, in_time ? "" : " (over budget)");
  std::fflush(stdout);
}

void dump_failures(const SuiteResult& s, std::size_t limit = 8) {
  std::size_t shown = 0;
  for (const auto& f : s.failures) {
    if (shown++ < limit) std::printf("    %s: %s\n", s.name.c_str(), f.c_str());
  }
  for (const auto& r : s.reports) {
    for (const auto& f : r.failures) {
      if (shown++ < limit) std::printf("    %s: %s\n", r.experiment.c_str(), f.c_str());
    }
    for (const auto& n : r.notes) std::printf("    note %s: %s\n", r.experiment.c_str(), n.c_str());
  }
}

Line from_suite(int id, const std::string& name, const SuiteResult& s, double budget, std::string detail) {
  save(s);
  dump_failures(s);
  return Line{id, name, s.passed(), std::move(detail), s.runtime_seconds, budget};
}

bool body_prefix(const SweepReport& part, const SweepReport& full) {
  return !part.body.empty() && full.body.compare(0, part.body.size(), part.body) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    out_dir = argv[1];
    std::filesystem::create_directories(out_dir);
  }
  SuiteOptions opt;

  const SuiteResult ladder = suite_ladder(opt);
  print(from_suite(1, "ladder and spectral identities at 1e-12", ladder, 10.0,
                   observed_text(ladder.reports[0], {"max_error"}) +
                       " truncations=" + std::to_string(ladder.reports[0].rows)));

  const SuiteResult oracle = suite_oracle(opt);
  print(from_suite(2, "spectral and kernel routes agree below 1e-3", oracle, 300.0,
                   observed_text(oracle.reports[0], {"max_rel_error"}) +
                       " records=" + std::to_string(oracle.reports[0].rows)));

  const SuiteResult geometry = suite_geometry(opt);
  {
    const auto& r = geometry.reports[0];
    print(from_suite(3, "geometric lemma, zero violations", geometry, 30.0,
                     " violations=" + std::to_string(r.violations) + " samples=" + std::to_string(r.rows)));
  }

  const SuiteResult phi = suite_phi(opt);
  print(from_suite(4, "phi envelope, zero post-fit violations", phi, 120.0,
                   " violations=" + std::to_string(phi.reports[0].violations) +
                       observed_text(phi.reports[0], {"n1_C1", "n2_C1", "n3_C1", "n3_C2", "n3_cn"})));

  const SuiteResult half = suite_halfpower(opt);
  print(from_suite(5, "half-power slope within [-2k-0.3, -2k+0.5]", half, 300.0,
                   observed_text(half.reports[0], {"k1_slope", "k3_slope", "k1_tail_slope", "k3_tail_slope"})));

  const SuiteResult certs = suite_certificates(opt);
  print(from_suite(6, "X^k atom certificates", certs, 300.0,
                   observed_text(certs.reports[0], {"atoms", "passed", "weighted_violations", "max_ratio_spread"})));

  const SuiteResult t1 = suite_theorem1(opt);
  {
    std::string d;
    for (const auto& [k, v] : t1.observed) d += " " + k + "=" + format_double(v);
    print(from_suite(7, "old transforms bounded on X^k atoms", t1, 900.0, d));
  }

  const SuiteResult t2 = suite_theorem2(opt);
  {
    std::string d;
    for (const auto& [k, v] : t2.observed) d += " " + k + "=" + format_double(v);
    print(from_suite(8, "new transforms bounded on H1 atoms, nu_s bounded", t2, 900.0, d));
  }

  // Reruns: cheap suites in full, the sweeps on a prefix of their atoms.
  {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> mismatched;
    std::size_t compared = 0;
    auto same = [&](const SuiteResult& a, const SuiteResult& b) {
      for (std::size_t i = 0; i < a.reports.size(); ++i) {
        ++compared;
        if (a.reports[i].body != b.reports[i].body) mismatched.push_back(a.reports[i].experiment);
      }
    };
    same(ladder, suite_ladder(opt));
    same(geometry, suite_geometry(opt));
    same(phi, suite_phi(opt));
    same(half, suite_halfpower(opt));
    same(certs, suite_certificates(opt));
    {
      OracleSettings st;
      st.seed = opt.seed;
      st.alphas = {MultiIndex{1}, MultiIndex{2}, MultiIndex{3}};
      ++compared;
      if (!body_prefix(check_spectral_kernel_oracle(st), oracle.reports[0])) mismatched.push_back("oracle prefix");
    }
    auto prefix = [&](const std::vector<BoundednessSettings>& sweeps, const SuiteResult& full) {
      for (std::size_t i = 0; i < sweeps.size(); ++i) {
        if (sweeps[i].alpha.dim() != 1) continue;
        BoundednessSettings b = sweeps[i];
        b.atoms.resize(std::min<std::size_t>(b.atoms.size(), 6));
        b.include_constant = false;
        ++compared;
        if (!body_prefix(sweep_atom_boundedness(b), full.reports[i])) mismatched.push_back(b.experiment + " prefix");
      }
    };
    prefix(theorem1_sweeps(opt), t1);
    prefix(theorem2_sweeps(opt), t2);
    for (const auto& r : t2.reports) {
      if (r.experiment != "nu-s-1" && r.experiment != "nu-s-2") continue;
      NuSettings st;
      st.alpha = r.experiment == "nu-s-1" ? MultiIndex{1} : MultiIndex{2};
      st.seed = opt.seed;
      SweepReport again = estimate_nu_s(st);
      ++compared;
      if (again.body != r.body) mismatched.push_back(r.experiment);
    }
    std::string d = " reports_compared=" + std::to_string(compared) + " mismatched=" + std::to_string(mismatched.size());
    for (const auto& m : mismatched) d += " " + m;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    print(Line{9, "seeded reruns reproduce CSV bodies", mismatched.empty(), d, secs, 900.0});
  }

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
