#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gaussriesz/harness.hpp"

namespace gaussriesz {

// Default-budget experiment sets, one per acceptance property.
struct SuiteResult {
  std::string name;
  std::vector<SweepReport> reports;
  std::vector<std::string> failures;  // suite-level assertions
  std::vector<std::pair<std::string, double>> observed;
  double runtime_seconds = 0.0;

  bool passed() const;
  const SweepReport* find(const std::string& experiment) const;
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  std::vector<CalibrationRecord> calibration;
  // Atoms per sweep are cut to this many when positive.
  int atom_limit = 0;
};

SuiteResult suite_ladder(const SuiteOptions& opt = {});
SuiteResult suite_oracle(const SuiteOptions& opt = {});
SuiteResult suite_geometry(const SuiteOptions& opt = {});
SuiteResult suite_phi(const SuiteOptions& opt = {});
SuiteResult suite_halfpower(const SuiteOptions& opt = {});
SuiteResult suite_certificates(const SuiteOptions& opt = {});
// Old transforms on X^k atoms plus the H1 contrast probe.
SuiteResult suite_theorem1(const SuiteOptions& opt = {});
// New transforms on H1 atoms plus nu_s.
SuiteResult suite_theorem2(const SuiteOptions& opt = {});

std::vector<BoundednessSettings> theorem1_sweeps(const SuiteOptions& opt = {});
std::vector<BoundednessSettings> theorem2_sweeps(const SuiteOptions& opt = {});
CertificateSettings certificate_settings(const SuiteOptions& opt = {});

}  // namespace gaussriesz
