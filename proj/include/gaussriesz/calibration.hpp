#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaussriesz/riesz_kernel.hpp"

namespace gaussriesz {

struct CalibrationSettings {
  PVConfig pv{};
  double threshold = 1e-4;  // residual above this flags the record
};

// One line of the calibration table.
struct CalibrationRecord {
  int n = 1;
  MultiIndex alpha{1};
  Family family = Family::Old;
  double c = 0.0;
  double analytic_c = 0.0;
  double residual = 0.0;
  int nodes_per_panel = 12;
  int radial_nodes = 8;
  int angular_nodes = 48;
  double log_s_panel = 0.5;
  double eps_outer = 1e-3;
  double eps_inner = 5e-4;
  bool flagged = false;

  double ratio() const { return c / analytic_c; }
};

// Fixed masked reference function and evaluation points used by calibrate_kernel.
HermiteCoeffs calibration_reference(int n);
std::vector<Eigen::VectorXd> calibration_points(int n);
double calibration_mask(const Eigen::Ref<const Eigen::VectorXd>& y);
inline constexpr double kMaskInner = 4.5;
inline constexpr double kMaskOuter = 6.5;

// Least-squares c matching c * (kernel route) to the spectral route.
CalibrationRecord calibrate_kernel(const MultiIndex& alpha, Family family, const CalibrationSettings& settings = {});

std::string format_calibration_line(const CalibrationRecord& rec);
CalibrationRecord parse_calibration_line(const std::string& line);

// Missing file reads as an empty table.
std::vector<CalibrationRecord> read_calibration(const std::string& path);
void write_calibration(const std::string& path, const std::vector<CalibrationRecord>& records);
void upsert_calibration(std::vector<CalibrationRecord>& records, const CalibrationRecord& rec);
std::optional<CalibrationRecord> find_calibration(const std::vector<CalibrationRecord>& records,
                                                  const MultiIndex& alpha, Family family);

// Kernel spec for (alpha, family) using a table entry when present, else the closed-form constant.
KernelSpec calibrated_spec(const MultiIndex& alpha, Family family,
                           const std::vector<CalibrationRecord>& records = {});

}  // namespace gaussriesz
