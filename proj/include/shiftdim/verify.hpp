#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "shiftdim/measure.hpp"
#include "shiftdim/metrics.hpp"
#include "shiftdim/subshift.hpp"

namespace shiftdim {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

enum class Verdict { Pass, Fail, BoundsOnly };

std::string to_string(Verdict verdict);

struct VerifyOptions {
  double alpha = 2.0;
  /// Empty: {2..6} for Z^2 systems, {4..20} for 1D systems.
  std::vector<int> m_schedule;
  int n_factor = 16;
  double tolerance = 0.05;
  /// Refuse a verdict for uncertified systems instead of reporting bounds.
  bool strict = false;
  CountLimits limits;
};

struct VerifyResult {
  Verdict verdict = Verdict::BoundsOnly;
  Json report;  ///< schema, inputs, tables, theorem sides, verdict
};

/// Computes the dimension-side estimators and the entropy side of the
/// Furstenberg-type identity and compares them within tolerance.
/// Z^2 inputs: mmdim = mhdim = 2 h_top / log2 alpha and, with a measure,
/// rdim = 2 h_mu / log2 alpha. 1D inputs: dim_M = dim_H = h_top / log2 alpha.
VerifyResult verify_theorem(const SftSpec& sft, const MeasureSpec* measure,
                            const VerifyOptions& options);

/// Schedule-table helpers shared by the CLI reports.
Json to_json(const DimensionEstimate& estimate);

}  // namespace shiftdim
