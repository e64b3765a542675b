#pragma once

// Shift ultrametrics, Bowen windows, covering numbers and the dimension
// estimators built on them.
//
// Everything rests on one identity: d_N takes values in {alpha^-k}, so a set
// has d_N-diameter < eps exactly when it lies in one cylinder over the
// determining window W(M, N), where M is the resolution index of eps. The
// covering number is therefore the number of patterns on W(M, N).
//
// Dimension-1 systems are treated as one-sided shifts with the static metric
// alpha^-min{n >= 0 : x_n != y_n}; their "mean" estimators reduce to plain
// Minkowski / Hausdorff dimension (N = 1).

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shiftdim/bigint.hpp"
#include "shiftdim/lattice.hpp"
#include "shiftdim/measure.hpp"
#include "shiftdim/subshift.hpp"

namespace shiftdim {

enum class Norm { Linf, L2 };

std::string to_string(Norm norm);

struct MetricSpec {
  double alpha = 2.0;
  Norm norm = Norm::Linf;
};

/// Generator sigma_1^a sigma_2^b of the acting subgroup.
struct ActionSpec {
  int a = 1;
  int b = 0;
};

/// A resolution eps stored as log2(1/eps), so scales far below the double
/// range stay representable and bracket tests are done on the log scale.
class Scale {
 public:
  static Scale from_epsilon(double epsilon);
  static Scale from_log2_inverse(double log2_inv_eps);
  /// eps = alpha^-k.
  static Scale alpha_power(double alpha, double k);

  double log2_inverse() const noexcept { return log2_inv_; }
  /// May underflow to 0 for very fine scales.
  double epsilon() const;

 private:
  explicit Scale(double log2_inv) : log2_inv_(log2_inv) {}
  double log2_inv_;
};

/// The unique M >= 1 with alpha^-M < eps <= alpha^-(M-1).
struct ResolutionIndex {
  int M = 1;
};

ResolutionIndex resolution_index(const MetricSpec& spec, double epsilon);
ResolutionIndex resolution_index(double alpha, Scale scale);

/// Result of comparing two finite patterns under d or rho.
struct MetricValue {
  double value = 0.0;
  /// false: the patterns agree on every site inside the largest centred ball
  /// the support contains, and value is only an upper bound on the distance.
  bool exact = true;
};

/// alpha^-(smallest norm of a disagreement site). p and q must share support.
MetricValue metric_eval(const MetricSpec& spec, const Pattern& p, const Pattern& q);

/// Union over 0 <= n < N of (n a, n b) + {u : |u| <= M - 1}. l2 balls use an
/// exact integer comparison m^2 + n^2 <= (M-1)^2.
LatticeSet bowen_window(const ActionSpec& action, int N, ResolutionIndex M, Norm norm);

/// One-sided 1D window [0, N + M - 2] x {0}.
LatticeSet one_sided_window(int N, ResolutionIndex M);

/// The window whose cylinders are exactly the sets of d_N-diameter < eps.
LatticeSet determining_window(const SftSpec& sft, const MetricSpec& spec,
                              const ActionSpec& action, int N, Scale scale);

/// #(X, d_N, eps): minimum number of sets of diameter < eps covering X.
BigInt covering_number(const SftSpec& sft, const MetricSpec& spec, const ActionSpec& action,
                       int N, double epsilon, const CountLimits& limits = {});

struct EntropyAtResolution {
  std::vector<std::pair<int, double>> log2_counts;  ///< (N, log2 #(X, d_N, eps))
  double value = 0.0;                               ///< bits per iterate
};

/// Slope of log2 #(X, d_N, eps) between the two largest N of the schedule.
EntropyAtResolution entropy_at_resolution(const SftSpec& sft, const MetricSpec& spec,
                                          const ActionSpec& action, double epsilon,
                                          std::span<const int> n_schedule,
                                          const CountLimits& limits = {});

enum class BoundKind { Upper, Lower, Exact };

std::string to_string(BoundKind kind);

struct SchedulePoint {
  int M = 0;
  int N = 0;
  double value = 0.0;
};

/// Least-squares fit v = limit + coefficient * x over the raw sequence.
struct Extrapolation {
  std::string model;  ///< "inv(M-1)", "inv(M)" or "inv(log2(1/eps))"
  double limit = 0.0;
  double coefficient = 0.0;
};

struct DimensionEstimate {
  double value = 0.0;  ///< == extrapolation.limit
  BoundKind kind = BoundKind::Exact;
  std::vector<SchedulePoint> schedule;
  Extrapolation extrapolation;
};

/// Fits limit + coefficient * x. Needs at least two distinct x.
Extrapolation fit_inverse_model(std::span<const double> x, std::span<const double> v,
                                std::string model);

/// Per-M resolution data shared by the mean-dimension estimators. For 2D
/// systems counts are taken at N1 = N2/2 and N2 = n_factor * M and rate is the
/// slope between them; for 1D systems N1 = N2 = 1 and rate is log2 # itself.
struct ResolutionRow {
  int M = 0;
  int N1 = 0;
  int N2 = 0;
  double log2_count_n1 = 0.0;
  double log2_count_n2 = 0.0;
  double rate = 0.0;
};

std::vector<ResolutionRow> resolution_table(const SftSpec& sft, const MetricSpec& spec,
                                            const ActionSpec& action, std::span<const int> ms,
                                            int n_factor, const CountLimits& limits = {});

/// v_M = S(eps_M) / log2(1/eps_M) with eps_M = alpha^-(M-1), fitted with
/// v = v_inf + c / (M - 1). Dimension-1 systems use log2 # in place of S.
DimensionEstimate mmdim_estimate(const SftSpec& sft, const MetricSpec& spec,
                                 const ActionSpec& action, std::span<const int> m_schedule,
                                 int n_factor, const CountLimits& limits = {});
DimensionEstimate mmdim_from_table(const MetricSpec& spec, std::span<const ResolutionRow> table);

/// min over M' in [M, Mcap] of log2(number of cylinders over W(M', N)) /
/// (M' log2 alpha): the critical exponent of the uniform depth-M' cylinder
/// cover, an upper bound on dim_H(X, d_N, alpha^-(M-1)).
double hausdorff_upper_at_scale(const SftSpec& sft, const MetricSpec& spec,
                                const ActionSpec& action, int N, int M, int Mcap,
                                const CountLimits& limits = {});

/// Mass-distribution lower bound: the largest s with mu(C) <= alpha^(-s M')
/// for every depth-M' cylinder, M <= M' <= Mcap.
double hausdorff_lower_at_scale(const SftSpec& sft, const MeasureSpec& measure,
                                const MetricSpec& spec, const ActionSpec& action, int N,
                                int M, int Mcap);

struct MeanHausdorffBounds {
  std::optional<DimensionEstimate> lower;  ///< absent without a measure
  DimensionEstimate upper;
};

/// Per-iterate Hausdorff bounds for each scheduled M, fitted with
/// v = v_inf + c / M. The upper sequence is the depth-M uniform-cover exponent
/// S(M) / (M log2 alpha); the lower one minimises over M <= M' <= last M.
MeanHausdorffBounds mhdim_bounds(const SftSpec& sft, const MeasureSpec* measure,
                                 const MetricSpec& spec, const ActionSpec& action,
                                 std::span<const int> m_schedule, int n_factor,
                                 const CountLimits& limits = {});
DimensionEstimate mhdim_upper_from_table(const MetricSpec& spec,
                                         std::span<const ResolutionRow> table);
DimensionEstimate mhdim_lower_from_measure(const SftSpec& sft, const MeasureSpec& measure,
                                           const MetricSpec& spec, const ActionSpec& action,
                                           std::span<const int> m_schedule, int n_factor);

struct TameGrowthResult {
  std::vector<std::pair<int, double>> values;  ///< (M, eps_M^delta log2 #(X, d, eps_M))
  /// Smallest M from which the sequence is nonincreasing up to Mmax.
  int nonincreasing_from = 0;
  bool consistent = false;
};

/// Static-metric check of eps^delta log #(X, d, eps) -> 0 along eps_M =
/// alpha^-(M-1). Consistent when the second half of the sequence is
/// nonincreasing.
TameGrowthResult tame_growth_check(const SftSpec& sft, const MetricSpec& spec, double delta,
                                   int Mmax, const CountLimits& limits = {});

}  // namespace shiftdim
