#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "shiftdim/errors.hpp"
#include "shiftdim/measure.hpp"
#include "shiftdim/metrics.hpp"

namespace shiftdim {

/// Finite rate-distortion problem: source law, reproduction alphabet size and
/// a row-major |source| x |reproduction| distortion matrix.
struct RdProblem {
  FiniteDistribution source;
  std::size_t reproduction_size = 0;
  std::vector<double> distortion;
};

struct RdPoint {
  double rate = 0.0;        ///< bits
  double distortion = 0.0;  ///< expected distortion
  double slope = 0.0;       ///< Lagrange parameter s in exp(-s d)
  int iterations = 0;
  double gap = 0.0;         ///< final upper/lower rate bound gap, bits
};

/// Blahut-Arimoto did not reach the requested bound gap.
class NonConvergence : public Error {
 public:
  NonConvergence(int iterations, double gap);
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// Source with Hamming distortion on the same alphabet.
RdProblem hamming_problem(const FiniteDistribution& source);

/// Alternating minimisation for the point of slope -s on the R(D) curve,
/// starting from the uniform reproduction law and stopping once the
/// Csiszar upper/lower bounds on R are within tol bits.
RdPoint blahut_arimoto(const RdProblem& problem, double slope, double tol = 1e-10,
                       int max_iter = 200000);

/// Bisection on the slope until the expected distortion matches target.
RdPoint rd_point_at_distortion(const RdProblem& problem, double target, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Rate-distortion bounds for shift processes under the l-inf shift metric.

/// H(pattern on (-M, N+M) x (-M, M)) / N; bounds R(d, mu, eps) from above for
/// every eps > alpha^-M.
double rd_upper_bound(const MeasureSpec& measure, double alpha, int M, int N);

/// lim_{N->inf} of rd_upper_bound, i.e. (2M - 1) h_mu.
double rd_upper_rate(const MeasureSpec& measure, int M);

struct RdLowerBound {
  int M = 0;         ///< delta alpha^-(M+1) < eps <= delta alpha^-M
  double raw = 0.0;  ///< (2M+1) h - H(delta) - delta (2M+1) log2|A|
  double value = 0.0;  ///< max(raw, 0)
};

/// Lower bound on R(d, mu, eps). Requires 0 < eps < delta < 1/2.
RdLowerBound rd_lower_bound(const MeasureSpec& measure, double alpha, Scale epsilon,
                            double delta);
double rd_lower_bound(const MeasureSpec& measure, double alpha, double epsilon, double delta);

struct RdimSchedulePoint {
  Scale epsilon;
  double delta;
};

/// eps_j = alpha^-(2^j) for j = 3..14 with delta_j = 1 / log2(1/eps_j) clipped
/// to (eps_j, 1/4].
std::vector<RdimSchedulePoint> default_rdim_schedule(double alpha);

struct RdimBounds {
  DimensionEstimate lower;
  DimensionEstimate upper;
};

/// Sequences rd_lower_bound / log2(1/eps) and rd_upper_rate / log2(1/eps),
/// each fitted with v = v_inf + c / log2(1/eps).
RdimBounds rdim_bounds(const MeasureSpec& measure, double alpha,
                       std::span<const RdimSchedulePoint> schedule);

}  // namespace shiftdim
