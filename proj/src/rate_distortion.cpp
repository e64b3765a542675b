#include "shiftdim/rate_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shiftdim/info.hpp"

namespace shiftdim {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

long snap_floor(double t) {
  const double r = std::round(t);
  if (std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t))) return static_cast<long>(r);
  return static_cast<long>(std::floor(t));
}

void check_problem(const RdProblem& problem) {
  const std::size_t nx = problem.source.size();
  if (problem.reproduction_size == 0) throw InvalidArgument("empty reproduction alphabet");
  if (problem.distortion.size() != nx * problem.reproduction_size)
    throw InvalidArgument("distortion matrix must have |source| x |reproduction| entries");
  for (double d : problem.distortion)
    if (!std::isfinite(d) || d < 0.0) throw InvalidArgument("distortions must be finite and nonnegative");
}

double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

NonConvergence::NonConvergence(int iterations, double gap)
    : Error("Blahut-Arimoto did not converge in " + std::to_string(iterations) +
            " iterations (rate bound gap " + std::to_string(gap) + " bits)"),
      gap_(gap) {}

RdProblem hamming_problem(const FiniteDistribution& source) {
  const std::size_t k = source.size();
  std::vector<double> d(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i) d[i * k + i] = 0.0;
  return {source, k, std::move(d)};
}

RdPoint blahut_arimoto(const RdProblem& problem, double slope, double tol, int max_iter) {
  check_problem(problem);
  if (!(slope >= 0.0) || !std::isfinite(slope)) throw InvalidArgument("slope must be finite and >= 0");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  // Outcomes of probability zero have no conditional law; drop them.
  std::vector<std::size_t> xs;
  for (std::size_t x = 0; x < problem.source.size(); ++x)
    if (problem.source[x] > 0.0) xs.push_back(x);
  const std::size_t ny = problem.reproduction_size;
  auto d = [&](std::size_t x, std::size_t y) { return problem.distortion[x * ny + y]; };

  std::vector<double> q(ny, 1.0 / static_cast<double>(ny));
  std::vector<double> log_z(xs.size()), c(ny), scratch(ny);
  RdPoint point;
  point.slope = slope;
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t y = 0; y < ny; ++y)
        scratch[y] = (q[y] > 0.0 ? std::log(q[y]) : -std::numeric_limits<double>::infinity()) - slope * d(xs[i], y);
      log_z[i] = log_sum_exp(scratch);
    }
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t y = 0; y < ny; ++y)
        c[y] += problem.source[xs[i]] * std::exp(-slope * d(xs[i], y) - log_z[i]);
    // Csiszar bounds: R_upper - R_lower <= max ln c - sum q c ln c.
    double max_log_c = -std::numeric_limits<double>::infinity(), mean = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      if (c[y] > 0.0) max_log_c = std::max(max_log_c, std::log(c[y]));
      if (q[y] > 0.0 && c[y] > 0.0) mean += q[y] * c[y] * std::log(c[y]);
    }
    const double gap = std::max(0.0, (max_log_c - mean) / kLn2);
    point.iterations = it;
    point.gap = gap;
    const bool done = gap < tol;
    if (done || it == max_iter) {
      // Rate and distortion of the current test channel Q(y|x) = q_y e^{-s d} / Z_x,
      // whose output law is q_y c_y.
      double rate = 0.0, distortion = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double px = problem.source[xs[i]];
        for (std::size_t y = 0; y < ny; ++y) {
          if (q[y] <= 0.0) continue;
          const double log_ratio = -slope * d(xs[i], y) - log_z[i];  // ln Q(y|x) - ln q_y
          const double Q = q[y] * std::exp(log_ratio);
          if (Q <= 0.0) continue;
          const double out = q[y] * c[y];
          rate += px * Q * (std::log(Q) - std::log(out));
          distortion += px * Q * d(xs[i], y);
        }
      }
      point.rate = std::max(0.0, rate / kLn2);
      point.distortion = distortion;
      if (!done) throw NonConvergence(it, gap);
      return point;
    }
    for (std::size_t y = 0; y < ny; ++y) q[y] *= c[y];
    double total = 0.0;
    for (double v : q) total += v;
    for (double& v : q) v /= total;
  }
  throw NonConvergence(max_iter, point.gap);
}

RdPoint rd_point_at_distortion(const RdProblem& problem, double target, double tol) {
  check_problem(problem);
  const std::size_t nx = problem.source.size(), ny = problem.reproduction_size;
  double d_min = 0.0, d_max = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < nx; ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < ny; ++y) best = std::min(best, problem.distortion[x * ny + y]);
    d_min += problem.source[x] * best;
  }
  for (std::size_t y = 0; y < ny; ++y) {
    double e = 0.0;
    for (std::size_t x = 0; x < nx; ++x) e += problem.source[x] * problem.distortion[x * ny + y];
    d_max = std::min(d_max, e);
  }
  if (target < d_min - 1e-15)
    throw InvalidArgument("target distortion is below the smallest achievable value");
  if (target >= d_max) return RdPoint{0.0, d_max, 0.0, 0, 0.0};

  const double ba_tol = std::min(tol, 1e-10);
  double lo = -10.0, hi = 10.0;  // bracket on ln s
  while (blahut_arimoto(problem, std::exp(hi), ba_tol).distortion > target && hi < 700.0) hi += 10.0;
  RdPoint best = blahut_arimoto(problem, std::exp(hi), ba_tol);
  for (int i = 0; i < 200 && std::abs(best.distortion - target) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    RdPoint p = blahut_arimoto(problem, std::exp(mid), ba_tol);
    (p.distortion > target ? lo : hi) = mid;
    best = std::move(p);
    if (hi - lo < 1e-14) break;
  }
  return best;
}

// ---------------------------------------------------------------------------

double rd_upper_bound(const MeasureSpec& measure, double alpha, int M, int N) {
  if (!(alpha > 1.0)) throw InvalidArgument("alpha must be > 1");
  if (M < 1 || N < 1) throw InvalidArgument("M and N must be positive");
  const LatticeSet window = LatticeSet::from_rect(IntRect(-M + 1, N + M - 1, -M + 1, M - 1));
  return window_entropy(measure, window) / N;
}

double rd_upper_rate(const MeasureSpec& measure, int M) {
  if (M < 1) throw InvalidArgument("M must be positive");
  return (2 * M - 1) * ks_entropy(measure);
}

RdLowerBound rd_lower_bound(const MeasureSpec& measure, double alpha, Scale epsilon, double delta) {
  if (!(alpha > 1.0)) throw InvalidArgument("alpha must be > 1");
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidArgument("delta must lie in (0, 1/2)");
  const double gap = epsilon.log2_inverse() + std::log2(delta);  // log2(delta / eps)
  if (!(gap > 0.0)) throw InvalidArgument("need eps < delta");
  // delta alpha^-(M+1) < eps <= delta alpha^-M, compared on the log scale.
  const long M = snap_floor(gap / std::log2(alpha));
  if (M < 0) throw InvalidArgument("no resolution index for this (eps, delta)");
  const double width = 2.0 * static_cast<double>(M) + 1.0;
  RdLowerBound out;
  out.M = static_cast<int>(M);
  out.raw = width * ks_entropy(measure) - binary_entropy(delta) -
            delta * width * std::log2(static_cast<double>(measure.alphabet_size()));
  out.value = std::max(0.0, out.raw);
  return out;
}

double rd_lower_bound(const MeasureSpec& measure, double alpha, double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < delta)) throw InvalidArgument("need 0 < eps < delta");
  return rd_lower_bound(measure, alpha, Scale::from_epsilon(epsilon), delta).value;
}

std::vector<RdimSchedulePoint> default_rdim_schedule(double alpha) {
  if (!(alpha > 1.0)) throw InvalidArgument("alpha must be > 1");
  std::vector<RdimSchedulePoint> out;
  for (int j = 3; j <= 14; ++j) {
    const Scale eps = Scale::alpha_power(alpha, std::ldexp(1.0, j));
    out.push_back({eps, std::min(0.25, 1.0 / eps.log2_inverse())});
  }
  return out;
}

RdimBounds rdim_bounds(const MeasureSpec& measure, double alpha, std::span<const RdimSchedulePoint> schedule) {
  if (schedule.size() < 2) throw InvalidArgument("rdim needs at least two scales");
  RdimBounds out;
  out.lower.kind = BoundKind::Lower;
  out.upper.kind = BoundKind::Upper;
  std::vector<double> x, lo, up;
  for (const RdimSchedulePoint& pt : schedule) {
    const double L = pt.epsilon.log2_inverse();
    if (!(L > 0.0)) throw InvalidArgument("rdim scales must be below 1");
    const RdLowerBound lower = rd_lower_bound(measure, alpha, pt.epsilon, pt.delta);
    // Smallest M with alpha^-M < eps.
    const int m_up = resolution_index(alpha, pt.epsilon).M;
    x.push_back(1.0 / L);
    lo.push_back(lower.value / L);
    up.push_back(rd_upper_rate(measure, m_up) / L);
    out.lower.schedule.push_back({lower.M, 0, lo.back()});
    out.upper.schedule.push_back({m_up, 0, up.back()});
  }
  out.lower.extrapolation = fit_inverse_model(x, lo, "inv(log2(1/eps))");
  out.upper.extrapolation = fit_inverse_model(x, up, "inv(log2(1/eps))");
  out.lower.value = out.lower.extrapolation.limit;
  out.upper.value = out.upper.extrapolation.limit;
  return out;
}

}  // namespace shiftdim
