#include "shiftdim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace shiftdim {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    throw InvalidArgument("alpha must be a finite real > 1, got " + std::to_string(alpha));
}

// floor(t), except that values within a relative 1e-9 of an integer snap to
// it, so eps = alpha^-k lands on the intended side of each bracket.
long snap_floor(double t) {
  const double r = std::round(t);
  if (std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t))) return static_cast<long>(r);
  return static_cast<long>(std::floor(t));
}

void check_action(const ActionSpec& action) {
  if (action.a == 0 && action.b == 0) throw InvalidArgument("action (a,b) must be nonzero");
}

// Union over 0 <= n < N of (n a, n b) + {|u| <= r} where r is given as an
// l-inf radius or an l2 radius squared.
LatticeSet window_with_radius(const ActionSpec& action, int N, Norm norm, long radius_inf,
                              long radius_sq) {
  check_action(action);
  if (N < 1) throw InvalidArgument("N must be positive");
  std::vector<Point> ball;
  const int r = static_cast<int>(norm == Norm::Linf ? radius_inf
                                                    : static_cast<long>(std::sqrt(static_cast<double>(radius_sq))) + 1);
  for (int m = -r; m <= r; ++m)
    for (int n = -r; n <= r; ++n) {
      const bool inside = norm == Norm::Linf
                              ? std::max(std::abs(m), std::abs(n)) <= radius_inf
                              : static_cast<long>(m) * m + static_cast<long>(n) * n <= radius_sq;
      if (inside) ball.push_back({m, n});
    }
  std::vector<Point> pts;
  pts.reserve(ball.size() * static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k)
    for (const Point& u : ball) pts.push_back(Point{k * action.a, k * action.b} + u);
  return LatticeSet(std::move(pts));
}

double log2_count_or_throw(const BigInt& count) {
  if (count == 0) throw InvalidArgument("the shift has no admissible pattern on the window");
  return log2_big(count);
}

Scale eps_of_index(double alpha, int M) { return Scale::alpha_power(alpha, M - 1); }

void check_schedule(std::span<const int> ms, int min_m) {
  if (ms.empty()) throw InvalidArgument("empty M schedule");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] < min_m)
      throw InvalidArgument("M schedule entries must be >= " + std::to_string(min_m));
    if (i > 0 && ms[i] <= ms[i - 1]) throw InvalidArgument("M schedule must be increasing");
  }
}

}  // namespace

std::string to_string(Norm norm) { return norm == Norm::Linf ? "linf" : "l2"; }

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Upper: return "upper";
    case BoundKind::Lower: return "lower";
    case BoundKind::Exact: return "exact";
  }
  return "exact";
}

Scale Scale::from_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InvalidArgument("epsilon must be a positive finite real");
  return Scale(-std::log2(epsilon));
}

Scale Scale::from_log2_inverse(double log2_inv_eps) {
  if (!std::isfinite(log2_inv_eps)) throw InvalidArgument("log2(1/eps) must be finite");
  return Scale(log2_inv_eps);
}

Scale Scale::alpha_power(double alpha, double k) {
  check_alpha(alpha);
  return from_log2_inverse(k * std::log2(alpha));
}

double Scale::epsilon() const { return std::exp2(-log2_inv_); }

ResolutionIndex resolution_index(const MetricSpec& spec, double epsilon) {
  check_alpha(spec.alpha);
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw InvalidArgument("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  return resolution_index(spec.alpha, Scale::from_epsilon(epsilon));
}

ResolutionIndex resolution_index(double alpha, Scale scale) {
  check_alpha(alpha);
  if (scale.log2_inverse() < -1e-12) throw InvalidArgument("epsilon must be at most 1");
  const long k = snap_floor(std::max(0.0, scale.log2_inverse()) / std::log2(alpha));
  if (k >= std::numeric_limits<int>::max()) throw InvalidArgument("epsilon too small");
  return {static_cast<int>(k) + 1};
}

MetricValue metric_eval(const MetricSpec& spec, const Pattern& p, const Pattern& q) {
  check_alpha(spec.alpha);
  if (p.support() != q.support()) throw InvalidArgument("metric_eval: patterns have different supports");
  auto norm = [&](Point u) {
    return spec.norm == Norm::Linf ? static_cast<double>(std::max(std::abs(u.m), std::abs(u.n)))
                                   : std::hypot(static_cast<double>(u.m), static_cast<double>(u.n));
  };
  const double inf = std::numeric_limits<double>::infinity();
  double nearest_disagreement = inf;
  const auto pts = p.support().points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (p.cells()[i] != q.cells()[i]) nearest_disagreement = std::min(nearest_disagreement, norm(pts[i]));
  // Nearest site the patterns do not see.
  double nearest_unseen = 0.0;
  if (auto box = p.support().bounding_box()) {
    nearest_unseen = inf;
    for (int m = box->a() - 1; m <= box->b() + 1; ++m)
      for (int n = box->c() - 1; n <= box->d() + 1; ++n)
        if (!p.support().contains({m, n})) nearest_unseen = std::min(nearest_unseen, norm({m, n}));
  }
  const bool exact = nearest_disagreement <= nearest_unseen;
  const double r = std::min(nearest_disagreement, nearest_unseen);
  return {std::pow(spec.alpha, -r), exact};
}

LatticeSet bowen_window(const ActionSpec& action, int N, ResolutionIndex M, Norm norm) {
  if (M.M < 1) throw InvalidArgument("resolution index must be positive");
  const long r = M.M - 1;
  return window_with_radius(action, N, norm, r, r * r);
}

LatticeSet one_sided_window(int N, ResolutionIndex M) {
  if (N < 1 || M.M < 1) throw InvalidArgument("N and M must be positive");
  return LatticeSet::from_rect(IntRect(0, N + M.M - 2, 0, 0));
}

LatticeSet determining_window(const SftSpec& sft, const MetricSpec& spec, const ActionSpec& action,
                              int N, Scale scale) {
  check_alpha(spec.alpha);
  if (N < 1) throw InvalidArgument("N must be positive");
  if (scale.log2_inverse() < -1e-12) return {};  // eps > 1: one set covers everything
  const ResolutionIndex M = resolution_index(spec.alpha, scale);
  if (sft.dimension() == 1) return one_sided_window(N, M);
  if (spec.norm == Norm::Linf) return bowen_window(action, N, M, Norm::Linf);
  // rho-distance alpha^-|u|_2 < eps exactly when |u|_2 > t, t = log_alpha(1/eps).
  const double t = std::max(0.0, scale.log2_inverse()) / std::log2(spec.alpha);
  return window_with_radius(action, N, Norm::L2, 0, snap_floor(t * t));
}

BigInt covering_number(const SftSpec& sft, const MetricSpec& spec, const ActionSpec& action, int N,
                       double epsilon, const CountLimits& limits) {
  check_alpha(spec.alpha);
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  return count_locally_admissible(sft, determining_window(sft, spec, action, N, Scale::from_epsilon(epsilon)),
                                  limits);
}

EntropyAtResolution entropy_at_resolution(const SftSpec& sft, const MetricSpec& spec,
                                          const ActionSpec& action, double epsilon,
                                          std::span<const int> n_schedule, const CountLimits& limits) {
  std::vector<int> ns(n_schedule.begin(), n_schedule.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.size() < 2) throw InvalidArgument("entropy at resolution needs two distinct N");
  EntropyAtResolution out;
  for (int N : ns)
    out.log2_counts.push_back({N, log2_count_or_throw(covering_number(sft, spec, action, N, epsilon, limits))});
  const auto& [n1, l1] = out.log2_counts[out.log2_counts.size() - 2];
  const auto& [n2, l2] = out.log2_counts.back();
  out.value = (l2 - l1) / (n2 - n1);
  return out;
}

Extrapolation fit_inverse_model(std::span<const double> x, std::span<const double> v, std::string model) {
  if (x.size() != v.size()) throw InvalidArgument("fit: x and v differ in length");
  const double n = static_cast<double>(x.size());
  double sx = 0, sv = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sv += v[i];
  }
  const double mx = sx / n, mv = sv / n;
  double sxx = 0, sxv = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxv += (x[i] - mx) * (v[i] - mv);
  }
  if (x.size() < 2 || !(sxx > 1e-300))
    throw InvalidArgument("extrapolation needs at least two distinct scale points");
  const double c = sxv / sxx;
  return {std::move(model), mv - c * mx, c};
}

std::vector<ResolutionRow> resolution_table(const SftSpec& sft, const MetricSpec& spec,
                                            const ActionSpec& action, std::span<const int> ms,
                                            int n_factor, const CountLimits& limits) {
  check_alpha(spec.alpha);
  check_schedule(ms, 1);
  if (n_factor < 1) throw InvalidArgument("N factor must be positive");
  std::vector<ResolutionRow> table;
  for (int M : ms) {
    const Scale eps = eps_of_index(spec.alpha, M);
    ResolutionRow row;
    row.M = M;
    if (sft.dimension() == 1) {
      row.N1 = row.N2 = 1;
      row.log2_count_n1 = row.log2_count_n2 =
          log2_count_or_throw(count_locally_admissible(sft, determining_window(sft, spec, action, 1, eps), limits));
      row.rate = row.log2_count_n2;
    } else {
      row.N2 = std::max(2, n_factor * M);
      row.N1 = row.N2 / 2;
      row.log2_count_n1 =
          log2_count_or_throw(count_locally_admissible(sft, determining_window(sft, spec, action, row.N1, eps), limits));
      row.log2_count_n2 =
          log2_count_or_throw(count_locally_admissible(sft, determining_window(sft, spec, action, row.N2, eps), limits));
      row.rate = (row.log2_count_n2 - row.log2_count_n1) / (row.N2 - row.N1);
    }
    table.push_back(row);
  }
  return table;
}

DimensionEstimate mmdim_from_table(const MetricSpec& spec, std::span<const ResolutionRow> table) {
  check_alpha(spec.alpha);
  DimensionEstimate est;
  est.kind = BoundKind::Upper;
  std::vector<double> x, v;
  for (const ResolutionRow& row : table) {
    if (row.M < 2) continue;  // log(1/eps_1) = 0
    const double value = row.rate / ((row.M - 1) * std::log2(spec.alpha));
    est.schedule.push_back({row.M, row.N2, value});
    x.push_back(1.0 / (row.M - 1));
    v.push_back(value);
  }
  est.extrapolation = fit_inverse_model(x, v, "inv(M-1)");
  est.value = est.extrapolation.limit;
  return est;
}

DimensionEstimate mmdim_estimate(const SftSpec& sft, const MetricSpec& spec, const ActionSpec& action,
                                 std::span<const int> m_schedule, int n_factor, const CountLimits& limits) {
  check_schedule(m_schedule, 2);
  if (m_schedule.size() < 3) throw InvalidArgument("mmdim needs at least three scheduled M");
  const auto table = resolution_table(sft, spec, action, m_schedule, n_factor, limits);
  DimensionEstimate est = mmdim_from_table(spec, table);
  if (sft.certificate() != FixtureFamily::None) est.kind = BoundKind::Exact;
  return est;
}

double hausdorff_upper_at_scale(const SftSpec& sft, const MetricSpec& spec, const ActionSpec& action,
                                int N, int M, int Mcap, const CountLimits& limits) {
  check_alpha(spec.alpha);
  if (M < 1 || Mcap < M) throw InvalidArgument("need 1 <= M <= Mcap");
  double best = std::numeric_limits<double>::infinity();
  for (int Mp = M; Mp <= Mcap; ++Mp) {
    const BigInt count =
        count_locally_admissible(sft, determining_window(sft, spec, action, N, eps_of_index(spec.alpha, Mp)), limits);
    best = std::min(best, log2_count_or_throw(count) / (Mp * std::log2(spec.alpha)));
  }
  return best;
}

double hausdorff_lower_at_scale(const SftSpec& sft, const MeasureSpec& measure, const MetricSpec& spec,
                                const ActionSpec& action, int N, int M, int Mcap) {
  check_alpha(spec.alpha);
  check_measure_supported(measure, sft);
  if (M < 1 || Mcap < M) throw InvalidArgument("need 1 <= M <= Mcap");
  double best = std::numeric_limits<double>::infinity();
  for (int Mp = M; Mp <= Mcap; ++Mp) {
    const LatticeSet w = determining_window(sft, spec, action, N, eps_of_index(spec.alpha, Mp));
    best = std::min(best, min_cylinder_information(measure, w) / (Mp * std::log2(spec.alpha)));
  }
  return best;
}

DimensionEstimate mhdim_upper_from_table(const MetricSpec& spec, std::span<const ResolutionRow> table) {
  check_alpha(spec.alpha);
  if (table.empty()) throw InvalidArgument("empty resolution table");
  DimensionEstimate est;
  est.kind = BoundKind::Upper;
  // Per-scale value: critical exponent of the uniform depth-M cover. A suffix
  // minimum over the schedule would be clipped at its last M and bias the fit.
  std::vector<double> x, v;
  for (const ResolutionRow& row : table) {
    const double value = row.rate / (row.M * std::log2(spec.alpha));
    est.schedule.push_back({row.M, row.N2, value});
    x.push_back(1.0 / row.M);
    v.push_back(value);
  }
  est.extrapolation = fit_inverse_model(x, v, "inv(M)");
  est.value = est.extrapolation.limit;
  return est;
}

DimensionEstimate mhdim_lower_from_measure(const SftSpec& sft, const MeasureSpec& measure,
                                           const MetricSpec& spec, const ActionSpec& action,
                                           std::span<const int> m_schedule, int n_factor) {
  check_alpha(spec.alpha);
  check_schedule(m_schedule, 1);
  check_measure_supported(measure, sft);
  std::vector<double> ratio;
  std::vector<int> n2s;
  for (int M : m_schedule) {
    const Scale eps = eps_of_index(spec.alpha, M);
    double info_rate = 0.0;
    int N2 = 1;
    if (sft.dimension() == 1) {
      info_rate = min_cylinder_information(measure, determining_window(sft, spec, action, 1, eps));
    } else {
      N2 = std::max(2, n_factor * M);
      const int N1 = N2 / 2;
      const double i1 = min_cylinder_information(measure, determining_window(sft, spec, action, N1, eps));
      const double i2 = min_cylinder_information(measure, determining_window(sft, spec, action, N2, eps));
      info_rate = (i2 - i1) / (N2 - N1);
    }
    ratio.push_back(info_rate / (M * std::log2(spec.alpha)));
    n2s.push_back(N2);
  }
  DimensionEstimate est;
  est.kind = BoundKind::Lower;
  std::vector<double> x, v;
  double running = std::numeric_limits<double>::infinity();
  std::vector<double> suffix(ratio.size());
  for (std::size_t i = ratio.size(); i-- > 0;) suffix[i] = running = std::min(running, ratio[i]);
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    est.schedule.push_back({m_schedule[i], n2s[i], suffix[i]});
    x.push_back(1.0 / m_schedule[i]);
    v.push_back(suffix[i]);
  }
  est.extrapolation = fit_inverse_model(x, v, "inv(M)");
  est.value = est.extrapolation.limit;
  return est;
}

MeanHausdorffBounds mhdim_bounds(const SftSpec& sft, const MeasureSpec* measure, const MetricSpec& spec,
                                 const ActionSpec& action, std::span<const int> m_schedule, int n_factor,
                                 const CountLimits& limits) {
  const auto table = resolution_table(sft, spec, action, m_schedule, n_factor, limits);
  MeanHausdorffBounds out{std::nullopt, mhdim_upper_from_table(spec, table)};
  if (measure) out.lower = mhdim_lower_from_measure(sft, *measure, spec, action, m_schedule, n_factor);
  return out;
}

TameGrowthResult tame_growth_check(const SftSpec& sft, const MetricSpec& spec, double delta, int Mmax,
                                   const CountLimits& limits) {
  check_alpha(spec.alpha);
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (Mmax < 2) throw InvalidArgument("Mmax must be at least 2");
  TameGrowthResult out;
  for (int M = 1; M <= Mmax; ++M) {
    const Scale eps = eps_of_index(spec.alpha, M);
    const BigInt count = count_locally_admissible(sft, determining_window(sft, spec, ActionSpec{}, 1, eps), limits);
    const double value = std::exp2(-delta * eps.log2_inverse()) * log2_count_or_throw(count);
    out.values.push_back({M, value});
  }
  std::size_t from = out.values.size() - 1;
  while (from > 0 && out.values[from - 1].second >= out.values[from].second) --from;
  out.nonincreasing_from = out.values[from].first;
  out.consistent = out.nonincreasing_from <= Mmax / 2 + 1;
  return out;
}

}  // namespace shiftdim
