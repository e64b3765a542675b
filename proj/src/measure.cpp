#include "shiftdim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "shiftdim/errors.hpp"

namespace shiftdim {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-10;

void check_probability_vector(std::span<const double> p, const std::string& what) {
  if (p.empty()) throw InvalidArgument(what + " is empty");
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidArgument(what + " has a negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw InvalidArgument(what + " sums to " + std::to_string(sum) + ", not 1");
}

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Columns of each row of the support, keyed by row index n.
std::map<int, std::vector<int>> rows_of(const LatticeSet& support) {
  std::map<int, std::vector<int>> rows;
  for (const Point& p : support) rows[p.n].push_back(p.m);  // m ascending within a row
  return rows;
}

// P^g for the gaps that occur, computed once each.
class TransitionPowers {
 public:
  explicit TransitionPowers(const Eigen::MatrixXd& P) : P_(P) {}

  const Eigen::MatrixXd& operator()(int gap) {
    auto it = cache_.find(gap);
    if (it != cache_.end()) return it->second;
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(P_.rows(), P_.cols());
    Eigen::MatrixXd base = P_;
    for (int g = gap; g > 0; g >>= 1) {
      if (g & 1) result = result * base;
      base = base * base;
    }
    return cache_.emplace(gap, std::move(result)).first->second;
  }

 private:
  Eigen::MatrixXd P_;
  std::map<int, Eigen::MatrixXd> cache_;
};

}  // namespace

FiniteDistribution::FiniteDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
  check_probability_vector(p_, "distribution");
}

// ---------------------------------------------------------------------------

MeasureSpec::MeasureSpec(Kind kind, Eigen::VectorXd marginal, Eigen::MatrixXd transition)
    : kind_(kind), marginal_(std::move(marginal)), transition_(std::move(transition)) {}

MeasureSpec MeasureSpec::bernoulli(std::vector<double> weights) {
  check_probability_vector(weights, "Bernoulli weights");
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<long>(weights.size()));
  return MeasureSpec(Kind::Bernoulli, std::move(w), Eigen::MatrixXd());
}

MeasureSpec MeasureSpec::markov_row(Eigen::MatrixXd transition,
                                    std::optional<Eigen::VectorXd> stationary) {
  if (transition.rows() == 0 || transition.rows() != transition.cols())
    throw InvalidArgument("transition matrix must be square and nonempty");
  for (long i = 0; i < transition.rows(); ++i) {
    const Eigen::VectorXd row = transition.row(i).transpose();
    check_probability_vector(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
                             "transition row " + std::to_string(i));
  }
  Eigen::VectorXd pi;
  if (stationary) {
    pi = *stationary;
    if (pi.size() != transition.rows())
      throw InvalidArgument("stationary vector length does not match the transition matrix");
    check_probability_vector(std::span<const double>(pi.data(), static_cast<std::size_t>(pi.size())),
                             "stationary vector");
    const double residual = (transition.transpose() * pi - pi).cwiseAbs().maxCoeff();
    if (residual > kStationaryTolerance)
      throw InvalidArgument("stationary vector violates pi P = pi (residual " +
                            std::to_string(residual) + ")");
  } else {
    pi = stationary_distribution(transition);
  }
  return MeasureSpec(Kind::MarkovRow, std::move(pi), std::move(transition));
}

std::size_t MeasureSpec::alphabet_size() const noexcept {
  return static_cast<std::size_t>(marginal_.size());
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition) {
  const long k = transition.rows();
  if (k == 0 || transition.cols() != k) throw InvalidArgument("transition matrix must be square");
  Eigen::MatrixXd system(k + 1, k);
  system.topRows(k) = transition.transpose() - Eigen::MatrixXd::Identity(k, k);
  system.row(k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::VectorXd pi = system.colPivHouseholderQr().solve(rhs);
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  return pi;
}

MeasureSpec parry_measure(const SftSpec& sft) {
  for (const Pattern& f : sft.forbidden()) {
    const auto pts = f.support().points();
    const bool one_row = std::all_of(pts.begin(), pts.end(), [&](Point q) { return q.n == pts.front().n; });
    if (!one_row || pts.back().m - pts.front().m > 1)
      throw InvalidArgument("Parry measure needs a nearest-neighbour row constraint");
  }
  const std::size_t k = sft.alphabet().size();
  const long K = static_cast<long>(k);
  Eigen::MatrixXd A = Eigen::MatrixXd::Ones(K, K);
  for (const Pattern& f : sft.forbidden()) {
    const auto pts = f.support().points();
    const auto sym = f.cells();
    if (pts.size() == 1) {
      A.row(sym[0]).setZero();
      A.col(sym[0]).setZero();
    } else if (pts[1].m == pts[0].m + 1) {
      A(sym[0], sym[1]) = 0.0;
    }
  }
  // Irreducibility: every symbol reaches every other.
  for (long s = 0; s < K; ++s) {
    std::vector<bool> seen(k, false);
    std::vector<long> stack{s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!stack.empty()) {
      const long v = stack.back();
      stack.pop_back();
      for (long w = 0; w < K; ++w)
        if (A(v, w) > 0 && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw InvalidArgument("Parry measure needs an irreducible transition graph");
  }

  auto perron = [](const Eigen::MatrixXd& M, double& lambda) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    long best = 0;
    for (long i = 1; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
    lambda = es.eigenvalues()[best].real();
    Eigen::VectorXd v = es.eigenvectors().col(best).real().cwiseAbs();
    return Eigen::VectorXd(v / v.sum());
  };
  double lambda = 0.0, lambda_left = 0.0;
  const Eigen::VectorXd v = perron(A, lambda);
  const Eigen::VectorXd u = perron(A.transpose(), lambda_left);

  Eigen::MatrixXd P(K, K);
  for (long i = 0; i < K; ++i)
    for (long j = 0; j < K; ++j) P(i, j) = A(i, j) * v(j) / (lambda * v(i));
  // Remove rounding so every row is stochastic to machine precision.
  for (long i = 0; i < K; ++i) P.row(i) /= P.row(i).sum();
  Eigen::VectorXd pi = u.cwiseProduct(v);
  pi /= pi.sum();
  return MeasureSpec::markov_row(std::move(P), std::move(pi));
}

double pattern_probability(const MeasureSpec& measure, const Pattern& p) {
  const std::size_t k = measure.alphabet_size();
  for (Symbol s : p.cells())
    if (s >= k) throw InvalidArgument("pattern symbol outside the measure's alphabet");
  if (measure.kind() == MeasureSpec::Kind::Bernoulli) {
    double prob = 1.0;
    for (Symbol s : p.cells()) prob *= measure.marginal()(s);
    return prob;
  }
  TransitionPowers powers(measure.transition());
  std::map<int, std::vector<std::pair<int, Symbol>>> rows;
  const auto pts = p.support().points();
  for (std::size_t i = 0; i < pts.size(); ++i) rows[pts[i].n].push_back({pts[i].m, p.cells()[i]});
  double prob = 1.0;
  for (const auto& [n, cells] : rows) {
    prob *= measure.marginal()(cells.front().second);
    for (std::size_t i = 1; i < cells.size(); ++i)
      prob *= powers(cells[i].first - cells[i - 1].first)(cells[i - 1].second, cells[i].second);
  }
  return prob;
}

void check_measure_supported(const MeasureSpec& measure, const SftSpec& sft) {
  if (measure.alphabet_size() != sft.alphabet().size())
    throw InvalidArgument("measure alphabet has " + std::to_string(measure.alphabet_size()) +
                          " symbols but the shift has " + std::to_string(sft.alphabet().size()));
  for (std::size_t i = 0; i < sft.forbidden().size(); ++i)
    if (pattern_probability(measure, sft.forbidden()[i]) > 0.0)
      throw InvalidArgument("measure gives positive mass to forbidden pattern " + std::to_string(i));
}

PatternDistribution window_marginal(const MeasureSpec& measure, const LatticeSet& support,
                                    std::size_t max_cells) {
  const std::size_t n = support.size();
  if (n > max_cells)
    throw ResourceError("window of " + std::to_string(n) + " cells exceeds the marginal limit of " +
                        std::to_string(max_cells));
  const std::size_t k = measure.alphabet_size();
  std::vector<Pattern> outcomes;
  std::vector<double> law;
  std::vector<Symbol> cells(n, 0);
  while (true) {
    Pattern p(support, cells);
    const double prob = pattern_probability(measure, p);
    if (prob > 0.0) {
      outcomes.push_back(std::move(p));
      law.push_back(prob);
    }
    // Odometer with the last cell fastest gives lexicographic order.
    std::size_t i = n;
    while (i > 0 && cells[i - 1] + 1u == k) cells[--i] = 0;
    if (i == 0) break;
    ++cells[i - 1];
  }
  double total = 0.0;
  for (double x : law) total += x;
  for (double& x : law) x /= total;
  return {std::move(outcomes), FiniteDistribution(std::move(law))};
}

double window_entropy(const MeasureSpec& measure, const LatticeSet& support) {
  const Eigen::VectorXd& pi = measure.marginal();
  double h_marginal = 0.0;
  for (long i = 0; i < pi.size(); ++i) h_marginal -= xlog2x(pi(i));
  if (measure.kind() == MeasureSpec::Kind::Bernoulli)
    return h_marginal * static_cast<double>(support.size());

  TransitionPowers powers(measure.transition());
  std::map<int, double> conditional;  // H(X_gap | X_0) per gap
  auto cond = [&](int gap) {
    auto it = conditional.find(gap);
    if (it != conditional.end()) return it->second;
    const Eigen::MatrixXd& Pg = powers(gap);
    double h = 0.0;
    for (long i = 0; i < Pg.rows(); ++i) {
      double row = 0.0;
      for (long j = 0; j < Pg.cols(); ++j) row -= xlog2x(Pg(i, j));
      h += pi(i) * row;
    }
    conditional.emplace(gap, h);
    return h;
  };
  double total = 0.0;
  for (const auto& [n, ms] : rows_of(support)) {
    total += h_marginal;
    for (std::size_t i = 1; i < ms.size(); ++i) total += cond(ms[i] - ms[i - 1]);
  }
  return total;
}

double min_cylinder_information(const MeasureSpec& measure, const LatticeSet& support) {
  const Eigen::VectorXd& pi = measure.marginal();
  const double ninf = -std::numeric_limits<double>::infinity();
  auto safe_log = [&](double x) { return x > 0.0 ? std::log2(x) : ninf; };
  if (measure.kind() == MeasureSpec::Kind::Bernoulli)
    return -safe_log(pi.maxCoeff()) * static_cast<double>(support.size());

  TransitionPowers powers(measure.transition());
  const long k = pi.size();
  double total = 0.0;
  for (const auto& [n, ms] : rows_of(support)) {
    // Viterbi: best log-probability of a row pattern ending in each symbol.
    Eigen::VectorXd best(k);
    for (long s = 0; s < k; ++s) best(s) = safe_log(pi(s));
    for (std::size_t i = 1; i < ms.size(); ++i) {
      const Eigen::MatrixXd& Pg = powers(ms[i] - ms[i - 1]);
      Eigen::VectorXd next = Eigen::VectorXd::Constant(k, ninf);
      for (long a = 0; a < k; ++a)
        for (long b = 0; b < k; ++b) next(b) = std::max(next(b), best(a) + safe_log(Pg(a, b)));
      best = next;
    }
    total -= best.maxCoeff();
  }
  return total;
}

}  // namespace shiftdim
