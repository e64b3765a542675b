#include "shiftdim/info.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shiftdim/errors.hpp"

namespace shiftdim {

JointDistribution::JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> mass)
    : rows_(rows), cols_(cols), mass_(std::move(mass)) {
  if (rows_ == 0 || cols_ == 0 || mass_.size() != rows_ * cols_)
    throw InvalidArgument("joint distribution needs rows*cols entries");
  FiniteDistribution check(mass_);  // validates nonnegativity and total mass
}

FiniteDistribution JointDistribution::marginal_x() const {
  std::vector<double> p(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) p[i] += at(i, j);
  return FiniteDistribution(std::move(p));
}

FiniteDistribution JointDistribution::marginal_y() const {
  std::vector<double> p(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) p[j] += at(i, j);
  return FiniteDistribution(std::move(p));
}

JointDistribution JointDistribution::transposed() const {
  std::vector<double> t(mass_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = at(i, j);
  return JointDistribution(cols_, rows_, std::move(t));
}

JointDistribution JointDistribution::pushforward(const std::function<std::size_t(std::size_t)>& f,
                                                 std::size_t fx_size,
                                                 const std::function<std::size_t(std::size_t)>& g,
                                                 std::size_t gy_size) const {
  std::vector<double> out(fx_size * gy_size, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const std::size_t fi = f(i), gj = g(j);
      if (fi >= fx_size || gj >= gy_size) throw InvalidArgument("pushforward map leaves its range");
      out[fi * gy_size + gj] += at(i, j);
    }
  return JointDistribution(fx_size, gy_size, std::move(out));
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities)
    if (p > 0.0) h -= p * std::log2(p);
  return std::max(0.0, h);
}

double shannon_entropy(const FiniteDistribution& dist) { return shannon_entropy(dist.probabilities()); }

double binary_entropy(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw InvalidArgument("binary entropy needs delta in [0, 1], got " + std::to_string(delta));
  const double p[2] = {delta, 1.0 - delta};
  return shannon_entropy(p);
}

double mutual_information(const JointDistribution& joint) {
  const double i = shannon_entropy(joint.marginal_x()) + shannon_entropy(joint.marginal_y()) -
                   shannon_entropy(joint.mass());
  return std::max(0.0, i);
}

double ks_entropy(const MeasureSpec& measure) {
  const Eigen::VectorXd& pi = measure.marginal();
  if (measure.kind() == MeasureSpec::Kind::Bernoulli)
    return shannon_entropy(std::span<const double>(pi.data(), static_cast<std::size_t>(pi.size())));
  const Eigen::MatrixXd& P = measure.transition();
  double h = 0.0;
  for (long i = 0; i < P.rows(); ++i)
    for (long j = 0; j < P.cols(); ++j)
      if (P(i, j) > 0.0) h -= pi(i) * P(i, j) * std::log2(P(i, j));
  return std::max(0.0, h);
}

double mi_lower_bound_lemma(double hx, int N, double delta, std::size_t b_size) {
  if (!(delta > 0.0 && delta < 0.5))
    throw InvalidArgument("the disagreement rate delta must lie in (0, 1/2)");
  if (N < 1 || b_size < 1) throw InvalidArgument("N and |B| must be positive");
  return hx - N * binary_entropy(delta) - delta * N * std::log2(static_cast<double>(b_size));
}

}  // namespace shiftdim
