#pragma once

// Information measures in bits.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "shiftdim/measure.hpp"

namespace shiftdim {

/// Row-major joint law P(X = i, Y = j); total mass 1 within 1e-12.
class JointDistribution {
 public:
  JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> mass);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t i, std::size_t j) const { return mass_[i * cols_ + j]; }
  std::span<const double> mass() const noexcept { return mass_; }

  FiniteDistribution marginal_x() const;
  FiniteDistribution marginal_y() const;
  JointDistribution transposed() const;
  /// Law of (f(X), g(Y)) for maps into [0, fx_size) and [0, gy_size).
  JointDistribution pushforward(const std::function<std::size_t(std::size_t)>& f,
                                std::size_t fx_size,
                                const std::function<std::size_t(std::size_t)>& g,
                                std::size_t gy_size) const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> mass_;
};

double shannon_entropy(const FiniteDistribution& dist);
double shannon_entropy(std::span<const double> probabilities);

/// H(delta) = -delta log delta - (1 - delta) log(1 - delta), delta in [0, 1].
double binary_entropy(double delta);

/// H(X) + H(Y) - H(X, Y), clamped at 0 against rounding.
double mutual_information(const JointDistribution& joint);

/// Kolmogorov-Sinai entropy per site of the Z^2 action.
double ks_entropy(const MeasureSpec& measure);

/// H(X) - N H(delta) - delta N log2|B|; a strict lower bound on I(X;Y) for
/// B^N-valued pairs that disagree at fewer than delta N sites on average.
/// Requires 0 < delta < 1/2.
double mi_lower_bound_lemma(double hx, int N, double delta, std::size_t b_size);

}  // namespace shiftdim
