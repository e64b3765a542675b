#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shiftdim/lattice.hpp"
#include "shiftdim/subshift.hpp"

namespace shiftdim {

/// Nonnegative probabilities summing to one within 1e-12.
class FiniteDistribution {
 public:
  explicit FiniteDistribution(std::vector<double> probabilities);

  std::span<const double> probabilities() const noexcept { return p_; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

/// Law of the pattern on a finite window: outcomes[i] has probability law[i].
struct PatternDistribution {
  std::vector<Pattern> outcomes;
  FiniteDistribution law;
};

/// A measure on A^{Z^2} invariant under both shifts: either i.i.d. cells, or
/// i.i.d. rows that are each a stationary Markov chain. For 1D systems the
/// markov-row kind is read as a single stationary chain.
class MeasureSpec {
 public:
  enum class Kind { Bernoulli, MarkovRow };

  static MeasureSpec bernoulli(std::vector<double> weights);
  /// Stationary vector is solved for when not given; given ones must satisfy
  /// pi P = pi within 1e-10.
  static MeasureSpec markov_row(Eigen::MatrixXd transition,
                                std::optional<Eigen::VectorXd> stationary = std::nullopt);

  Kind kind() const noexcept { return kind_; }
  std::size_t alphabet_size() const noexcept;

  /// Bernoulli weights, or the stationary vector for markov-row.
  const Eigen::VectorXd& marginal() const noexcept { return marginal_; }
  /// Transition matrix (markov-row only; 0x0 for Bernoulli).
  const Eigen::MatrixXd& transition() const noexcept { return transition_; }

 private:
  MeasureSpec(Kind kind, Eigen::VectorXd marginal, Eigen::MatrixXd transition);

  Kind kind_;
  Eigen::VectorXd marginal_;
  Eigen::MatrixXd transition_;
};

/// Stationary distribution of a row-stochastic matrix.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

/// Maximal-entropy Markov measure of a 1D nearest-neighbour SFT (or of the
/// rows of a row-lift). Requires an irreducible transition graph.
MeasureSpec parry_measure(const SftSpec& sft);

/// mu of the cylinder defined by p.
double pattern_probability(const MeasureSpec& measure, const Pattern& p);

/// Throws InvalidArgument unless alphabets agree and every forbidden
/// pattern of sft has measure zero.
void check_measure_supported(const MeasureSpec& measure, const SftSpec& sft);

/// Exact marginal on support, listing positive-probability patterns in
/// canonical order. Throws ResourceError above max_cells.
PatternDistribution window_marginal(const MeasureSpec& measure, const LatticeSet& support,
                                    std::size_t max_cells = 20);

/// Shannon entropy (bits) of the window marginal, from the product / Markov
/// structure without enumeration.
double window_entropy(const MeasureSpec& measure, const LatticeSet& support);

/// -log2 of the largest cylinder probability over patterns on support.
double min_cylinder_information(const MeasureSpec& measure, const LatticeSet& support);

}  // namespace shiftdim
