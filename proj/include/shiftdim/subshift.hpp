#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftdim/bigint.hpp"
#include "shiftdim/lattice.hpp"

namespace shiftdim {

using Symbol = std::uint8_t;

/// Ordered, duplicate-free list of symbol tokens. Symbols are addressed by
/// their index in construction order.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  /// Tokens "0", "1", ..., "k-1".
  static Alphabet of_size(std::size_t k);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& token(Symbol s) const { return symbols_.at(s); }
  std::optional<Symbol> find(std::string_view token) const;
  std::span<const std::string> tokens() const noexcept { return symbols_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

/// A symbol assignment on a finite support; cells()[i] is the symbol at
/// support().points()[i].
class Pattern {
 public:
  Pattern() = default;
  Pattern(LatticeSet support, std::vector<Symbol> cells);

  /// Builds from unordered (site, symbol) pairs; duplicate sites throw.
  static Pattern from_cells(std::vector<std::pair<Point, Symbol>> cells);

  const LatticeSet& support() const noexcept { return support_; }
  std::span<const Symbol> cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }

  /// Symbol at p; throws InvalidArgument if p is outside the support.
  Symbol at(Point p) const;
  Pattern translated(Point u) const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  LatticeSet support_;
  std::vector<Symbol> cells_;
};

/// Restriction to omega; throws InvalidArgument if omega is not a subset of
/// the support.
Pattern restrict_pattern(const Pattern& p, const LatticeSet& omega);

/// Shape certificates for families whose locally admissible patterns are all
/// globally admissible.
enum class FixtureFamily { None, Full, RowLift, ThreeDot };

std::string to_string(FixtureFamily family);
std::optional<FixtureFamily> fixture_family_from_string(std::string_view text);

/// Subshift of finite type on Z (dimension 1) or Z^2 (dimension 2).
class SftSpec {
 public:
  SftSpec(int dimension, Alphabet alphabet, std::vector<Pattern> forbidden,
          FixtureFamily certificate = FixtureFamily::None);

  int dimension() const noexcept { return dimension_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const Pattern> forbidden() const noexcept { return forbidden_; }
  FixtureFamily certificate() const noexcept { return certificate_; }

  SftSpec with_certificate(FixtureFamily family) const;

  friend bool operator==(const SftSpec&, const SftSpec&) = default;

 private:
  int dimension_;
  Alphabet alphabet_;
  std::vector<Pattern> forbidden_;
  FixtureFamily certificate_;
};

/// Checks the forbidden set has the structural shape the certificate claims.
/// Throws InvalidArgument on mismatch; FixtureFamily::None always passes.
void validate_certificate(const SftSpec& sft);

/// The certificate shape that matches sft, if any (Full before RowLift).
std::optional<FixtureFamily> detect_fixture_family(const SftSpec& sft);

SftSpec full_shift(int dimension, std::size_t alphabet_size);
/// Binary 1D shift forbidding the word 11.
SftSpec golden_mean_1d();
/// x_u + x_{u+e1} + x_{u+e2} = 0 mod 2 on {0,1}^{Z^2}.
SftSpec three_dot();
/// Z^2 SFT whose rows are independently constrained by base.
SftSpec row_lift(const SftSpec& base);
/// Inverse of row_lift for systems whose forbidden patterns are horizontal.
SftSpec row_base(const SftSpec& sft);

// ---------------------------------------------------------------------------
// Counting

struct CountLimits {
  std::size_t max_backtrack_cells = 64;
  std::size_t max_dp_states = std::size_t{1} << 20;
  std::uint64_t max_backtrack_nodes = std::uint64_t{1} << 32;
  /// 0 = read SHIFTDIM_WORKERS, else hardware concurrency.
  unsigned workers = 0;
};

enum class CountMethod { Auto, FrontierDp, Backtrack };

/// True when no translate of a forbidden pattern that fits inside the
/// pattern's support matches it.
bool is_locally_admissible(const SftSpec& sft, const Pattern& p);

/// Number of locally admissible patterns on support.
BigInt count_locally_admissible(const SftSpec& sft, const LatticeSet& support,
                                const CountLimits& limits = {},
                                CountMethod method = CountMethod::Auto);

/// Visits every locally admissible pattern once, in lexicographic order of
/// (cell, symbol). The visitor returns false to stop early.
void for_each_locally_admissible(const SftSpec& sft, const LatticeSet& support,
                                 const std::function<bool(const Pattern&)>& visit,
                                 const CountLimits& limits = {});

std::vector<Pattern> enumerate_locally_admissible(const SftSpec& sft,
                                                  const LatticeSet& support,
                                                  const CountLimits& limits = {});

/// Worker count used when CountLimits::workers is 0.
unsigned default_worker_count();

// ---------------------------------------------------------------------------
// Entropy

/// Topological entropy (bits/symbol) of a 1D SFT from the spectral radius of
/// its higher-block transition graph. Throws InvalidArgument if the shift is
/// empty or a forbidden word is wider than max_width.
double transfer_matrix_entropy_1d(const SftSpec& sft, int max_width = 12);

struct BoxEntropyPoint {
  int N;
  BigInt count;
  double value;  ///< log2(count) / N^2
};

/// log2 count on [0,N-1]^2 divided by N^2 for N = 1..Nmax. Each value
/// upper-bounds the Z^2 topological entropy.
std::vector<BoxEntropyPoint> box_entropy_estimate(const SftSpec& sft, int Nmax,
                                                  const CountLimits& limits = {});

}  // namespace shiftdim
