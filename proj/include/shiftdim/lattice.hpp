#pragma once

// Exact integer geometry on Z^2: rectangles, finite point sets, the
// boundary/interior of a set relative to a window, the greedy disjoint
// subfamily of a totally ordered rectangle family, and the windows swept
// by an l-infinity square moving along a lattice direction.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shiftdim/errors.hpp"

namespace shiftdim {

/// A site u = (m, n) of Z^2. 1D supports use n = 0.
struct Point {
  int m = 0;
  int n = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

inline Point operator+(Point p, Point q) { return {p.m + q.m, p.n + q.n}; }
inline Point operator-(Point p, Point q) { return {p.m - q.m, p.n - q.n}; }

/// The discrete rectangle [a,b] x [c,d]; always nonempty.
class IntRect {
 public:
  IntRect(int a, int b, int c, int d);

  int a() const noexcept { return a_; }
  int b() const noexcept { return b_; }
  int c() const noexcept { return c_; }
  int d() const noexcept { return d_; }

  /// Side extents b - a and d - c, the quantities compared by rect_leq.
  int width() const noexcept { return b_ - a_; }
  int height() const noexcept { return d_ - c_; }

  std::int64_t cardinality() const noexcept {
    return static_cast<std::int64_t>(b_ - a_ + 1) * (d_ - c_ + 1);
  }

  bool contains(Point p) const noexcept {
    return a_ <= p.m && p.m <= b_ && c_ <= p.n && p.n <= d_;
  }
  bool contains(const IntRect& r) const noexcept {
    return a_ <= r.a_ && r.b_ <= b_ && c_ <= r.c_ && r.d_ <= d_;
  }
  bool intersects(const IntRect& r) const noexcept {
    return a_ <= r.b_ && r.a_ <= b_ && c_ <= r.d_ && r.c_ <= d_;
  }

  friend bool operator==(const IntRect&, const IntRect&) = default;

 private:
  int a_, b_, c_, d_;
};

/// 3R = [2a-b, 2b-a] x [2c-d, 2d-c].
IntRect rect_triple(const IntRect& r);

/// Pre-order on rectangles: both side extents of r are at most those of s.
bool rect_leq(const IntRect& r, const IntRect& s);

/// Finite duplicate-free subset of Z^2 kept in lexicographic (m, n) order.
class LatticeSet {
 public:
  LatticeSet() = default;
  explicit LatticeSet(std::vector<Point> points);

  static LatticeSet from_rect(const IntRect& r);

  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  bool contains(Point p) const;
  /// Position of p in canonical order.
  std::optional<std::size_t> index_of(Point p) const;
  std::optional<IntRect> bounding_box() const;
  /// True when the set is exactly its bounding box.
  bool is_rectangle() const;

  LatticeSet translated(Point u) const;
  bool is_subset_of(const LatticeSet& other) const;

  friend bool operator==(const LatticeSet&, const LatticeSet&) = default;

 private:
  std::vector<Point> points_;
};

LatticeSet set_union(const LatticeSet& x, const LatticeSet& y);
LatticeSet set_difference(const LatticeSet& x, const LatticeSet& y);

/// Sites u whose translate u + lambda meets both omega and its complement.
/// Throws InvalidArgument when lambda is empty.
LatticeSet boundary_set(const LatticeSet& omega, const LatticeSet& lambda);

/// omega minus boundary_set(omega, lambda).
LatticeSet interior_set(const LatticeSet& omega, const LatticeSet& lambda);

/// Thrown by greedy_disjoint_subcover when two rectangles are incomparable.
class NotTotallyOrdered : public InvalidArgument {
 public:
  NotTotallyOrdered(std::size_t i, std::size_t j);
  std::size_t first() const noexcept { return i_; }
  std::size_t second() const noexcept { return j_; }

 private:
  std::size_t i_, j_;
};

/// Greedy Vitali-type selection. Rectangles are visited from rect_leq-largest
/// down (ties broken by lowest input index); each one disjoint from everything
/// chosen so far is selected. Returns selected input indices in selection
/// order. The selection is pairwise disjoint and every input rectangle lies in
/// rect_triple of some selected one. An empty family yields an empty selection.
std::vector<std::size_t> greedy_disjoint_subcover(std::span<const IntRect> rects);

/// Lambda_{a,b}(M,N) = {(a n + x, b n + y) : 0 <= n < N, |(x,y)|_inf < M}.
LatticeSet lambda_set(int a, int b, int M, int N);

/// |Lambda_{a,b}(M,N)| computed by merging per-row intervals.
std::int64_t lambda_cardinality(int a, int b, int M, int N);

/// |Lambda_{a,b}(M,N)| / (M N).
double lambda_density(int a, int b, int M, int N);

}  // namespace shiftdim
