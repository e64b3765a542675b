#include "shiftdim/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace shiftdim {

IntRect::IntRect(int a, int b, int c, int d) : a_(a), b_(b), c_(c), d_(d) {
  if (a > b || c > d) {
    throw InvalidArgument("rectangle [" + std::to_string(a) + "," + std::to_string(b) + "]x[" +
                          std::to_string(c) + "," + std::to_string(d) + "] is empty");
  }
}

IntRect rect_triple(const IntRect& r) {
  return {2 * r.a() - r.b(), 2 * r.b() - r.a(), 2 * r.c() - r.d(), 2 * r.d() - r.c()};
}

bool rect_leq(const IntRect& r, const IntRect& s) {
  return r.width() <= s.width() && r.height() <= s.height();
}

// ---------------------------------------------------------------------------

LatticeSet::LatticeSet(std::vector<Point> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

LatticeSet LatticeSet::from_rect(const IntRect& r) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(r.cardinality()));
  for (int m = r.a(); m <= r.b(); ++m)
    for (int n = r.c(); n <= r.d(); ++n) pts.push_back({m, n});
  LatticeSet s;
  s.points_ = std::move(pts);  // already canonical
  return s;
}

bool LatticeSet::contains(Point p) const {
  return std::binary_search(points_.begin(), points_.end(), p);
}

std::optional<std::size_t> LatticeSet::index_of(Point p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it == points_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

std::optional<IntRect> LatticeSet::bounding_box() const {
  if (points_.empty()) return std::nullopt;
  int c = points_.front().n, d = points_.front().n;
  for (const Point& p : points_) {
    c = std::min(c, p.n);
    d = std::max(d, p.n);
  }
  return IntRect(points_.front().m, points_.back().m, c, d);
}

bool LatticeSet::is_rectangle() const {
  auto box = bounding_box();
  return box && static_cast<std::int64_t>(points_.size()) == box->cardinality();
}

LatticeSet LatticeSet::translated(Point u) const {
  LatticeSet s;
  s.points_.reserve(points_.size());
  for (const Point& p : points_) s.points_.push_back(p + u);
  return s;  // translation preserves lexicographic order
}

bool LatticeSet::is_subset_of(const LatticeSet& other) const {
  return std::includes(other.points_.begin(), other.points_.end(), points_.begin(),
                       points_.end());
}

LatticeSet set_union(const LatticeSet& x, const LatticeSet& y) {
  std::vector<Point> out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return LatticeSet(std::move(out));
}

LatticeSet set_difference(const LatticeSet& x, const LatticeSet& y) {
  std::vector<Point> out;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return LatticeSet(std::move(out));
}

LatticeSet boundary_set(const LatticeSet& omega, const LatticeSet& lambda) {
  if (lambda.empty()) throw InvalidArgument("boundary_set: window lambda is empty");
  if (omega.empty()) return {};
  const IntRect ob = *omega.bounding_box();
  const IntRect lb = *lambda.bounding_box();
  // u + lambda can only meet omega for u in omega - lambda; pad by one.
  std::vector<Point> out;
  for (int m = ob.a() - lb.b() - 1; m <= ob.b() - lb.a() + 1; ++m) {
    for (int n = ob.c() - lb.d() - 1; n <= ob.d() - lb.c() + 1; ++n) {
      bool inside = false, outside = false;
      for (const Point& l : lambda) {
        (omega.contains(Point{m, n} + l) ? inside : outside) = true;
        if (inside && outside) break;
      }
      if (inside && outside) out.push_back({m, n});
    }
  }
  return LatticeSet(std::move(out));
}

LatticeSet interior_set(const LatticeSet& omega, const LatticeSet& lambda) {
  return set_difference(omega, boundary_set(omega, lambda));
}

// ---------------------------------------------------------------------------

NotTotallyOrdered::NotTotallyOrdered(std::size_t i, std::size_t j)
    : InvalidArgument("rectangles " + std::to_string(i) + " and " + std::to_string(j) +
                      " are not comparable under rect_leq"),
      i_(i),
      j_(j) {}

std::vector<std::size_t> greedy_disjoint_subcover(std::span<const IntRect> rects) {
  for (std::size_t i = 0; i < rects.size(); ++i)
    for (std::size_t j = i + 1; j < rects.size(); ++j)
      if (!rect_leq(rects[i], rects[j]) && !rect_leq(rects[j], rects[i]))
        throw NotTotallyOrdered(i, j);

  // On a totally ordered family, sorting by (width, height) descending is a
  // linear extension of rect_leq with maximal elements first.
  std::vector<std::size_t> order(rects.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const IntRect& r = rects[i];
    const IntRect& s = rects[j];
    if (r.width() != s.width()) return r.width() > s.width();
    return r.height() > s.height();
  });

  std::vector<std::size_t> chosen;
  for (std::size_t i : order) {
    const bool disjoint = std::none_of(chosen.begin(), chosen.end(), [&](std::size_t k) {
      return rects[k].intersects(rects[i]);
    });
    if (disjoint) chosen.push_back(i);
  }
  return chosen;
}

// ---------------------------------------------------------------------------

namespace {

void check_lambda_args(int a, int b, int M, int N) {
  if (a == 0 && b == 0) throw InvalidArgument("lambda_set: direction (a,b) must be nonzero");
  if (M < 1 || N < 1) throw InvalidArgument("lambda_set: M and N must be positive");
}

// Merged x-intervals of Lambda_{a,b}(M,N), one vector per row y = y0 + index.
struct RowIntervals {
  int y0 = 0;
  std::vector<std::vector<std::pair<int, int>>> rows;
};

RowIntervals lambda_rows(int a, int b, int M, int N) {
  const int r = M - 1;
  const int ylo = std::min(0, b * (N - 1)) - r;
  const int yhi = std::max(0, b * (N - 1)) + r;
  RowIntervals out;
  out.y0 = ylo;
  out.rows.resize(static_cast<std::size_t>(yhi - ylo + 1));
  for (int n = 0; n < N; ++n)
    for (int y = b * n - r; y <= b * n + r; ++y)
      out.rows[static_cast<std::size_t>(y - ylo)].push_back({a * n - r, a * n + r});
  for (auto& row : out.rows) {
    std::sort(row.begin(), row.end());
    std::vector<std::pair<int, int>> merged;
    for (const auto& iv : row) {
      if (!merged.empty() && iv.first <= merged.back().second + 1)
        merged.back().second = std::max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    row = std::move(merged);
  }
  return out;
}

}  // namespace

LatticeSet lambda_set(int a, int b, int M, int N) {
  check_lambda_args(a, b, M, N);
  const RowIntervals rows = lambda_rows(a, b, M, N);
  std::vector<Point> pts;
  for (std::size_t k = 0; k < rows.rows.size(); ++k)
    for (const auto& [lo, hi] : rows.rows[k])
      for (int x = lo; x <= hi; ++x) pts.push_back({x, rows.y0 + static_cast<int>(k)});
  return LatticeSet(std::move(pts));
}

std::int64_t lambda_cardinality(int a, int b, int M, int N) {
  check_lambda_args(a, b, M, N);
  std::int64_t total = 0;
  for (const auto& row : lambda_rows(a, b, M, N).rows)
    for (const auto& [lo, hi] : row) total += hi - lo + 1;
  return total;
}

double lambda_density(int a, int b, int M, int N) {
  return static_cast<double>(lambda_cardinality(a, b, M, N)) /
         (static_cast<double>(M) * static_cast<double>(N));
}

}  // namespace shiftdim
