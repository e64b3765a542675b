#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shiftdim/subshift.hpp"

namespace shiftdim {

namespace {

int forbidden_width(const Pattern& p) {
  const auto pts = p.support().points();
  return pts.back().m - pts.front().m + 1;
}

}  // namespace

double transfer_matrix_entropy_1d(const SftSpec& sft, int max_width) {
  if (sft.dimension() != 1) throw InvalidArgument("transfer-matrix entropy needs a 1D shift");
  int width = 1;
  for (const Pattern& p : sft.forbidden()) width = std::max(width, forbidden_width(p));
  if (width > max_width)
    throw InvalidArgument("forbidden word of width " + std::to_string(width) +
                          " exceeds the block recoding limit " + std::to_string(max_width));

  // Higher-block presentation: vertices are admissible words of length L,
  // edges are admissible words of length L + 1.
  const int L = std::max(width - 1, 1);
  const LatticeSet vertex_window = LatticeSet::from_rect(IntRect(0, L - 1, 0, 0));
  const LatticeSet edge_window = LatticeSet::from_rect(IntRect(0, L, 0, 0));
  std::map<std::vector<Symbol>, std::size_t> vertex_id;
  for (const Pattern& w : enumerate_locally_admissible(sft, vertex_window)) {
    const std::size_t id = vertex_id.size();
    vertex_id.emplace(std::vector<Symbol>(w.cells().begin(), w.cells().end()), id);
  }
  const std::size_t V = vertex_id.size();
  std::vector<std::vector<std::size_t>> out(V);
  for (const Pattern& w : enumerate_locally_admissible(sft, edge_window)) {
    const auto cells = w.cells();
    const std::vector<Symbol> from(cells.begin(), cells.end() - 1);
    const std::vector<Symbol> to(cells.begin() + 1, cells.end());
    out[vertex_id.at(from)].push_back(vertex_id.at(to));
  }

  // Trim vertices without a predecessor or successor; what survives carries
  // every bi-infinite path.
  std::vector<bool> alive(V, true);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> indeg(V, 0), outdeg(V, 0);
    for (std::size_t v = 0; v < V; ++v) {
      if (!alive[v]) continue;
      for (std::size_t w : out[v])
        if (alive[w]) {
          ++outdeg[v];
          ++indeg[w];
        }
    }
    for (std::size_t v = 0; v < V; ++v)
      if (alive[v] && (indeg[v] == 0 || outdeg[v] == 0)) {
        alive[v] = false;
        changed = true;
      }
  }
  std::vector<std::size_t> keep;
  std::vector<long> index(V, -1);
  for (std::size_t v = 0; v < V; ++v)
    if (alive[v]) {
      index[v] = static_cast<long>(keep.size());
      keep.push_back(v);
    }
  if (keep.empty()) throw InvalidArgument("the shift is empty: no bi-infinite admissible sequence");

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<long>(keep.size()), static_cast<long>(keep.size()));
  for (std::size_t v : keep)
    for (std::size_t w : out[v])
      if (alive[w]) A(index[v], index[w]) += 1.0;
  const Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
  double rho = 0.0;
  for (long i = 0; i < eig.size(); ++i) rho = std::max(rho, std::abs(eig[i]));
  return std::max(0.0, std::log2(rho));
}

std::vector<BoxEntropyPoint> box_entropy_estimate(const SftSpec& sft, int Nmax,
                                                  const CountLimits& limits) {
  if (sft.dimension() != 2) throw InvalidArgument("box entropy needs a 2D shift");
  if (Nmax < 1) throw InvalidArgument("Nmax must be positive");
  std::vector<BoxEntropyPoint> out;
  for (int N = 1; N <= Nmax; ++N) {
    BigInt count = count_locally_admissible(sft, LatticeSet::from_rect(IntRect(0, N - 1, 0, N - 1)), limits);
    if (count == 0)
      throw InvalidArgument("no admissible pattern on the " + std::to_string(N) + "x" +
                            std::to_string(N) + " box");
    const double value = log2_big(count) / (static_cast<double>(N) * N);
    out.push_back({N, std::move(count), value});
  }
  return out;
}

}  // namespace shiftdim
