#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "shiftdim/subshift.hpp"

namespace shiftdim {

namespace {

// A translate of a forbidden pattern lying inside the support: it is violated
// when every listed cell carries its listed symbol.
struct Constraint {
  std::vector<std::size_t> cells;  // indices into the working cell order
  std::vector<Symbol> symbols;
  std::size_t last = 0;            // largest entry of cells
};

std::vector<Constraint> build_constraints(const SftSpec& sft, const LatticeSet& support,
                                          std::span<const std::size_t> position) {
  std::vector<Constraint> out;
  const auto pts = support.points();
  for (const Pattern& f : sft.forbidden()) {
    const auto fpts = f.support().points();
    const auto fsym = f.cells();
    for (const Point& q : pts) {
      const Point u = q - fpts.front();
      Constraint c;
      bool inside = true;
      for (std::size_t k = 0; k < fpts.size() && inside; ++k) {
        const auto idx = support.index_of(fpts[k] + u);
        if (!idx) {
          inside = false;
          break;
        }
        c.cells.push_back(position[*idx]);
        c.symbols.push_back(fsym[k]);
      }
      if (!inside) continue;
      c.last = *std::max_element(c.cells.begin(), c.cells.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

// Cells of support in a processing order; position[i] is the rank of the i-th
// canonical point.
struct Ordering {
  std::vector<std::size_t> position;
  std::vector<Constraint> constraints;
  std::vector<std::vector<std::size_t>> by_last;  // constraint ids keyed by last cell
  std::vector<std::size_t> last_use;              // last step at which a cell is read
  std::size_t max_frontier = 0;
};

Ordering make_ordering(const SftSpec& sft, const LatticeSet& support, bool row_major) {
  const std::size_t n = support.size();
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = i;
  if (row_major) {
    const auto pts = support.points();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return std::pair(pts[x].n, pts[x].m) < std::pair(pts[y].n, pts[y].m);
    });
    for (std::size_t r = 0; r < n; ++r) rank[idx[r]] = r;
  }
  Ordering o;
  o.position = rank;
  o.constraints = build_constraints(sft, support, o.position);
  o.by_last.resize(n);
  o.last_use.assign(n, 0);
  for (std::size_t c = 0; c < o.constraints.size(); ++c) {
    const Constraint& con = o.constraints[c];
    o.by_last[con.last].push_back(c);
    for (std::size_t cell : con.cells) o.last_use[cell] = std::max(o.last_use[cell], con.last);
  }
  // Frontier after step t: cells <= t still read after t.
  std::vector<int> delta(n + 1, 0);
  for (std::size_t cell = 0; cell < n; ++cell)
    if (o.last_use[cell] > cell) {
      delta[cell] += 1;
      delta[o.last_use[cell]] -= 1;
    }
  int live = 0;
  for (std::size_t t = 0; t < n; ++t) {
    live += delta[t];
    o.max_frontier = std::max(o.max_frontier, static_cast<std::size_t>(live));
  }
  return o;
}

// k^e, saturating at max + 1.
std::size_t saturating_pow(std::size_t k, std::size_t e, std::size_t max) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (v > max / std::max<std::size_t>(k, 1)) return max + 1;
    v *= k;
  }
  return v;
}

bool violated(const Constraint& c, std::span<const Symbol> assignment) {
  for (std::size_t k = 0; k < c.cells.size(); ++k)
    if (assignment[c.cells[k]] != c.symbols[k]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Frontier (broken-profile) dynamic programming.

BigInt count_frontier(const Ordering& o, std::size_t n, std::size_t k) {
  std::vector<std::size_t> frontier;  // cells, digit i has weight k^i
  std::vector<BigInt> table(1, BigInt(1));
  std::vector<Symbol> scratch(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<std::size_t> next_frontier;
    for (std::size_t cell : frontier)
      if (o.last_use[cell] > t) next_frontier.push_back(cell);
    if (o.last_use[t] > t) next_frontier.push_back(t);
    std::vector<std::size_t> weight(n, 0);
    {
      std::size_t w = 1;
      for (std::size_t cell : next_frontier) {
        weight[cell] = w;
        w *= k;
      }
    }
    std::vector<BigInt> next(saturating_pow(k, next_frontier.size(),
                                            std::numeric_limits<std::size_t>::max() - 1));
    const auto& checks = o.by_last[t];
    for (std::size_t code = 0; code < table.size(); ++code) {
      if (table[code].is_zero()) continue;
      std::size_t rest = code;
      std::size_t base_code = 0;
      for (std::size_t cell : frontier) {
        scratch[cell] = static_cast<Symbol>(rest % k);
        rest /= k;
        base_code += weight[cell] * scratch[cell];
      }
      for (std::size_t s = 0; s < k; ++s) {
        scratch[t] = static_cast<Symbol>(s);
        bool ok = true;
        for (std::size_t c : checks)
          if (violated(o.constraints[c], scratch)) {
            ok = false;
            break;
          }
        if (ok) next[base_code + weight[t] * s] += table[code];
      }
    }
    frontier = std::move(next_frontier);
    table = std::move(next);
  }
  BigInt total = 0;
  for (const BigInt& v : table) total += v;
  return total;
}

// ---------------------------------------------------------------------------
// Backtracking.

class Search {
 public:
  Search(const Ordering& o, std::size_t n, std::size_t k, std::uint64_t budget,
         std::atomic<std::uint64_t>& nodes)
      : o_(o), n_(n), k_(k), budget_(budget), nodes_(nodes), assignment_(n, 0) {
    // Beyond free_from no constraint is checked, so the tail is unconstrained.
    free_from_ = 0;
    for (std::size_t t = 0; t < n; ++t)
      if (!o.by_last[t].empty()) free_from_ = t + 1;
  }

  std::span<Symbol> assignment() { return assignment_; }

  bool consistent_at(std::size_t t) const {
    for (std::size_t c : o_.by_last[t])
      if (violated(o_.constraints[c], assignment_)) return false;
    return true;
  }

  BigInt count_from(std::size_t t) {
    if (t >= free_from_) return big_pow(static_cast<unsigned>(k_), n_ - t);
    BigInt total = 0;
    for (std::size_t s = 0; s < k_; ++s) {
      tick();
      assignment_[t] = static_cast<Symbol>(s);
      if (consistent_at(t)) total += count_from(t + 1);
    }
    return total;
  }

  template <class Visit>
  bool visit_from(std::size_t t, Visit& visit) {
    if (t == n_) return visit(std::span<const Symbol>(assignment_));
    for (std::size_t s = 0; s < k_; ++s) {
      tick();
      assignment_[t] = static_cast<Symbol>(s);
      if (consistent_at(t) && !visit_from(t + 1, visit)) return false;
    }
    return true;
  }

 private:
  void tick() {
    if (nodes_.fetch_add(1, std::memory_order_relaxed) >= budget_)
      throw ResourceError("backtracking search exceeded " + std::to_string(budget_) +
                          " nodes; raise the node budget or shrink the support");
  }

  const Ordering& o_;
  std::size_t n_, k_;
  std::uint64_t budget_;
  std::atomic<std::uint64_t>& nodes_;
  std::vector<Symbol> assignment_;
  std::size_t free_from_ = 0;
};

BigInt count_backtrack(const Ordering& o, std::size_t n, std::size_t k,
                       const CountLimits& limits) {
  std::atomic<std::uint64_t> nodes{0};
  const unsigned workers = limits.workers ? limits.workers : default_worker_count();
  if (workers <= 1 || n < 8) return Search(o, n, k, limits.max_backtrack_nodes, nodes).count_from(0);

  // Split on admissible prefixes of a fixed depth; each worker takes a
  // strided share and partial counts are summed exactly.
  std::size_t depth = 0;
  for (std::size_t w = 1; w < 8 * static_cast<std::size_t>(workers) && depth + 4 < n; w *= k) ++depth;
  std::vector<std::vector<Symbol>> prefixes;
  {
    Search s(o, n, k, limits.max_backtrack_nodes, nodes);
    auto rec = [&](auto&& self, std::size_t t) -> void {
      if (t == depth) {
        prefixes.emplace_back(s.assignment().begin(), s.assignment().begin() + depth);
        return;
      }
      for (std::size_t sym = 0; sym < k; ++sym) {
        s.assignment()[t] = static_cast<Symbol>(sym);
        if (s.consistent_at(t)) self(self, t + 1);
      }
    };
    rec(rec, 0);
  }
  std::vector<BigInt> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          Search s(o, n, k, limits.max_backtrack_nodes, nodes);
          for (std::size_t i = w; i < prefixes.size(); i += workers) {
            std::copy(prefixes[i].begin(), prefixes[i].end(), s.assignment().begin());
            partial[w] += s.count_from(depth);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  BigInt total = 0;
  for (const BigInt& p : partial) total += p;
  return total;
}

}  // namespace

unsigned default_worker_count() {
  if (const char* env = std::getenv("SHIFTDIM_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("SHIFTDIM_WORKERS must be a positive integer, got '") +
                          env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool is_locally_admissible(const SftSpec& sft, const Pattern& p) {
  for (Symbol s : p.cells())
    if (s >= sft.alphabet().size())
      throw InvalidArgument("pattern symbol outside the alphabet");
  std::vector<std::size_t> identity(p.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  const auto constraints = build_constraints(sft, p.support(), identity);
  return std::none_of(constraints.begin(), constraints.end(),
                      [&](const Constraint& c) { return violated(c, p.cells()); });
}

BigInt count_locally_admissible(const SftSpec& sft, const LatticeSet& support,
                                const CountLimits& limits, CountMethod method) {
  const std::size_t n = support.size();
  const std::size_t k = sft.alphabet().size();
  if (n == 0) return 1;
  if (sft.forbidden().empty() && method == CountMethod::Auto)
    return big_pow(static_cast<unsigned>(k), n);

  Ordering order = make_ordering(sft, support, false);
  const std::size_t col_states = saturating_pow(k, order.max_frontier, limits.max_dp_states);
  std::size_t best_states = col_states;
  if (method != CountMethod::Backtrack) {
    Ordering row = make_ordering(sft, support, true);
    const std::size_t row_states = saturating_pow(k, row.max_frontier, limits.max_dp_states);
    if (row_states < col_states) {
      best_states = row_states;
      order = std::move(row);
    }
  }
  const bool dp_ok = best_states <= limits.max_dp_states;

  switch (method) {
    case CountMethod::FrontierDp:
      if (!dp_ok)
        throw ResourceError("frontier DP would need more than " +
                            std::to_string(limits.max_dp_states) + " states");
      return count_frontier(order, n, k);
    case CountMethod::Backtrack:
      if (n > limits.max_backtrack_cells)
        throw ResourceError("support has " + std::to_string(n) + " cells; backtracking is capped at " +
                            std::to_string(limits.max_backtrack_cells));
      return count_backtrack(order, n, k, limits);
    case CountMethod::Auto:
      if (dp_ok) return count_frontier(order, n, k);
      if (n <= limits.max_backtrack_cells) return count_backtrack(order, n, k, limits);
      throw ResourceError("support of " + std::to_string(n) +
                          " cells is too large to count (frontier DP needs more than " +
                          std::to_string(limits.max_dp_states) + " states)");
  }
  return 0;
}

void for_each_locally_admissible(const SftSpec& sft, const LatticeSet& support,
                                 const std::function<bool(const Pattern&)>& visit,
                                 const CountLimits& limits) {
  const std::size_t n = support.size();
  const std::size_t k = sft.alphabet().size();
  Ordering o = make_ordering(sft, support, false);
  std::atomic<std::uint64_t> nodes{0};
  Search search(o, n, k, limits.max_backtrack_nodes, nodes);
  auto emit = [&](std::span<const Symbol> cells) {
    return visit(Pattern(support, std::vector<Symbol>(cells.begin(), cells.end())));
  };
  search.visit_from(0, emit);
}

std::vector<Pattern> enumerate_locally_admissible(const SftSpec& sft, const LatticeSet& support,
                                                  const CountLimits& limits) {
  std::vector<Pattern> out;
  for_each_locally_admissible(
      sft, support,
      [&](const Pattern& p) {
        out.push_back(p);
        return true;
      },
      limits);
  return out;
}

}  // namespace shiftdim
