#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "oracles.hpp"
#include "shiftdim/subshift.hpp"

using namespace shiftdim;

namespace {

LatticeSet rect(int a, int b, int c, int d) { return LatticeSet::from_rect(IntRect(a, b, c, d)); }

SftSpec golden_row() { return row_lift(golden_mean_1d()); }

SftSpec random_sft(std::mt19937_64& g) {
  const std::size_t k = static_cast<std::size_t>(oracle::uniform(g, 2, 3));
  std::vector<Pattern> forbidden;
  const int count = oracle::uniform(g, 1, 3);
  for (int f = 0; f < count; ++f) {
    std::vector<std::pair<Point, Symbol>> cells;
    const int size = oracle::uniform(g, 1, 3);
    for (int c = 0; c < size; ++c) {
      const Point p{oracle::uniform(g, 0, 1), oracle::uniform(g, 0, 1)};
      bool dup = false;
      for (const auto& [q, _] : cells) dup = dup || q == p;
      if (!dup) cells.push_back({p, static_cast<Symbol>(oracle::uniform(g, 0, static_cast<int>(k) - 1))});
    }
    forbidden.push_back(Pattern::from_cells(cells));
  }
  return SftSpec(2, Alphabet::of_size(k), forbidden);
}

LatticeSet random_support(std::mt19937_64& g, int max_cells) {
  std::vector<Point> pts;
  const int n = oracle::uniform(g, 1, max_cells);
  for (int i = 0; i < n; ++i) pts.push_back({oracle::uniform(g, 0, 3), oracle::uniform(g, 0, 3)});
  return LatticeSet(pts);
}

std::string word(const Pattern& p) {
  std::string s;
  for (Symbol c : p.cells()) s += static_cast<char>('0' + c);
  return s;
}

}  // namespace

TEST_CASE("alphabet and pattern validation") {
  CHECK_THROWS_AS(Alphabet(std::vector<std::string>{}), InvalidArgument);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), InvalidArgument);
  CHECK(Alphabet({"x", "y"}).find("y") == Symbol{1});
  CHECK_FALSE(Alphabet({"x", "y"}).find("z").has_value());
  CHECK_THROWS_AS(Pattern::from_cells({{{0, 0}, 1}, {{0, 0}, 0}}), InvalidArgument);
  CHECK_THROWS_AS(SftSpec(2, Alphabet::of_size(2), {Pattern::from_cells({{{0, 0}, 2}})}), InvalidArgument);
  CHECK_THROWS_AS(SftSpec(3, Alphabet::of_size(2), {}), InvalidArgument);
  CHECK_THROWS_AS(SftSpec(1, Alphabet::of_size(2), {Pattern::from_cells({{{0, 1}, 0}})}), InvalidArgument);
}

TEST_CASE("restrict_pattern") {
  const Pattern p = Pattern::from_cells({{{0, 0}, 1}, {{1, 0}, 0}, {{0, 1}, 1}});
  CHECK(restrict_pattern(p, p.support()) == p);
  const Pattern single = restrict_pattern(p, LatticeSet({{1, 0}}));
  CHECK(single.size() == 1);
  CHECK(single.at({1, 0}) == 0);
  const Pattern q = Pattern::from_cells({{{5, 5}, 0}});
  CHECK(restrict_pattern(p, LatticeSet()) == restrict_pattern(q, LatticeSet()));
  CHECK(restrict_pattern(p, LatticeSet()).empty());
  CHECK_THROWS_AS(restrict_pattern(p, LatticeSet({{2, 2}})), InvalidArgument);
  CHECK_THROWS_AS(p.at({7, 7}), InvalidArgument);
}

TEST_CASE("count_locally_admissible examples") {
  CHECK(count_locally_admissible(full_shift(2, 2), rect(0, 1, 0, 1)) == 16);
  CHECK(count_locally_admissible(golden_row(), rect(0, 2, 0, 0)) == 5);
  CHECK(count_locally_admissible(three_dot(), rect(0, 1, 0, 1)) == 8);
  CHECK(count_locally_admissible(golden_row(), LatticeSet()) == 1);
}

TEST_CASE("enumerate_locally_admissible examples") {
  const auto singles = enumerate_locally_admissible(full_shift(2, 2), LatticeSet({{0, 0}}));
  REQUIRE(singles.size() == 2);
  CHECK(singles[0].cells()[0] == 0);
  CHECK(singles[1].cells()[0] == 1);

  std::vector<std::string> words;
  for (const Pattern& p : enumerate_locally_admissible(golden_row(), rect(0, 1, 0, 0))) words.push_back(word(p));
  CHECK(words == std::vector<std::string>{"00", "01", "10"});

  const auto empty = enumerate_locally_admissible(three_dot(), LatticeSet());
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].empty());
}

TEST_CASE("enumeration stops when the visitor declines") {
  int seen = 0;
  for_each_locally_admissible(full_shift(2, 2), rect(0, 2, 0, 0), [&](const Pattern&) { return ++seen < 3; });
  CHECK(seen == 3);
}

TEST_CASE("counting methods agree with brute force on random systems") {
  auto g = oracle::rng(21);
  for (int t = 0; t < 250; ++t) {
    const SftSpec sft = random_sft(g);
    const LatticeSet support = random_support(g, 9);
    const std::uint64_t expected = oracle::count(sft, support);
    REQUIRE(count_locally_admissible(sft, support) == expected);
    REQUIRE(count_locally_admissible(sft, support, {}, CountMethod::FrontierDp) == expected);
    REQUIRE(count_locally_admissible(sft, support, {}, CountMethod::Backtrack) == expected);
    const auto patterns = enumerate_locally_admissible(sft, support);
    REQUIRE(patterns.size() == expected);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      REQUIRE(is_locally_admissible(sft, patterns[i]));
      if (i > 0) {
        const auto a = patterns[i - 1].cells(), b = patterns[i].cells();
        REQUIRE(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
      }
    }
  }
}

TEST_CASE("restriction keeps admissibility and adding a cell costs at most the alphabet factor") {
  auto g = oracle::rng(22);
  for (int t = 0; t < 150; ++t) {
    const SftSpec sft = random_sft(g);
    const LatticeSet support = random_support(g, 8);
    const Point extra{oracle::uniform(g, 0, 3), oracle::uniform(g, 0, 3)};
    const LatticeSet bigger = set_union(support, LatticeSet({extra}));
    const BigInt small_count = count_locally_admissible(sft, support);
    const BigInt big_count = count_locally_admissible(sft, bigger);
    REQUIRE(big_count <= small_count * sft.alphabet().size());
    for (const Pattern& p : enumerate_locally_admissible(sft, bigger))
      REQUIRE(is_locally_admissible(sft, restrict_pattern(p, support)));
  }
}

TEST_CASE("log counts are subadditive over disjoint supports") {
  auto g = oracle::rng(23);
  for (int t = 0; t < 150; ++t) {
    const SftSpec sft = random_sft(g);
    const LatticeSet s1 = random_support(g, 6);
    const LatticeSet s2 = set_difference(random_support(g, 6).translated({0, 2}), s1);
    REQUIRE(count_locally_admissible(sft, set_union(s1, s2)) <=
            count_locally_admissible(sft, s1) * count_locally_admissible(sft, s2));
  }
  const LatticeSet top = rect(0, 5, 0, 0), bottom = rect(0, 5, 3, 3);
  for (const SftSpec& sft : {full_shift(2, 3), golden_row()})
    CHECK(count_locally_admissible(sft, set_union(top, bottom)) ==
          count_locally_admissible(sft, top) * count_locally_admissible(sft, bottom));
}

TEST_CASE("row_lift product identity") {
  CHECK(row_lift(full_shift(1, 2)) == full_shift(2, 2));
  CHECK(count_locally_admissible(golden_row(), rect(0, 2, 0, 1)) == 25);
  for (int N = 1; N <= 6; ++N)
    for (int M = 1; M <= 6; ++M) {
      const LatticeSet box = rect(0, N - 1, 0, M - 1);
      BigInt expected = 1;
      for (int r = 0; r < M; ++r) expected *= oracle::golden_words(N);
      REQUIRE(count_locally_admissible(golden_row(), box) == expected);
      if (N * M <= 12) REQUIRE(oracle::count(golden_row(), box) == expected);
    }
  CHECK(row_base(golden_row()) == golden_mean_1d());
  CHECK_THROWS_AS(row_base(three_dot()), InvalidArgument);
}

TEST_CASE("transfer_matrix_entropy_1d") {
  CHECK(transfer_matrix_entropy_1d(full_shift(1, 2)) == doctest::Approx(1.0).epsilon(1e-14));
  // Power iteration on [[1,1],[1,0]].
  double x = 1.0, y = 1.0, lambda = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double nx = x + y, ny = x;
    lambda = nx / x;
    x = nx / nx;
    y = ny / nx;
  }
  CHECK(transfer_matrix_entropy_1d(golden_mean_1d()) == doctest::Approx(std::log2(lambda)).epsilon(1e-12));
  CHECK(std::abs(transfer_matrix_entropy_1d(golden_mean_1d()) - 0.69424) < 1e-5);
  CHECK(transfer_matrix_entropy_1d(full_shift(1, 1)) == 0.0);

  const SftSpec empty(1, Alphabet::of_size(2), {Pattern::from_cells({{{0, 0}, 0}}), Pattern::from_cells({{{0, 0}, 1}})});
  CHECK_THROWS_AS(transfer_matrix_entropy_1d(empty), InvalidArgument);
  // Only finite words: 01 and 10 forbidden together with 00 and 11.
  std::vector<Pattern> all_pairs;
  for (Symbol a = 0; a < 2; ++a)
    for (Symbol b = 0; b < 2; ++b) all_pairs.push_back(Pattern::from_cells({{{0, 0}, a}, {{1, 0}, b}}));
  CHECK_THROWS_AS(transfer_matrix_entropy_1d(SftSpec(1, Alphabet::of_size(2), all_pairs)), InvalidArgument);
  CHECK_THROWS_AS(transfer_matrix_entropy_1d(golden_mean_1d(), 1), InvalidArgument);
  CHECK_THROWS_AS(transfer_matrix_entropy_1d(three_dot()), InvalidArgument);
}

TEST_CASE("transfer-matrix entropy matches the growth of word counts") {
  const auto count_len = [](const SftSpec& sft, int n) {
    return log2_big(count_locally_admissible(sft, LatticeSet::from_rect(IntRect(0, n - 1, 0, 0))));
  };
  const SftSpec golden = golden_mean_1d();
  CHECK(std::abs(transfer_matrix_entropy_1d(golden) - (count_len(golden, 40) - count_len(golden, 39))) < 1e-6);
  // Words avoiding 111: tribonacci growth, root of x^3 = x^2 + x + 1.
  const SftSpec no111(1, Alphabet::of_size(2), {Pattern::from_cells({{{0, 0}, 1}, {{1, 0}, 1}, {{2, 0}, 1}})});
  CHECK(transfer_matrix_entropy_1d(no111) == doctest::Approx(std::log2(1.839286755214161)).epsilon(1e-12));
  CHECK(std::abs(transfer_matrix_entropy_1d(no111) - (count_len(no111, 60) - count_len(no111, 59))) < 1e-6);
}

TEST_CASE("box_entropy_estimate") {
  for (const auto& p : box_entropy_estimate(full_shift(2, 2), 4)) CHECK(p.value == 1.0);
  const auto td = box_entropy_estimate(three_dot(), 4);
  CHECK(td[3].count == 128);
  CHECK(td[3].value == 0.4375);
  const auto gr = box_entropy_estimate(golden_row(), 3);
  CHECK(gr[2].count == 125);
  CHECK(gr[2].value == doctest::Approx(std::log2(125.0) / 9.0));
  CHECK(std::abs(gr[2].value - 0.7740) < 1e-4);
  CHECK_THROWS_AS(box_entropy_estimate(golden_mean_1d(), 3), InvalidArgument);
}

TEST_CASE("three-dot counts on N x N boxes are 2^(2N-1)") {
  for (int N = 1; N <= 4; ++N) REQUIRE(oracle::count(three_dot(), rect(0, N - 1, 0, N - 1)) == (1ull << (2 * N - 1)));
  for (int N = 1; N <= 12; ++N) REQUIRE(count_locally_admissible(three_dot(), rect(0, N - 1, 0, N - 1)) == big_pow(2, 2 * N - 1));
}

TEST_CASE("parallel backtracking is bit-identical for any worker count") {
  const SftSpec hard(2, Alphabet::of_size(2),
                     {Pattern::from_cells({{{0, 0}, 1}, {{1, 0}, 1}}), Pattern::from_cells({{{0, 0}, 1}, {{0, 1}, 1}})});
  const LatticeSet box = rect(0, 5, 0, 4);
  const BigInt dp = count_locally_admissible(hard, box, {}, CountMethod::FrontierDp);
  CHECK(dp == 454385);  // hard squares on a 6 x 5 box
  for (unsigned w : {1u, 2u, 3u, 5u}) {
    CountLimits limits;
    limits.workers = w;
    CHECK(count_locally_admissible(hard, box, limits, CountMethod::Backtrack) == dp);
  }
}

TEST_CASE("resource guards raise instead of truncating") {
  const SftSpec hard(2, Alphabet::of_size(2),
                     {Pattern::from_cells({{{0, 0}, 1}, {{1, 0}, 1}}), Pattern::from_cells({{{0, 0}, 1}, {{0, 1}, 1}})});
  CountLimits tight;
  tight.max_dp_states = 4;
  CHECK_THROWS_AS(count_locally_admissible(hard, rect(0, 9, 0, 9), tight), ResourceError);
  CHECK_THROWS_AS(count_locally_admissible(hard, rect(0, 9, 0, 9), tight, CountMethod::Backtrack), ResourceError);
  CountLimits few_nodes;
  few_nodes.max_backtrack_nodes = 10;
  few_nodes.workers = 1;
  CHECK_THROWS_AS(count_locally_admissible(hard, rect(0, 3, 0, 3), few_nodes, CountMethod::Backtrack), ResourceError);
}

TEST_CASE("certificates are checked against the forbidden set") {
  CHECK(detect_fixture_family(full_shift(2, 3)) == FixtureFamily::Full);
  CHECK(detect_fixture_family(golden_row()) == FixtureFamily::RowLift);
  CHECK(detect_fixture_family(three_dot()) == FixtureFamily::ThreeDot);
  CHECK(golden_row().certificate() == FixtureFamily::RowLift);
  const SftSpec vertical(2, Alphabet::of_size(2), {Pattern::from_cells({{{0, 0}, 1}, {{0, 1}, 1}})});
  CHECK_FALSE(detect_fixture_family(vertical).has_value());
  CHECK_THROWS_AS(vertical.with_certificate(FixtureFamily::RowLift), InvalidArgument);
  CHECK_THROWS_AS(golden_row().with_certificate(FixtureFamily::Full), InvalidArgument);
  // Translated copies of the three-dot constraints still qualify.
  const SftSpec td = three_dot();
  std::vector<Pattern> moved(td.forbidden().begin(), td.forbidden().end());
  for (Pattern& p : moved) p = p.translated({3, -1});
  CHECK_NOTHROW(SftSpec(2, Alphabet::of_size(2), moved, FixtureFamily::ThreeDot));
  CHECK(fixture_family_from_string("row-lift") == FixtureFamily::RowLift);
  CHECK_FALSE(fixture_family_from_string("bogus").has_value());
}

TEST_CASE("default worker count honours SHIFTDIM_WORKERS") {
  setenv("SHIFTDIM_WORKERS", "3", 1);
  CHECK(default_worker_count() == 3);
  setenv("SHIFTDIM_WORKERS", "zero", 1);
  CHECK_THROWS_AS(default_worker_count(), InvalidArgument);
  unsetenv("SHIFTDIM_WORKERS");
  CHECK(default_worker_count() >= 1);
}
