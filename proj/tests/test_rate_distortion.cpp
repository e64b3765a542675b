#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "shiftdim/info.hpp"
#include "shiftdim/rate_distortion.hpp"

using namespace shiftdim;

namespace {

const double log2_phi = std::log2((1 + std::sqrt(5.0)) / 2);

RdProblem binary_hamming(double p) { return hamming_problem(FiniteDistribution({p, 1 - p})); }

}  // namespace

TEST_CASE("hamming_problem") {
  const RdProblem p = hamming_problem(FiniteDistribution({0.2, 0.3, 0.5}));
  CHECK(p.reproduction_size == 3);
  CHECK(p.distortion == std::vector<double>{0, 1, 1, 1, 0, 1, 1, 1, 0});
}

TEST_CASE("Blahut-Arimoto reproduces 1 - H(D) for the binary uniform source") {
  for (double D : {0.05, 0.1, 0.25}) {
    const RdPoint pt = rd_point_at_distortion(binary_hamming(0.5), D);
    CHECK(pt.distortion == doctest::Approx(D).epsilon(1e-8));
    CHECK(std::abs(pt.rate - (1 - oracle::binary_entropy(D))) <= 1e-4);
    CHECK(pt.rate >= 0.0);
  }
  CHECK(std::abs(rd_point_at_distortion(binary_hamming(0.5), 0.1).rate - 0.531004) < 1e-4);
  // Biased source: R(D) = H(p) - H(D) for D <= p.
  const RdPoint biased = rd_point_at_distortion(binary_hamming(0.3), 0.1);
  CHECK(std::abs(biased.rate - (oracle::binary_entropy(0.3) - oracle::binary_entropy(0.1))) <= 1e-4);
}

TEST_CASE("Blahut-Arimoto end points") {
  const RdProblem three = hamming_problem(FiniteDistribution({0.2, 0.3, 0.5}));
  const RdPoint exact = blahut_arimoto(three, 40.0);
  CHECK(exact.distortion < 1e-12);
  CHECK(exact.rate == doctest::Approx(oracle::entropy_bits({0.2, 0.3, 0.5})).epsilon(1e-8));
  CHECK(exact.gap < 1e-10);
  // A constant reproduction already meets D = 1 - max p.
  CHECK(rd_point_at_distortion(three, 0.5).rate < 1e-6);
  CHECK(rd_point_at_distortion(three, 0.7).rate < 1e-6);
  // Zero-probability source outcomes are harmless.
  const RdPoint sparse = rd_point_at_distortion(hamming_problem(FiniteDistribution({0.5, 0.0, 0.5})), 0.1);
  CHECK(std::abs(sparse.rate - (1 - oracle::binary_entropy(0.1))) <= 1e-4);
}

TEST_CASE("Blahut-Arimoto errors") {
  CHECK_THROWS_AS(blahut_arimoto(binary_hamming(0.2), 1.0, 1e-14, 1), NonConvergence);
  try {
    blahut_arimoto(binary_hamming(0.3), 2.0, 1e-15, 2);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.gap() > 0.0);
  }
  CHECK_THROWS_AS(blahut_arimoto(binary_hamming(0.5), -1.0), InvalidArgument);
  CHECK_THROWS_AS(blahut_arimoto(binary_hamming(0.5), 1.0, 0.0), InvalidArgument);
  RdProblem bad = binary_hamming(0.5);
  bad.distortion.pop_back();
  CHECK_THROWS_AS(blahut_arimoto(bad, 1.0), InvalidArgument);
  bad = binary_hamming(0.5);
  bad.distortion[1] = -1.0;
  CHECK_THROWS_AS(blahut_arimoto(bad, 1.0), InvalidArgument);
}

TEST_CASE("the rate-distortion curve is convex and nonincreasing across a slope sweep") {
  const RdProblem problems[] = {binary_hamming(0.5), hamming_problem(FiniteDistribution({0.2, 0.3, 0.5})),
                                RdProblem{FiniteDistribution({0.6, 0.4}), 3, {0, 1, 0.4, 1, 0, 0.3}}};
  for (const RdProblem& problem : problems) {
    std::vector<std::pair<double, double>> curve;
    for (int i = 0; i < 50; ++i) {
      const RdPoint pt = blahut_arimoto(problem, 0.1 * std::pow(150.0, i / 49.0));
      curve.push_back({pt.distortion, pt.rate});
    }
    std::sort(curve.begin(), curve.end());
    for (std::size_t i = 1; i < curve.size(); ++i) REQUIRE(curve[i].second <= curve[i - 1].second + 1e-9);
    for (std::size_t i = 2; i < curve.size(); ++i) {
      const double dx1 = curve[i - 1].first - curve[i - 2].first, dx2 = curve[i].first - curve[i - 1].first;
      if (dx1 < 1e-9 || dx2 < 1e-9) continue;
      const double s1 = (curve[i - 1].second - curve[i - 2].second) / dx1;
      const double s2 = (curve[i].second - curve[i - 1].second) / dx2;
      REQUIRE(s2 >= s1 - 1e-6);
    }
  }
}

TEST_CASE("rd_upper_bound") {
  const MeasureSpec fair = MeasureSpec::bernoulli({0.5, 0.5});
  CHECK(rd_upper_bound(fair, 2.0, 3, 10) == doctest::Approx(7.5).epsilon(1e-12));
  double previous = std::numeric_limits<double>::infinity();
  for (int N = 1; N <= 200; ++N) {
    const double v = rd_upper_bound(fair, 2.0, 3, N);
    REQUIRE(v < previous);
    REQUIRE(v > 5.0);
    previous = v;
  }
  CHECK(previous == doctest::Approx(5.0 + 25.0 / 200).epsilon(1e-12));
  CHECK(rd_upper_rate(fair, 3) == doctest::Approx(5.0));
  CHECK(rd_upper_bound(MeasureSpec::bernoulli({1.0}), 2.0, 3, 10) == 0.0);
  const MeasureSpec parry = parry_measure(golden_mean_1d());
  CHECK(rd_upper_rate(parry, 4) == doctest::Approx(7 * log2_phi).epsilon(1e-12));
  CHECK(rd_upper_bound(parry, 2.0, 4, 400) >= rd_upper_rate(parry, 4));
}

TEST_CASE("rd_lower_bound examples") {
  const MeasureSpec fair = MeasureSpec::bernoulli({0.5, 0.5});
  CHECK(rd_lower_bound(fair, 2.0, 0.01 / 8, 0.01) == doctest::Approx(6.849207).epsilon(1e-6));
  CHECK(rd_lower_bound(fair, 2.0, 0.25 / 2, 0.25) == doctest::Approx(1.438722).epsilon(1e-6));
  const RdLowerBound at_edge = rd_lower_bound(fair, 2.0, Scale::from_epsilon(0.01 / 8), 0.01);
  CHECK(at_edge.M == 3);
  // Just above the bracket edge the index drops.
  CHECK(rd_lower_bound(fair, 2.0, Scale::from_epsilon(0.01 / 8 * 1.001), 0.01).M == 2);
  CHECK(rd_lower_bound(MeasureSpec::bernoulli({1.0}), 2.0, 0.001, 0.1) == 0.0);
  const RdLowerBound clamped = rd_lower_bound(MeasureSpec::bernoulli({0.9, 0.1}), 2.0, Scale::from_epsilon(0.2), 0.4);
  CHECK(clamped.raw < 0.0);
  CHECK(clamped.value == 0.0);
  CHECK_THROWS_AS(rd_lower_bound(fair, 2.0, 0.3, 0.2), InvalidArgument);
  CHECK_THROWS_AS(rd_lower_bound(fair, 2.0, 0.1, 0.5), InvalidArgument);
}

TEST_CASE("rd_lower_bound never exceeds rd_upper_bound at matched scales") {
  const MeasureSpec measures[] = {MeasureSpec::bernoulli({0.5, 0.5}), parry_measure(golden_mean_1d()),
                                  MeasureSpec::bernoulli({0.2, 0.3, 0.5})};
  for (const MeasureSpec& mu : measures)
    for (double delta : {0.01, 0.05, 0.1, 0.25, 0.4})
      for (int k = 1; k <= 40; ++k) {
        const double L = 0.37 * k - std::log2(delta) + 0.01;
        const Scale eps = Scale::from_log2_inverse(L);
        const double lower = rd_lower_bound(mu, 2.0, eps, delta).value;
        const int M = resolution_index(2.0, eps).M;
        REQUIRE(lower <= rd_upper_rate(mu, M) + 1e-12);
        if (M <= 4) REQUIRE(lower <= rd_upper_bound(mu, 2.0, M, 6) + 1e-12);
      }
}

TEST_CASE("rdim bounds") {
  const MeasureSpec fair = MeasureSpec::bernoulli({0.5, 0.5});
  const auto schedule = default_rdim_schedule(2.0);
  REQUIRE(schedule.size() == 12);
  const RdimBounds b = rdim_bounds(fair, 2.0, schedule);
  CHECK(std::abs(b.lower.value - 2.0) < 0.05);
  CHECK(std::abs(b.upper.value - 2.0) < 0.05);
  CHECK(b.upper.extrapolation.model == "inv(log2(1/eps))");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    REQUIRE(b.lower.schedule[i].value <= 2.0 + 1e-12);
    REQUIRE(b.upper.schedule[i].value >= 2.0 - 1e-12);
  }
  const RdimBounds b4 = rdim_bounds(fair, 4.0, default_rdim_schedule(4.0));
  CHECK(std::abs(b4.lower.value - 1.0) < 0.05);
  CHECK(std::abs(b4.upper.value - 1.0) < 0.05);
  const RdimBounds trivial = rdim_bounds(MeasureSpec::bernoulli({1.0}), 2.0, schedule);
  CHECK(trivial.lower.value == 0.0);
  CHECK(trivial.upper.value == 0.0);
  const RdimBounds golden = rdim_bounds(parry_measure(golden_mean_1d()), 2.0, schedule);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    REQUIRE(golden.lower.schedule[i].value <= 2 * log2_phi + 1e-12);
    REQUIRE(golden.upper.schedule[i].value >= 2 * log2_phi - 1e-12);
  }
  CHECK(std::abs(golden.lower.value - 2 * log2_phi) < 0.05);
  CHECK(std::abs(golden.upper.value - 2 * log2_phi) < 0.05);
  const std::vector<RdimSchedulePoint> one{schedule[0]};
  CHECK_THROWS_AS(rdim_bounds(fair, 2.0, one), InvalidArgument);
}
