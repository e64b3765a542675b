#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "shiftdim/io.hpp"

using namespace shiftdim;

namespace {

const std::filesystem::path fixtures = SHIFTDIM_FIXTURES;

template <class F>
ParseError parse_error_of(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", 0, 0, "");
}

}  // namespace

TEST_CASE("parse_sft examples") {
  const SftSpec golden = parse_sft("dimension: 2\nalphabet: 0 1\nforbidden:\n(0,0)=1 (1,0)=1\n");
  CHECK(golden.dimension() == 2);
  CHECK(golden.alphabet().size() == 2);
  REQUIRE(golden.forbidden().size() == 1);
  CHECK(golden.forbidden()[0] == Pattern::from_cells({{{0, 0}, 1}, {{1, 0}, 1}}));
  CHECK(golden.certificate() == FixtureFamily::None);

  const SftSpec full = parse_sft("dimension: 1\nalphabet: 0 1\n");
  CHECK(full.dimension() == 1);
  CHECK(full.forbidden().empty());
  CHECK(full.alphabet() == full_shift(1, 2).alphabet());
  CHECK(full.with_certificate(FixtureFamily::Full) == full_shift(1, 2));

  const ParseError e = parse_error_of([] { parse_sft("dimension: 2\nalphabet: 0 1\nforbidden:\n(0,0)=1 (1,0)=2\n"); });
  CHECK(e.line() == 4);
  CHECK(e.column() == 9);
  CHECK(std::string(e.what()).find("not in the alphabet") != std::string::npos);
}

TEST_CASE("parse_sft errors carry locations") {
  CHECK(parse_error_of([] { parse_sft("dimension: 3\nalphabet: 0 1\n"); }).line() == 1);
  CHECK(parse_error_of([] { parse_sft("alphabet: 0 1\n"); }).line() == 1);
  CHECK(parse_error_of([] { parse_sft("dimension: 2\n"); }).line() == 1);
  CHECK(parse_error_of([] { parse_sft("dimension: 2\nalphabet: 0 0\n"); }).line() == 2);
  CHECK(parse_error_of([] { parse_sft("dimension: 2\nalphabet: 0 1\ncolour: red\n"); }).line() == 3);
  CHECK(parse_error_of([] { parse_sft("dimension: 2\nalphabet: 0 1\nforbidden:\n(0,0)=1 (0,0)=0\n"); }).line() == 4);
  CHECK(parse_error_of([] { parse_sft("dimension: 2\nalphabet: 0 1\nforbidden:\n(0)=1\n"); }).line() == 4);
  CHECK(parse_error_of([] { parse_sft("dimension: 1\nalphabet: 0 1\nforbidden:\n(0,1)=1\n"); }).line() == 4);
  CHECK(parse_error_of([] { parse_sft("dimension: 2\nalphabet: 0 1\nforbidden:\n(x,0)=1\n"); }).line() == 4);
  CHECK(parse_error_of([] { parse_sft("dimension: 2\nalphabet: 0 1\ncertified: magic\n"); }).line() == 3);
  CHECK(parse_error_of([] {
          parse_sft("dimension: 2\nalphabet: 0 1\ncertified: row-lift\nforbidden:\n(0,0)=1 (0,1)=1\n");
        }).line() >= 1);
  CHECK(parse_error_of([] { parse_sft("dimension: 2\ndimension: 2\nalphabet: 0 1\n"); }).line() == 2);
}

TEST_CASE("parse_measure") {
  const MeasureSpec bern = parse_measure("type: bernoulli\nweights: 0.25 0.75\n");
  CHECK(bern.kind() == MeasureSpec::Kind::Bernoulli);
  CHECK(bern.marginal()(1) == 0.75);
  const MeasureSpec chain = parse_measure("type: markov-row\ntransition:\n0.9 0.1\n0.4 0.6\n");
  CHECK(chain.marginal()(0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(parse_error_of([] { parse_measure("type: bernoulli\nweights: 0.5 0.6\n"); }).line() == 1);
  CHECK(parse_error_of([] { parse_measure("type: bernoulli\nweights: 0.5 x\n"); }).line() == 2);
  CHECK(parse_error_of([] { parse_measure("type: markov-row\ntransition:\n0.9 0.1\n0.4\n"); }).line() >= 3);
  CHECK(parse_error_of([] { parse_measure("type: markov-row\ntransition:\n0.9 0.1\n0.4 0.6\nstationary: 0.5 0.5\n"); }).line() == 1);
  CHECK(parse_error_of([] { parse_measure("type: poisson\n"); }).line() == 1);
  CHECK(parse_error_of([] { parse_measure("weights: 1\n"); }).line() == 1);
}

TEST_CASE("parse_rects") {
  const auto rects = read_rects_file(fixtures / "demo.rects");
  REQUIRE(rects.size() == 3);
  CHECK(rects[2] == IntRect(10, 12, 0, 2));
  CHECK(parse_error_of([] { parse_rects("0,1,0,1\n0,1,0\n"); }).line() == 2);
  CHECK(parse_error_of([] { parse_rects("1,0,0,1\n"); }).line() == 1);
}

TEST_CASE("fixture files round-trip through the writers") {
  int checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(fixtures)) {
    const auto& path = entry.path();
    if (path.filename() == "noncanonical.sft") continue;
    const std::string text = read_text_file(path);
    CAPTURE(path.string());
    if (path.extension() == ".sft") {
      CHECK(write_sft(read_sft_file(path)) == text);
      CHECK(parse_sft(write_sft(parse_sft(text))) == parse_sft(text));
      ++checked;
    } else if (path.extension() == ".measure") {
      CHECK(write_measure(read_measure_file(path)) == text);
      ++checked;
    }
  }
  CHECK(checked >= 10);
  CHECK(write_sft(read_sft_file(fixtures / "noncanonical.sft")) == read_text_file(fixtures / "goldenrow.sft"));
}

TEST_CASE("written measures parse back to the same measure") {
  Eigen::MatrixXd p(3, 3);
  p << 0.1, 0.2, 0.7, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5, 0.25, 0.25;
  const MeasureSpec chain = MeasureSpec::markov_row(p);
  const MeasureSpec back = parse_measure(write_measure(chain));
  CHECK(back.transition() == chain.transition());
  CHECK(back.marginal() == chain.marginal());
}

TEST_CASE("missing files raise") {
  CHECK_THROWS_AS(read_sft_file(fixtures / "does-not-exist.sft"), Error);
}
