#include "shiftdim/subshift.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace shiftdim {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InvalidArgument("alphabet must contain at least one symbol");
  if (symbols_.size() > 256) throw InvalidArgument("alphabet larger than 256 symbols");
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw InvalidArgument("alphabet symbol must be nonempty");
    if (!seen.insert(s).second) throw InvalidArgument("duplicate alphabet symbol '" + s + "'");
  }
}

Alphabet Alphabet::of_size(std::size_t k) {
  std::vector<std::string> tokens;
  tokens.reserve(k);
  for (std::size_t i = 0; i < k; ++i) tokens.push_back(std::to_string(i));
  return Alphabet(std::move(tokens));
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == token) return static_cast<Symbol>(i);
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Pattern::Pattern(LatticeSet support, std::vector<Symbol> cells)
    : support_(std::move(support)), cells_(std::move(cells)) {
  if (support_.size() != cells_.size())
    throw InvalidArgument("pattern has " + std::to_string(cells_.size()) + " symbols for " +
                          std::to_string(support_.size()) + " sites");
}

Pattern Pattern::from_cells(std::vector<std::pair<Point, Symbol>> cells) {
  std::sort(cells.begin(), cells.end());
  std::vector<Point> pts;
  std::vector<Symbol> syms;
  pts.reserve(cells.size());
  syms.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0 && cells[i].first == cells[i - 1].first)
      throw InvalidArgument("pattern assigns site (" + std::to_string(cells[i].first.m) + "," +
                            std::to_string(cells[i].first.n) + ") twice");
    pts.push_back(cells[i].first);
    syms.push_back(cells[i].second);
  }
  return Pattern(LatticeSet(std::move(pts)), std::move(syms));
}

Symbol Pattern::at(Point p) const {
  auto idx = support_.index_of(p);
  if (!idx)
    throw InvalidArgument("site (" + std::to_string(p.m) + "," + std::to_string(p.n) +
                          ") is outside the pattern support");
  return cells_[*idx];
}

Pattern Pattern::translated(Point u) const { return Pattern(support_.translated(u), cells_); }

Pattern restrict_pattern(const Pattern& p, const LatticeSet& omega) {
  if (!omega.is_subset_of(p.support()))
    throw InvalidArgument("restriction window is not contained in the pattern support");
  std::vector<Symbol> cells;
  cells.reserve(omega.size());
  for (const Point& q : omega) cells.push_back(p.at(q));
  return Pattern(omega, std::move(cells));
}

// ---------------------------------------------------------------------------

std::string to_string(FixtureFamily family) {
  switch (family) {
    case FixtureFamily::None: return "none";
    case FixtureFamily::Full: return "full";
    case FixtureFamily::RowLift: return "row-lift";
    case FixtureFamily::ThreeDot: return "three-dot";
  }
  return "none";
}

std::optional<FixtureFamily> fixture_family_from_string(std::string_view text) {
  if (text == "none") return FixtureFamily::None;
  if (text == "full") return FixtureFamily::Full;
  if (text == "row-lift") return FixtureFamily::RowLift;
  if (text == "three-dot") return FixtureFamily::ThreeDot;
  return std::nullopt;
}

SftSpec::SftSpec(int dimension, Alphabet alphabet, std::vector<Pattern> forbidden,
                 FixtureFamily certificate)
    : dimension_(dimension),
      alphabet_(std::move(alphabet)),
      forbidden_(std::move(forbidden)),
      certificate_(certificate) {
  if (dimension_ != 1 && dimension_ != 2)
    throw InvalidArgument("dimension must be 1 or 2, got " + std::to_string(dimension_));
  for (std::size_t i = 0; i < forbidden_.size(); ++i) {
    const Pattern& p = forbidden_[i];
    if (p.empty()) throw InvalidArgument("forbidden pattern " + std::to_string(i) + " is empty");
    for (Symbol s : p.cells())
      if (s >= alphabet_.size())
        throw InvalidArgument("forbidden pattern " + std::to_string(i) +
                              " uses a symbol outside the alphabet");
    if (dimension_ == 1)
      for (const Point& q : p.support())
        if (q.n != 0)
          throw InvalidArgument("forbidden pattern " + std::to_string(i) +
                                " of a 1D shift leaves the horizontal axis");
  }
  validate_certificate(*this);
}

SftSpec SftSpec::with_certificate(FixtureFamily family) const {
  return SftSpec(dimension_, alphabet_, forbidden_, family);
}

namespace {

std::vector<Pattern> three_dot_forbidden();

// Forbidden pattern translated so its first site is the origin.
Pattern anchored(const Pattern& p) {
  return p.translated(Point{0, 0} - p.support().points().front());
}

std::vector<Pattern> anchored_sorted(std::span<const Pattern> patterns) {
  std::vector<Pattern> out;
  out.reserve(patterns.size());
  for (const Pattern& p : patterns) out.push_back(anchored(p));
  auto key = [](const Pattern& p) {
    return std::pair(std::vector<Point>(p.support().begin(), p.support().end()),
                     std::vector<Symbol>(p.cells().begin(), p.cells().end()));
  };
  std::sort(out.begin(), out.end(), [&](const Pattern& x, const Pattern& y) { return key(x) < key(y); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool all_horizontal(std::span<const Pattern> patterns) {
  return std::all_of(patterns.begin(), patterns.end(), [](const Pattern& p) {
    const int row = p.support().points().front().n;
    return std::all_of(p.support().begin(), p.support().end(),
                       [row](const Point& q) { return q.n == row; });
  });
}

bool matches_family(const SftSpec& sft, FixtureFamily family) {
  switch (family) {
    case FixtureFamily::None: return true;
    case FixtureFamily::Full: return sft.forbidden().empty();
    case FixtureFamily::RowLift: return sft.dimension() == 2 && all_horizontal(sft.forbidden());
    case FixtureFamily::ThreeDot:
      return sft.dimension() == 2 && sft.alphabet().size() == 2 &&
             anchored_sorted(sft.forbidden()) == anchored_sorted(three_dot_forbidden());
  }
  return false;
}

}  // namespace

void validate_certificate(const SftSpec& sft) {
  if (!matches_family(sft, sft.certificate()))
    throw InvalidArgument("forbidden set does not have the shape of a certified " +
                          to_string(sft.certificate()) + " system");
}

std::optional<FixtureFamily> detect_fixture_family(const SftSpec& sft) {
  for (FixtureFamily f : {FixtureFamily::Full, FixtureFamily::RowLift, FixtureFamily::ThreeDot})
    if (matches_family(sft, f)) return f;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

SftSpec full_shift(int dimension, std::size_t alphabet_size) {
  return SftSpec(dimension, Alphabet::of_size(alphabet_size), {}, FixtureFamily::Full);
}

SftSpec golden_mean_1d() {
  return SftSpec(1, Alphabet::of_size(2), {Pattern::from_cells({{{0, 0}, 1}, {{1, 0}, 1}})});
}

namespace {

// The odd-parity assignments of the L-shaped triple {0, e1, e2}.
std::vector<Pattern> three_dot_forbidden() {
  std::vector<Pattern> forbidden;
  for (Symbol x = 0; x < 2; ++x)
    for (Symbol y = 0; y < 2; ++y)
      for (Symbol z = 0; z < 2; ++z)
        if ((x + y + z) % 2 == 1)
          forbidden.push_back(Pattern::from_cells({{{0, 0}, x}, {{1, 0}, y}, {{0, 1}, z}}));
  return forbidden;
}

}  // namespace

SftSpec three_dot() {
  return SftSpec(2, Alphabet::of_size(2), three_dot_forbidden(), FixtureFamily::ThreeDot);
}

SftSpec row_lift(const SftSpec& base) {
  if (base.dimension() != 1) throw InvalidArgument("row_lift expects a 1D base shift");
  std::vector<Pattern> forbidden(base.forbidden().begin(), base.forbidden().end());
  const FixtureFamily cert = forbidden.empty() ? FixtureFamily::Full : FixtureFamily::RowLift;
  return SftSpec(2, base.alphabet(), std::move(forbidden), cert);
}

SftSpec row_base(const SftSpec& sft) {
  if (sft.dimension() != 2) throw InvalidArgument("row_base expects a 2D shift");
  if (!all_horizontal(sft.forbidden()))
    throw InvalidArgument("row_base: a forbidden pattern spans more than one row");
  std::vector<Pattern> forbidden;
  for (const Pattern& p : sft.forbidden())
    forbidden.push_back(p.translated({0, -p.support().points().front().n}));
  const FixtureFamily cert = forbidden.empty() ? FixtureFamily::Full : FixtureFamily::None;
  return SftSpec(1, sft.alphabet(), std::move(forbidden), cert);
}

}  // namespace shiftdim
