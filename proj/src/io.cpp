#include "shiftdim/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "shiftdim/errors.hpp"

namespace shiftdim {

namespace {

// One physical line with its comment stripped; columns stay valid because
// only a suffix is removed.
struct Line {
  std::size_t number = 0;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!text.empty() || lines.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    lines.push_back({number++, line});
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool blank(std::string_view s) {
  for (char c : s)
    if (!is_space(c)) return false;
  return true;
}

// Whitespace-separated tokens with their 1-based columns.
std::vector<std::pair<std::string_view, std::size_t>> tokens(std::string_view s, std::size_t offset) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back({s.substr(start, i - start), offset + start + 1});
  }
  return out;
}

// "key: value" with the key made of lowercase letters and dashes.
std::optional<std::pair<std::string_view, std::size_t>> key_of(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  const std::size_t start = i;
  while (i < s.size() && (std::islower(static_cast<unsigned char>(s[i])) || s[i] == '-')) ++i;
  if (i == start || i >= s.size() || s[i] != ':') return std::nullopt;
  return std::pair(s.substr(start, i - start), i + 1);
}

std::string trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::optional<long> parse_int(std::string_view s) {
  long v = 0;
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct RawPattern {
  std::size_t line;
  std::string_view text;
};

Pattern parse_pattern(const RawPattern& raw, int dimension, const Alphabet& alphabet,
                      const std::string& source) {
  std::vector<std::pair<Point, Symbol>> cells;
  for (const auto& [tok, col] : tokens(raw.text, 0)) {
    auto fail = [&](const std::string& msg) -> ParseError { return ParseError(source, raw.line, col, msg); };
    const std::size_t close = tok.find(")=");
    if (tok.empty() || tok.front() != '(' || close == std::string_view::npos)
      throw fail("expected a cell '(m,n)=symbol', got '" + std::string(tok) + "'");
    const std::string_view coords = tok.substr(1, close - 1);
    const std::string_view symbol = tok.substr(close + 2);
    Point p;
    const std::size_t comma = coords.find(',');
    if (dimension == 1) {
      if (comma != std::string_view::npos) throw fail("1D cells are written '(m)=symbol'");
      const auto m = parse_int(coords);
      if (!m) throw fail("bad coordinate '" + std::string(coords) + "'");
      p = {static_cast<int>(*m), 0};
    } else {
      if (comma == std::string_view::npos) throw fail("2D cells are written '(m,n)=symbol'");
      const auto m = parse_int(coords.substr(0, comma));
      const auto n = parse_int(coords.substr(comma + 1));
      if (!m || !n) throw fail("bad coordinates '" + std::string(coords) + "'");
      p = {static_cast<int>(*m), static_cast<int>(*n)};
    }
    const auto s = alphabet.find(symbol);
    if (!s) throw fail("symbol '" + std::string(symbol) + "' is not in the alphabet");
    for (const auto& [q, _] : cells)
      if (q == p) throw fail("cell assigned twice in one pattern");
    cells.push_back({p, *s});
  }
  return Pattern::from_cells(std::move(cells));
}

}  // namespace

SftSpec parse_sft(std::string_view text, const std::string& source) {
  std::optional<int> dimension;
  std::optional<Alphabet> alphabet;
  FixtureFamily certificate = FixtureFamily::None;
  std::vector<RawPattern> raw;
  bool in_forbidden = false, seen_forbidden = false, seen_cert = false;
  std::size_t last_line = 1;
  for (const Line& line : split_lines(text)) {
    last_line = line.number;
    if (blank(line.text)) continue;
    const auto key = key_of(line.text);
    if (!key) {
      if (!in_forbidden) throw ParseError(source, line.number, 1, "expected 'key: value'");
      raw.push_back({line.number, line.text});
      continue;
    }
    in_forbidden = false;
    const std::string_view name = key->first;
    const std::string_view value = line.text.substr(key->second);
    const std::size_t value_col = key->second + 1;
    auto fail = [&](const std::string& msg) { return ParseError(source, line.number, value_col, msg); };
    if (name == "dimension") {
      if (dimension) throw fail("duplicate 'dimension'");
      const auto d = parse_int(value);
      if (!d || (*d != 1 && *d != 2)) throw fail("dimension must be 1 or 2");
      dimension = static_cast<int>(*d);
    } else if (name == "alphabet") {
      if (alphabet) throw fail("duplicate 'alphabet'");
      std::vector<std::string> symbols;
      for (const auto& [tok, col] : tokens(value, key->second)) {
        if (tok.find_first_of("()=,") != std::string_view::npos)
          throw ParseError(source, line.number, col, "symbol '" + std::string(tok) + "' contains a reserved character");
        symbols.emplace_back(tok);
      }
      try {
        alphabet.emplace(std::move(symbols));
      } catch (const InvalidArgument& e) {
        throw fail(e.what());
      }
    } else if (name == "certified") {
      if (seen_cert) throw fail("duplicate 'certified'");
      seen_cert = true;
      const auto family = fixture_family_from_string(trim(value));
      if (!family) throw fail("unknown certificate '" + trim(value) + "' (full | row-lift | three-dot)");
      certificate = *family;
    } else if (name == "forbidden") {
      if (seen_forbidden) throw fail("duplicate 'forbidden'");
      if (!blank(value)) throw fail("patterns go on the lines after 'forbidden:'");
      seen_forbidden = in_forbidden = true;
    } else {
      throw ParseError(source, line.number, 1, "unknown key '" + std::string(name) + "'");
    }
  }
  if (!dimension) throw ParseError(source, last_line, 1, "missing 'dimension'");
  if (!alphabet) throw ParseError(source, last_line, 1, "missing 'alphabet'");
  std::vector<Pattern> forbidden;
  for (const RawPattern& r : raw) forbidden.push_back(parse_pattern(r, *dimension, *alphabet, source));
  try {
    return SftSpec(*dimension, *alphabet, std::move(forbidden), certificate);
  } catch (const InvalidArgument& e) {
    throw ParseError(source, last_line, 1, e.what());
  }
}

std::string write_sft(const SftSpec& sft) {
  std::ostringstream out;
  out << "dimension: " << sft.dimension() << "\nalphabet:";
  for (const auto& s : sft.alphabet().tokens()) out << ' ' << s;
  out << '\n';
  if (sft.certificate() != FixtureFamily::None) out << "certified: " << to_string(sft.certificate()) << '\n';
  out << "forbidden:\n";
  for (const Pattern& p : sft.forbidden()) {
    const auto pts = p.support().points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out << ' ';
      out << '(' << pts[i].m;
      if (sft.dimension() == 2) out << ',' << pts[i].n;
      out << ")=" << sft.alphabet().token(p.cells()[i]);
    }
    out << '\n';
  }
  return out.str();
}

MeasureSpec parse_measure(std::string_view text, const std::string& source) {
  std::optional<std::string> type;
  std::optional<std::vector<double>> weights, stationary;
  std::vector<std::vector<double>> rows;
  std::size_t rows_line = 0, last_line = 1, type_line = 1;
  bool in_transition = false, seen_transition = false;
  auto numbers = [&](std::string_view s, std::size_t offset, std::size_t line) {
    std::vector<double> v;
    for (const auto& [tok, col] : tokens(s, offset)) {
      const auto x = parse_double(tok);
      if (!x) throw ParseError(source, line, col, "expected a number, got '" + std::string(tok) + "'");
      v.push_back(*x);
    }
    return v;
  };
  for (const Line& line : split_lines(text)) {
    last_line = line.number;
    if (blank(line.text)) continue;
    const auto key = key_of(line.text);
    if (!key) {
      if (!in_transition) throw ParseError(source, line.number, 1, "expected 'key: value'");
      rows.push_back(numbers(line.text, 0, line.number));
      continue;
    }
    in_transition = false;
    const std::string_view name = key->first;
    const std::string_view value = line.text.substr(key->second);
    auto fail = [&](const std::string& msg) { return ParseError(source, line.number, key->second + 1, msg); };
    if (name == "type") {
      if (type) throw fail("duplicate 'type'");
      type = trim(value);
      type_line = line.number;
      if (*type != "bernoulli" && *type != "markov-row")
        throw fail("type must be 'bernoulli' or 'markov-row'");
    } else if (name == "weights") {
      if (weights) throw fail("duplicate 'weights'");
      weights = numbers(value, key->second, line.number);
    } else if (name == "stationary") {
      if (stationary) throw fail("duplicate 'stationary'");
      stationary = numbers(value, key->second, line.number);
    } else if (name == "transition") {
      if (seen_transition) throw fail("duplicate 'transition'");
      if (!blank(value)) throw fail("matrix rows go on the lines after 'transition:'");
      seen_transition = in_transition = true;
      rows_line = line.number;
    } else {
      throw ParseError(source, line.number, 1, "unknown key '" + std::string(name) + "'");
    }
  }
  if (!type) throw ParseError(source, last_line, 1, "missing 'type'");
  try {
    if (*type == "bernoulli") {
      if (!weights) throw ParseError(source, type_line, 1, "bernoulli measure needs 'weights'");
      if (seen_transition || stationary)
        throw ParseError(source, type_line, 1, "bernoulli measure takes only 'weights'");
      return MeasureSpec::bernoulli(*weights);
    }
    if (!seen_transition || rows.empty()) throw ParseError(source, type_line, 1, "markov-row measure needs 'transition'");
    if (weights) throw ParseError(source, type_line, 1, "markov-row measure does not take 'weights'");
    const long k = static_cast<long>(rows.size());
    Eigen::MatrixXd P(k, k);
    for (long i = 0; i < k; ++i) {
      if (static_cast<long>(rows[static_cast<std::size_t>(i)].size()) != k)
        throw ParseError(source, rows_line + static_cast<std::size_t>(i) + 1, 1, "transition matrix must be square");
      for (long j = 0; j < k; ++j) P(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    std::optional<Eigen::VectorXd> pi;
    if (stationary) pi = Eigen::Map<const Eigen::VectorXd>(stationary->data(), static_cast<long>(stationary->size()));
    return MeasureSpec::markov_row(std::move(P), std::move(pi));
  } catch (const InvalidArgument& e) {
    throw ParseError(source, type_line, 1, e.what());
  }
}

std::string write_measure(const MeasureSpec& measure) {
  std::ostringstream out;
  auto vec = [&](const Eigen::VectorXd& v) {
    for (long i = 0; i < v.size(); ++i) out << ' ' << format_double(v(i));
    out << '\n';
  };
  if (measure.kind() == MeasureSpec::Kind::Bernoulli) {
    out << "type: bernoulli\nweights:";
    vec(measure.marginal());
    return out.str();
  }
  out << "type: markov-row\ntransition:\n";
  const Eigen::MatrixXd& P = measure.transition();
  for (long i = 0; i < P.rows(); ++i) {
    for (long j = 0; j < P.cols(); ++j) out << (j ? " " : "") << format_double(P(i, j));
    out << '\n';
  }
  out << "stationary:";
  vec(measure.marginal());
  return out.str();
}

std::vector<IntRect> parse_rects(std::string_view text, const std::string& source) {
  std::vector<IntRect> out;
  for (const Line& line : split_lines(text)) {
    if (blank(line.text)) continue;
    std::vector<long> v;
    std::size_t start = 0;
    for (int k = 0; k < 4; ++k) {
      const std::size_t comma = line.text.find(',', start);
      const std::string_view field =
          line.text.substr(start, k < 3 ? (comma == std::string_view::npos ? std::string_view::npos : comma - start)
                                        : std::string_view::npos);
      const auto x = parse_int(field);
      if (!x || (k < 3 && comma == std::string_view::npos))
        throw ParseError(source, line.number, start + 1, "expected 'a,b,c,d'");
      v.push_back(*x);
      start = comma + 1;
    }
    try {
      out.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]), static_cast<int>(v[3]));
    } catch (const InvalidArgument& e) {
      throw ParseError(source, line.number, 1, e.what());
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SftSpec read_sft_file(const std::filesystem::path& path) { return parse_sft(read_text_file(path), path.string()); }

MeasureSpec read_measure_file(const std::filesystem::path& path) {
  return parse_measure(read_text_file(path), path.string());
}

std::vector<IntRect> read_rects_file(const std::filesystem::path& path) {
  return parse_rects(read_text_file(path), path.string());
}

}  // namespace shiftdim
