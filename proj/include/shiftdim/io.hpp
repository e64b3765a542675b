#pragma once

// Text formats.
//
// SFT file:
//   # comment
//   dimension: 2
//   alphabet: 0 1
//   certified: row-lift          (optional: full | row-lift | three-dot)
//   forbidden:
//   (0,0)=1 (1,0)=1              one pattern per line; 1D cells are (m)=s
//
// Measure file:
//   type: bernoulli              | markov-row
//   weights: 0.5 0.5             (bernoulli)
//   transition:                  (markov-row; one row per line)
//   0.6 0.4
//   1 0
//   stationary: 0.714 0.286      (optional)
//
// Rectangle file: one "a,b,c,d" per line for [a,b] x [c,d].

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "shiftdim/lattice.hpp"
#include "shiftdim/measure.hpp"
#include "shiftdim/subshift.hpp"

namespace shiftdim {

SftSpec parse_sft(std::string_view text, const std::string& source = "<sft>");
SftSpec read_sft_file(const std::filesystem::path& path);
/// Canonical text: keys in fixed order, cells sorted, one space separators.
std::string write_sft(const SftSpec& sft);

MeasureSpec parse_measure(std::string_view text, const std::string& source = "<measure>");
MeasureSpec read_measure_file(const std::filesystem::path& path);
std::string write_measure(const MeasureSpec& measure);

std::vector<IntRect> parse_rects(std::string_view text, const std::string& source = "<rects>");
std::vector<IntRect> read_rects_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace shiftdim
