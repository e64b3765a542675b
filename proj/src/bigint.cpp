#include "shiftdim/bigint.hpp"

#include <cmath>

#include "shiftdim/errors.hpp"

namespace shiftdim {

double log2_big(const BigInt& value) {
  if (value <= 0) throw InvalidArgument("log2 of a nonpositive count");
  const std::size_t msb = boost::multiprecision::msb(value);
  // Keep the top 63 bits; the rest is below double precision anyway.
  const std::size_t shift = msb > 62 ? msb - 62 : 0;
  const BigInt top = value >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

BigInt big_pow(unsigned base, std::size_t exponent) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

std::string to_decimal(const BigInt& value) { return value.str(); }

}  // namespace shiftdim
