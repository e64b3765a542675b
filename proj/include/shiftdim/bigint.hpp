#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace shiftdim {

using BigInt = boost::multiprecision::cpp_int;

/// log2 of a positive big integer, relative error ~1e-16.
double log2_big(const BigInt& value);

/// base^exponent exactly.
BigInt big_pow(unsigned base, std::size_t exponent);

std::string to_decimal(const BigInt& value);

}  // namespace shiftdim
