#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qsera {

// Shortest decimal form that round-trips to the same double (locale-free).
std::string format_double(double value);

// Strict parse of a full token as a double; throws InputError on leftovers.
double parse_double(std::string_view token);

// Strict parse of a full token as an integer.
long long parse_integer(std::string_view token);

// Renders a bitmask as a bitstring of the given width, most significant bit
// first (so mask 0b1001 over width 4 reads "1001").
std::string bitstring(std::uint32_t mask, int width);

// Inverse of bitstring: strict parse of a 0/1 string, leftmost bit highest.
std::uint32_t parse_bitstring(std::string_view text);

}  // namespace qsera
