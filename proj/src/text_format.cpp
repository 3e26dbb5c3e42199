#include "qsera/text_format.hpp"

#include <charconv>
#include <system_error>

#include "qsera/errors.hpp"

namespace qsera {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw InputError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

long long parse_integer(std::string_view token) {
  long long value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw InputError("not an integer: '" + std::string(token) + "'");
  }
  return value;
}

std::string bitstring(std::uint32_t mask, int width) {
  std::string out(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if (mask >> i & 1) out[static_cast<std::size_t>(width - 1 - i)] = '1';
  }
  return out;
}

std::uint32_t parse_bitstring(std::string_view text) {
  if (text.empty() || text.size() > 32) {
    throw InputError("bitstring must have 1 to 32 characters");
  }
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1') {
      throw InputError("bitstring may contain only 0 and 1: '" + std::string(text) + "'");
    }
    if (c == '1') mask |= std::uint32_t{1} << (text.size() - 1 - i);
  }
  return mask;
}

}  // namespace qsera
