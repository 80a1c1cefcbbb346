#include "linklab/instance_id.hpp"

#include <charconv>

#include "linklab/error.hpp"

namespace linklab {
namespace {

std::uint32_t parse_component(std::string_view digits, const char* field) {
  if (digits.empty()) throw ParseError(field, "empty component");
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw ParseError(field, "non-digit in '" + std::string(digits) + "'");
    }
  }
  std::uint32_t value = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ParseError(field, "out of range '" + std::string(digits) + "'");
  }
  if (value == 0) throw ParseError(field, "must be >= 1");
  return value;
}

}  // namespace

InstanceId parse_instance_id(std::string_view text) {
  auto sep = text.find('_');
  if (sep == std::string_view::npos || text.find('_', sep + 1) != std::string_view::npos) {
    throw ParseError("instance_id", "expected <pmid>_<position>, got '" +
                                        std::string(text) + "'");
  }
  InstanceId id;
  id.pmid = parse_component(text.substr(0, sep), "pmid");
  id.position = parse_component(text.substr(sep + 1), "position");
  return id;
}

std::string to_string(InstanceId id) {
  return std::to_string(id.pmid) + "_" + std::to_string(id.position);
}

}  // namespace linklab
