#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace linklab {

// One author-name occurrence: the paper it appears on and its 1-based
// byline position. Text form is "<pmid>_<position>".
struct InstanceId {
  std::uint32_t pmid = 0;
  std::uint32_t position = 0;

  friend auto operator<=>(const InstanceId&, const InstanceId&) = default;

  std::uint64_t packed() const {
    return (static_cast<std::uint64_t>(pmid) << 32) | position;
  }
};

// Throws ParseError naming "pmid" or "position" (or "instance_id" when the
// overall shape is wrong).
InstanceId parse_instance_id(std::string_view text);

std::string to_string(InstanceId id);

}  // namespace linklab

template <>
struct std::hash<linklab::InstanceId> {
  std::size_t operator()(linklab::InstanceId id) const noexcept {
    std::uint64_t x = id.packed() + 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(x ^ (x >> 31));
  }
};
