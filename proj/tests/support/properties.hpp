#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gnpn/rng.hpp"

namespace gnpn::props {

/// One randomized case; returns a message on failure.
using CaseFn = std::function<std::optional<std::string>(RngStream&)>;

struct Property {
  std::string module;
  std::string name;
  CaseFn check;
};

struct Outcome {
  std::string module;
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

/// Every invariant of every module.
const std::vector<Property>& all_properties();

/// Case k of property p runs on stream (p << 32) | k.
Outcome run_property(const Property& p, std::size_t index, std::uint64_t seed, std::size_t cases);

}  // namespace gnpn::props
