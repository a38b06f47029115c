#pragma once

#include <cstdint>
#include <variant>

namespace locapprox {

struct Exhaustive {};

/// n uniform draws with replacement from a generator seeded with `seed`.
struct RandomSample {
  std::size_t n;
  std::uint64_t seed;
};

using SampleMode = std::variant<Exhaustive, RandomSample>;

}  // namespace locapprox
