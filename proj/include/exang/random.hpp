#pragma once

#include <cstdint>
#include <random>

namespace exang {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream) pairs; used to give each chain or
// simulation cell its own generator.
Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0);

// Uniform draw on the open interval (0, 1).
double uniform_open(Rng& rng);

double standard_normal(Rng& rng);

}  // namespace exang
