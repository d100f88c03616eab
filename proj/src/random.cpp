#include "exang/random.hpp"

namespace exang {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

double uniform_open(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  while (u <= 0.0) u = unif(rng);
  return u;
}

double standard_normal(Rng& rng) {
  std::normal_distribution<double> norm(0.0, 1.0);
  return norm(rng);
}

}  // namespace exang
