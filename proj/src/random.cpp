#include "permrd/random.hpp"

#include <utility>

#include "permrd/error.hpp"

namespace permrd {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t task) {
  std::seed_seq sequence{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32)};
  engine_.seed(sequence);
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorKind::invalid_parameter, "empty range");
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % bound;
}

Permutation random_permutation(std::size_t n, RandomStream& rng) {
  if (n == 0) throw Error(ErrorKind::empty_input, "random permutation of size 0");
  std::vector<Permutation::value_type> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<Permutation::value_type>(i + 1);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(values[i], values[rng.below(i + 1)]);
  }
  return Permutation::adopt_unchecked(std::move(values));
}

}  // namespace permrd
