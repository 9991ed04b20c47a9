#pragma once

#include <cstdint>

#include "qnr/linalg.hpp"

namespace qnr {

// Counter-based generator: output i is a splitmix64 finalizer applied to
// key + i * golden, so a (seed, stream, position) triple fully determines every
// draw on every platform. Normals use Box-Muller with no cached state beyond
// the spare deviate.
class CounterRng {
 public:
  explicit CounterRng(Seed seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();
  Complex complex_normal();  // independent N(0,1) real and imaginary parts

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Child seed for sub-task `index` (restart, trial, cell, ...).
Seed derive_seed(Seed seed, std::uint64_t index);

ComplexVector random_unit_vector(std::size_t dim, CounterRng& rng);

}  // namespace qnr
