#include "qnr/random.hpp"

#include <cmath>
#include <numbers>

namespace qnr {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(Seed seed, std::uint64_t stream)
    : key_(mix64(seed.value ^ mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next_u64() {
  return mix64(key_ + (++counter_) * kGolden);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

Seed derive_seed(Seed seed, std::uint64_t index) {
  return Seed{mix64(mix64(seed.value + kGolden) ^ (index * 0xD1B54A32D192ED03ULL + 1))};
}

ComplexVector random_unit_vector(std::size_t dim, CounterRng& rng) {
  ComplexVector x(dim);
  double norm = 0.0;
  do {
    for (std::size_t i = 0; i < dim; ++i) x[i] = rng.complex_normal();
    norm = x.norm();
  } while (norm < 1e-300);
  for (std::size_t i = 0; i < dim; ++i) x[i] /= norm;
  return x;
}

}  // namespace qnr
