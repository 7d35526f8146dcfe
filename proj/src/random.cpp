#include "oscint/random.hpp"

namespace oscint {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

Rational random_rational(std::mt19937_64& rng, int num_max, int den_max) {
  std::uniform_int_distribution<int> num(-num_max, num_max);
  std::uniform_int_distribution<int> den(1, den_max);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

PhasePoly random_phase(int nx, int nz, int m, std::mt19937_64& rng) {
  HomPoly p(nx, nz, m);
  for (const auto& mi : phase_monomials(m, nx, nz)) p.add_term(mi, random_rational(rng));
  return PhasePoly(std::move(p));
}

}  // namespace oscint
