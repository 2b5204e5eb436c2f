#include "graphsurf/random_fields.hpp"

namespace graphsurf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

} // namespace

std::uint64_t substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t id : path) h = splitmix64(h ^ (id + 0x632be59bd9b4e019ull));
  return h;
}

std::mt19937_64 make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return std::mt19937_64(substream(seed, path));
}

std::vector<double> random_band_limited_coeffs(const SpectralBasis& basis, std::mt19937_64& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::vector<double>& decay = basis.decay_weights();
  std::vector<double> coeffs(basis.size());
  for (int e = 0; e < basis.size(); ++e) coeffs[e] = gauss(eng) * decay[e];
  return coeffs;
}

} // namespace graphsurf
