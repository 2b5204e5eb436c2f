#ifndef GRAPHSURF_RANDOM_FIELDS_HPP
#define GRAPHSURF_RANDOM_FIELDS_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "graphsurf/height_field.hpp"

namespace graphsurf {

/// Derive an independent substream id from a seed and a path of indices.
/// Splitting is deterministic and order-sensitive, so parallel evaluation of
/// candidate k always sees the same stream regardless of schedule.
std::uint64_t substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Deterministic engine for a substream.
std::mt19937_64 make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Standard-normal coefficients scaled by the basis decay weights
/// 1/(1 + |k|^2); the shared candidate family of the estimators.
std::vector<double> random_band_limited_coeffs(const SpectralBasis& basis, std::mt19937_64& eng);

} // namespace graphsurf

#endif
