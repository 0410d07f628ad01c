#pragma once

#include <cstdint>
#include <vector>

#include "spinchain/numeric.hpp"

namespace spinchain {

// Guards for desk-scale computations.
inline constexpr int kMaxFullSpaceL = 20;
inline constexpr int kMaxSectorL = 24;

std::uint64_t binomial(int n, int k);

// Positions of the down spins in a length-L chain, 1-based and strictly
// increasing.  The all-up reference state has an empty position list.
struct SpinConfiguration {
    int L = 0;
    std::vector<int> downs;
};

bool valid_configuration(const SpinConfiguration& c);

// Full-space bit encoding: site x maps to bit (x-1), down spin = bit set.
std::uint64_t bit_encoding(const SpinConfiguration& c);

// All configurations with m down spins on L sites, in colexicographic order
// (so ranks have a closed form and listings are stable across runs).
struct SectorBasis {
    int L = 0;
    int m = 0;
    std::vector<SpinConfiguration> configs;

    std::size_t dim() const { return configs.size(); }
};

SectorBasis enumerate_sector(int L, int m);

std::size_t index_of(const SectorBasis& basis, const SpinConfiguration& c);
const SpinConfiguration& config_of(const SectorBasis& basis, std::size_t i);

struct StateVector {
    std::size_t dim = 0;
    std::vector<Complex> amplitudes;

    StateVector() = default;
    explicit StateVector(std::size_t d) : dim(d), amplitudes(d, Complex(0, 0)) {}

    double norm() const;
};

// Lift a sector vector into the 2^L-dimensional full space.
StateVector embed_sector(const SectorBasis& basis, const StateVector& v);

}  // namespace spinchain
