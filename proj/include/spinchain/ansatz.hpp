#pragma once

#include <map>
#include <span>
#include <vector>

#include "spinchain/basis.hpp"
#include "spinchain/hamiltonian.hpp"
#include "spinchain/numeric.hpp"
#include "spinchain/weyl.hpp"

namespace spinchain {

using Momenta = std::vector<Complex>;

// Scalar coefficients.  Arguments are z = e^{ik}; all poles are reported as
// SingularMomentumError via the shared pole tolerance.

// S(z1,z2) = -(2 z2 - z1 z2 - 1)/(2 z1 - z1 z2 - 1)
Complex scattering(Complex z1, Complex z2);

// r+(z) = (z-1)(1 - z + beta - alpha)/(z(1+z)); the diagonal-section sign.
Complex r_plus(Complex z, Complex alpha, Complex beta);

// Same up to a global minus; the sign used inside the transmission factor.
Complex r_plus_triangular(Complex z, Complex alpha, Complex beta);

// R+(z) = -z^2 (1 - 1/z + beta - alpha)/(1 - z + beta - alpha) = r+(1/z)/r+(z)
Complex reflection(Complex z, Complex alpha, Complex beta);

// r-(z) = (z-1)/(z+1) (1 - z + delta - gamma)
Complex r_minus(Complex z, Complex gamma, Complex delta);

// a(z1,z2) = i (2 z2 - z1 z2 - 1)/(z1 z2 - 1)
Complex a_coeff(Complex z1, Complex z2);

// T^(m)(z_1..z_m) = mu / (r+^tri(z_m) prod_{j<m} a(z_m,z_j) a(z_j,1/z_m))
Complex transmission(std::span<const Complex> z, Complex alpha, Complex beta, Complex mu);

Complex lambda_weight(Complex z);  // z + 1/z - 2
Complex energy_periodic(std::span<const Complex> k);
Complex energy_open(std::span<const Complex> k, Complex alpha, Complex gamma);

// Bethe amplitudes.  A^{(n,0)} lives on the whole group (S_n for the periodic
// chain, WB_n for open chains) and is generated from A_id = 1 along canonical
// words; tail levels m >= 1 live on coset representatives of G_m = WB_n/WB_m
// and follow by one transmission factor per level.
struct AmplitudeTable {
    int n = 0;
    std::vector<std::pair<SignedPermutation, Complex>> top;  // A^{(n,0)}
    std::vector<std::map<CosetKey, Complex>> tails;          // index m-1 -> A^{(n,m)}
};

AmplitudeTable build_amplitudes(int n, const Momenta& k, const BoundarySpec& boundary);

// Amplitude along an explicit generator word (used for path-independence
// checks); word codes as in weyl.hpp.
Complex amplitude_along_word(const Word& word, int n, const Momenta& k,
                             const BoundarySpec& boundary);

// Assembled Bethe state in the full 2^L space together with the predicted
// energy.  Momenta need not satisfy the Bethe equations (off-shell states are
// allowed for diagnostics); genuinely singular momenta throw.
struct BuiltState {
    StateVector state;
    Complex energy;
};

BuiltState build_state(const ModelSpec& spec, const Momenta& k);

}  // namespace spinchain
