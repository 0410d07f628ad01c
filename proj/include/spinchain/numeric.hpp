#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace spinchain {

using Complex = std::complex<double>;

// Thrown when a scalar coefficient (S, R, T, ...) is evaluated at or too close
// to one of its poles, or when a wavefunction is requested at momenta the
// ansatz excludes.
class SingularMomentumError : public std::domain_error {
public:
    explicit SingularMomentumError(const std::string& what)
        : std::domain_error(what) {}
};

// Relative pole tolerance: a denominator with |den| < tol*(1+|num|) is treated
// as a pole rather than divided through.
inline constexpr double kPoleTolerance = 1e-10;

inline Complex checked_div(Complex num, Complex den, const char* what) {
    if (std::abs(den) < kPoleTolerance * (1.0 + std::abs(num)))
        throw SingularMomentumError(what);
    return num / den;
}

}  // namespace spinchain
