#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinchain/numeric.hpp"

namespace spinchain {

struct XxzParams {
    Complex Q{1, 0};
    Complex alpha{0, 0}, beta{0, 0}, gamma{0, 0}, delta{0, 0}, s{0, 0};
    int L = 2;
};

// One factor of the boundary-parameter constraint product:
//   c_eps(alpha,gamma) c_eps'(beta,delta) - Q^{L-1-n} e^{-s}
// with c_+(z1,z2) = z1/z2 and c_-(z1,z2) = 1.
struct ConstraintTriplet {
    int n = 0;
    int eps = +1;        // +-1
    int eps_prime = +1;  // +-1
    Complex defect{0, 0};
    bool satisfied = false;
    bool error = false;          // c_+ division by zero
    std::string error_message;
};

inline constexpr double kConstraintTolerance = 1e-10;

// All 4L triplets (n in [0, L-1], both sign choices each).
std::vector<ConstraintTriplet> constraint_defects(const XxzParams& p,
                                                  double tol = kConstraintTolerance);

// Parameter s that satisfies the (n, eps, eps') triplet exactly (principal
// logarithm branch); the other parameters are taken from p.
Complex engineered_twist(const XxzParams& p, int n, int eps, int eps_prime);

// Site-dressed basis vector (1, Q^{1-i} u).
struct GaugedVector {
    int site = 1;
    Complex parameter{0, 0};
    std::array<Complex, 2> components{};
};

GaugedVector gauged_vector(int site, Complex parameter, Complex Q);

// Auxiliary telescoping vector |t> = (1/Q - Q, 0).
std::array<Complex, 2> telescoping_vector(Complex Q);

// Candidate dressing rules for the vectors entering the telescoping
// identities at a bond (i, i+1):
//   BaseSameParameter - both sites dressed by (1, Q^{1-i} x) with the same x,
//                       so second components have ratio 1/Q across the bond;
//   BaseWithChaining  - additionally chain the parameter by Q across the
//                       bond, giving ratio 1;
//   GradedBond        - u-vectors as BaseSameParameter (ratio 1/Q), d-vectors
//                       graded the opposite way (ratio Q), with the identity
//                       coefficients Q-graded to match.
enum class GaugeConvention { BaseSameParameter, BaseWithChaining, GradedBond };

// Residual norms of the four local identities (uu, dd, du, ud) evaluated at
// bond (site, site+1) under the given convention.
std::array<double, 4> telescoping_check(Complex Q, Complex u, Complex d, int site,
                                        GaugeConvention convention);

struct ConventionReport {
    GaugeConvention selected = GaugeConvention::GradedBond;
    std::array<double, 4> residuals{};
    bool found = false;
    std::vector<std::pair<GaugeConvention, std::array<double, 4>>> all;
};

// Evaluate every candidate and pick the one satisfying all four identities.
ConventionReport select_gauge_convention(Complex Q, Complex u, Complex d, int site,
                                         double tol = 1e-12);

// || H_bulk applied to the site-dressed product state x_i (1, Q^{1-i} u) ||.
double bulk_telescoping_cancellation(int L, Complex Q, Complex u);

// Same with the dressing deliberately dropped (all sites (1, u)); strictly
// positive for Q != 1, demonstrating the check's sensitivity.
double bulk_cancellation_ungraded(int L, Complex Q, Complex u);

}  // namespace spinchain
