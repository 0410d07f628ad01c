#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinchain/ansatz.hpp"
#include "spinchain/hamiltonian.hpp"
#include "spinchain/numeric.hpp"

namespace spinchain {

// Raw residual of the periodic Bethe equations,
//   component j = prod_{l != j} S(z_l, z_j) - e^{iLk_j}.
std::vector<Complex> residual_periodic(const Momenta& k, int L);

// Raw residual of the open Bethe equations (diagonal and triangular cases;
// mu does not enter),
//   component j = prod_{l != j} S(z_l,z_j) S(1/z_j,z_l)
//                 - e^{2iLk_j} r+(z_j) r-(z_j) / (r+(1/z_j) r-(1/z_j)).
std::vector<Complex> residual_open(const Momenta& k, int L, Complex alpha, Complex beta,
                                   Complex gamma, Complex delta);

struct SolverOptions {
    double tol = 1e-11;          // on the componentwise-scaled residual norm
    int max_iter = 200;
    double fd_step = 1e-7;       // central differences on each real unknown
    double damping_floor = 9.5367431640625e-7;  // 2^-20
    double im_cap = 2.5;         // admissible strip |Im k_j|
    double scale_cap = 3e7;      // residual magnitudes beyond this are unresolvable
    double coincide_tol = 1e-8;  // min |k_i -+ k_j| guard during iteration
};

struct BetheSolution {
    ModelFamily family = ModelFamily::XxxPeriodic;
    int L = 0;
    Momenta k;
    std::vector<int> quantum_numbers;  // seed record; empty for explicit seeds
    double residual_norm = 0;          // scaled norm at the last iterate
    int iterations = 0;
    bool converged = false;
    bool slow_convergence = false;     // converged without a quadratic tail
    std::string filtered_reason;       // nonempty = excluded from verification
    std::vector<double> residual_history;
    Complex energy{0, 0};
};

struct Seed {
    // Either integer quantum numbers (mapped to k_j = 2 pi I_j / L for the
    // periodic chain, pi I_j / L for open ones) or explicit momenta; quantum
    // numbers win when both are set.
    std::vector<int> quantum_numbers;
    Momenta momenta;
};

BetheSolution solve(const ModelSpec& spec, int m, const Seed& seed,
                    const SolverOptions& opts = SolverOptions{});

// Quantum-number sweep plus bound-state and string seeds; solutions are
// deduplicated and singular configurations carry a filter reason.
std::vector<BetheSolution> sweep(const ModelSpec& spec, int m,
                                 const SolverOptions& opts = SolverOptions{});

// Merge solutions equal up to the symmetry of the equations: momentum
// permutations always, individual sign flips for open families.  The
// representative has momenta wrapped to Re k in (-pi, pi], signs chosen so
// Re k >= 0 (open), sorted by (Re, Im).
std::vector<BetheSolution> deduplicate(std::vector<BetheSolution> sols);

Momenta canonical_momenta(const Momenta& k, bool open_family);

}  // namespace spinchain
