#pragma once

#include <vector>

#include "spinchain/basis.hpp"
#include "spinchain/hamiltonian.hpp"
#include "spinchain/numeric.hpp"

namespace spinchain {

inline constexpr std::size_t kMaxDenseDim = 4096;

// Row-major dense complex matrix, the working type of the spectral oracle.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<Complex> a;

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t dim) : n(dim), a(dim * dim, Complex(0, 0)) {}

    Complex& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return a[r * n + c]; }

    Complex trace() const;
    double frobenius_norm() const;
};

DenseMatrix to_dense(const OperatorMatrix& M);

struct SpectrumReport {
    std::vector<Complex> eigenvalues;       // dim values, with multiplicity
    std::vector<bool> converged;            // per eigenvalue
    int qr_sweeps = 0;
    int deflations = 0;
    bool all_converged = true;
};

// Full eigenvalue multiset of a general complex matrix: Householder reduction
// to Hessenberg form followed by shifted QR with deflation (Wilkinson shifts,
// occasional exceptional shifts).
SpectrumReport dense_eigenvalues(DenseMatrix A);

struct EigenPair {
    Complex value;
    std::vector<Complex> vector;
    double backward_error;  // ||A v - lambda v|| / ||A||
};

// Eigenvectors on demand via inverse iteration with the converged shifts.
std::vector<EigenPair> dense_eigenpairs(const DenseMatrix& A);

// ||H psi - E psi|| / (||H||_inf ||psi||)
double eigenpair_residual(const OperatorMatrix& H, const StateVector& psi, Complex E);

struct MatchReport {
    struct Pair {
        Complex predicted;
        Complex exact;
        double distance;
    };
    std::vector<Pair> matched;
    std::vector<Complex> unmatched_predictions;
    double coverage = 0;  // matched exact values / total exact values
};

// Greedy nearest-neighbor matching, each exact eigenvalue consumable once;
// ties break toward the smaller index after sorting exact values by
// (real, imaginary).
MatchReport match_spectra(const std::vector<Complex>& predicted, const SpectrumReport& exact,
                          double tol);

}  // namespace spinchain
