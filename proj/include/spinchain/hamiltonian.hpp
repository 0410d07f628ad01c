#pragma once

#include <array>
#include <tuple>
#include <utility>
#include <cstdint>
#include <vector>

#include "spinchain/basis.hpp"
#include "spinchain/numeric.hpp"

namespace spinchain {

// Two-site operator on C^2 (x) C^2.  Site basis order (uu, ud, du, dd) with
// the first factor on the left site; |up> = (1,0)^T and sigma^z|up> = +|up>.
struct LocalOperator {
    std::array<Complex, 16> a{};

    Complex& at(int row, int col) { return a[4 * row + col]; }
    const Complex& at(int row, int col) const { return a[4 * row + col]; }
};

// 2x2 single-site operator, basis (up, down), row-major.
using Matrix2 = std::array<Complex, 4>;

// XXX local bond: h = P - I.
LocalOperator local_h_xxx();

// XXZ local bond normalized so that Q = 1 reproduces local_h_xxx exactly:
//   h = (1/2)[sx sx + sy sy + Delta(sz sz - I) - h(sz_j - sz_{j+1})],
//   Delta = (Q + 1/Q)/2,  h = (Q - 1/Q)/2.
LocalOperator local_h_xxz(Complex Q);

Matrix2 boundary_matrix_plus(Complex alpha, Complex beta, Complex mu);  // [[a,mu],[0,b]]
Matrix2 boundary_matrix_minus(Complex gamma, Complex delta);            // diag(g,d)

// XXZ boundary matrices for site 1 and site L.
std::pair<Matrix2, Matrix2> xxz_boundaries(Complex alpha, Complex beta, Complex gamma,
                                           Complex delta, Complex s, Complex Q, int L);

enum class ModelFamily { XxxPeriodic, XxxOpen, XxzOpen };

struct BoundarySpec {
    enum class Kind { Periodic, XxxDiagonal, XxxTriangular, Xxz };
    Kind kind = Kind::Periodic;
    Complex alpha{0, 0}, beta{0, 0}, gamma{0, 0}, delta{0, 0};
    Complex mu{0, 0};  // XXX triangular flip amplitude (down -> up at site 1)
    Complex s{0, 0};   // XXZ twist
};

struct ModelSpec {
    ModelFamily family = ModelFamily::XxxPeriodic;
    int L = 2;
    BoundarySpec boundary;
    Complex Q{1, 0};  // XXZ bulk deformation

    static ModelSpec periodic(int L);
    static ModelSpec open_xxx(int L, Complex alpha, Complex beta, Complex gamma,
                              Complex delta, Complex mu);
    static ModelSpec open_xxz(int L, Complex alpha, Complex beta, Complex gamma,
                              Complex delta, Complex s, Complex Q);
};

void validate(const ModelSpec& spec);

// Sparse operator on the full 2^L space (or a sector), CSR storage.
struct OperatorMatrix {
    std::size_t dim = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col;
    std::vector<Complex> val;

    static OperatorMatrix from_triplets(
        std::size_t dim, std::vector<std::tuple<std::size_t, std::size_t, Complex>> trips);

    Complex entry(std::size_t r, std::size_t c) const;
    double inf_norm() const;  // max absolute row sum
};

OperatorMatrix assemble(const ModelSpec& spec);

// Sector block on SectorBasis(L, m).  Only magnetization-conserving terms
// contribute, so for the triangular family this is the mu-independent
// diagonal block.  XXZ boundaries do not conserve m and are rejected.
OperatorMatrix assemble_sector(const ModelSpec& spec, int m);

StateVector matvec(const OperatorMatrix& H, const StateVector& v);

// Frobenius norm of [H, S^z] with S^z = sum_j sigma^z_j.
double sz_commutator_norm(const OperatorMatrix& H, int L);

}  // namespace spinchain
