#include "spinchain/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace spinchain {

LocalOperator local_h_xxx() {
    LocalOperator h;
    h.at(1, 1) = -1;
    h.at(1, 2) = 1;
    h.at(2, 1) = 1;
    h.at(2, 2) = -1;
    return h;
}

LocalOperator local_h_xxz(Complex Q) {
    if (std::abs(Q) < kPoleTolerance) throw std::invalid_argument("local_h_xxz: Q must be nonzero");
    LocalOperator h;
    h.at(1, 1) = -Q;
    h.at(1, 2) = 1;
    h.at(2, 1) = 1;
    h.at(2, 2) = -1.0 / Q;
    return h;
}

Matrix2 boundary_matrix_plus(Complex alpha, Complex beta, Complex mu) {
    return Matrix2{alpha, mu, Complex(0, 0), beta};
}

Matrix2 boundary_matrix_minus(Complex gamma, Complex delta) {
    return Matrix2{gamma, Complex(0, 0), Complex(0, 0), delta};
}

std::pair<Matrix2, Matrix2> xxz_boundaries(Complex alpha, Complex beta, Complex gamma,
                                           Complex delta, Complex s, Complex Q, int L) {
    if (std::abs(Q) < kPoleTolerance) throw std::invalid_argument("xxz_boundaries: Q must be nonzero");
    const Complex es = std::exp(s);
    const Complex qpow = std::pow(Q, L - 1);
    Matrix2 Bhat{alpha, -gamma / es, -alpha * es, gamma};
    Matrix2 B{delta, -beta * qpow, -delta / qpow, beta};
    return {Bhat, B};
}

ModelSpec ModelSpec::periodic(int L) {
    ModelSpec spec;
    spec.family = ModelFamily::XxxPeriodic;
    spec.L = L;
    spec.boundary.kind = BoundarySpec::Kind::Periodic;
    return spec;
}

ModelSpec ModelSpec::open_xxx(int L, Complex alpha, Complex beta, Complex gamma,
                              Complex delta, Complex mu) {
    ModelSpec spec;
    spec.family = ModelFamily::XxxOpen;
    spec.L = L;
    spec.boundary.kind = (mu == Complex(0, 0)) ? BoundarySpec::Kind::XxxDiagonal
                                               : BoundarySpec::Kind::XxxTriangular;
    spec.boundary.alpha = alpha;
    spec.boundary.beta = beta;
    spec.boundary.gamma = gamma;
    spec.boundary.delta = delta;
    spec.boundary.mu = mu;
    return spec;
}

ModelSpec ModelSpec::open_xxz(int L, Complex alpha, Complex beta, Complex gamma,
                              Complex delta, Complex s, Complex Q) {
    ModelSpec spec;
    spec.family = ModelFamily::XxzOpen;
    spec.L = L;
    spec.boundary.kind = BoundarySpec::Kind::Xxz;
    spec.boundary.alpha = alpha;
    spec.boundary.beta = beta;
    spec.boundary.gamma = gamma;
    spec.boundary.delta = delta;
    spec.boundary.s = s;
    spec.Q = Q;
    return spec;
}

void validate(const ModelSpec& spec) {
    if (spec.L < 2) throw std::invalid_argument("model: L must be >= 2");
    if (spec.L > kMaxFullSpaceL) throw std::invalid_argument("model: L exceeds full-space guard");
    switch (spec.family) {
        case ModelFamily::XxxPeriodic:
            if (spec.boundary.kind != BoundarySpec::Kind::Periodic)
                throw std::invalid_argument("model: periodic family needs periodic boundary");
            break;
        case ModelFamily::XxxOpen:
            if (spec.boundary.kind == BoundarySpec::Kind::XxxDiagonal &&
                spec.boundary.mu != Complex(0, 0))
                throw std::invalid_argument("model: diagonal boundary requires mu = 0");
            if (spec.boundary.kind != BoundarySpec::Kind::XxxDiagonal &&
                spec.boundary.kind != BoundarySpec::Kind::XxxTriangular)
                throw std::invalid_argument("model: xxx-open needs a diagonal or triangular boundary");
            break;
        case ModelFamily::XxzOpen:
            if (spec.boundary.kind != BoundarySpec::Kind::Xxz)
                throw std::invalid_argument("model: xxz family needs xxz boundary");
            if (std::abs(spec.Q) < kPoleTolerance)
                throw std::invalid_argument("model: Q must be nonzero");
            break;
    }
}

OperatorMatrix OperatorMatrix::from_triplets(
    std::size_t dim, std::vector<std::tuple<std::size_t, std::size_t, Complex>> trips) {
    std::stable_sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    OperatorMatrix M;
    M.dim = dim;
    M.row_ptr.assign(dim + 1, 0);
    for (std::size_t i = 0; i < trips.size();) {
        auto [r, c, v] = trips[i];
        std::size_t j = i + 1;
        while (j < trips.size() && std::get<0>(trips[j]) == r && std::get<1>(trips[j]) == c) {
            v += std::get<2>(trips[j]);
            ++j;
        }
        if (v != Complex(0, 0)) {
            M.col.push_back(c);
            M.val.push_back(v);
            ++M.row_ptr[r + 1];
        }
        i = j;
    }
    for (std::size_t r = 0; r < dim; ++r) M.row_ptr[r + 1] += M.row_ptr[r];
    return M;
}

Complex OperatorMatrix::entry(std::size_t r, std::size_t c) const {
    for (std::size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i)
        if (col[i] == c) return val[i];
    return Complex(0, 0);
}

double OperatorMatrix::inf_norm() const {
    double best = 0;
    for (std::size_t r = 0; r < dim; ++r) {
        double s = 0;
        for (std::size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i) s += std::abs(val[i]);
        best = std::max(best, s);
    }
    return best;
}

namespace {

using Triplets = std::vector<std::tuple<std::size_t, std::size_t, Complex>>;

void add_two_site(Triplets& trips, const LocalOperator& h, int L, int site_a, int site_b) {
    const std::size_t dim = std::size_t{1} << L;
    const int ba = site_a - 1, bb = site_b - 1;
    for (std::size_t b = 0; b < dim; ++b) {
        const int sa = static_cast<int>((b >> ba) & 1);
        const int sb = static_cast<int>((b >> bb) & 1);
        const int in = 2 * sa + sb;
        for (int out = 0; out < 4; ++out) {
            const Complex v = h.at(out, in);
            if (v == Complex(0, 0)) continue;
            std::uint64_t b2 = b & ~(std::uint64_t{1} << ba) & ~(std::uint64_t{1} << bb);
            b2 |= (static_cast<std::uint64_t>(out >> 1) << ba) |
                  (static_cast<std::uint64_t>(out & 1) << bb);
            trips.emplace_back(b2, b, v);
        }
    }
}

void add_one_site(Triplets& trips, const Matrix2& B, int L, int site) {
    const std::size_t dim = std::size_t{1} << L;
    const int bit = site - 1;
    for (std::size_t b = 0; b < dim; ++b) {
        const int s = static_cast<int>((b >> bit) & 1);
        for (int out = 0; out < 2; ++out) {
            const Complex v = B[2 * out + s];
            if (v == Complex(0, 0)) continue;
            std::uint64_t b2 = (b & ~(std::uint64_t{1} << bit)) |
                               (static_cast<std::uint64_t>(out) << bit);
            trips.emplace_back(b2, b, v);
        }
    }
}

}  // namespace

OperatorMatrix assemble(const ModelSpec& spec) {
    validate(spec);
    const int L = spec.L;
    const std::size_t dim = std::size_t{1} << L;
    Triplets trips;

    const LocalOperator h =
        (spec.family == ModelFamily::XxzOpen) ? local_h_xxz(spec.Q) : local_h_xxx();
    for (int l = 1; l < L; ++l) add_two_site(trips, h, L, l, l + 1);

    switch (spec.family) {
        case ModelFamily::XxxPeriodic:
            add_two_site(trips, h, L, L, 1);
            break;
        case ModelFamily::XxxOpen: {
            const auto& b = spec.boundary;
            add_one_site(trips, boundary_matrix_plus(b.alpha, b.beta, b.mu), L, 1);
            add_one_site(trips, boundary_matrix_minus(b.gamma, b.delta), L, L);
            break;
        }
        case ModelFamily::XxzOpen: {
            const auto& b = spec.boundary;
            auto [Bhat, B] = xxz_boundaries(b.alpha, b.beta, b.gamma, b.delta, b.s, spec.Q, L);
            add_one_site(trips, Bhat, L, 1);
            add_one_site(trips, B, L, L);
            break;
        }
    }
    return OperatorMatrix::from_triplets(dim, std::move(trips));
}

OperatorMatrix assemble_sector(const ModelSpec& spec, int m) {
    validate(spec);
    if (spec.family == ModelFamily::XxzOpen)
        throw std::invalid_argument("assemble_sector: xxz boundaries do not conserve magnetization");
    const int L = spec.L;
    const SectorBasis basis = enumerate_sector(L, m);
    Triplets trips;

    auto add_bond = [&](const SpinConfiguration& c, std::size_t ci, int sa, int sb) {
        // h = P - I on sites (sa, sb): -1 diagonal and hop when spins differ
        const bool da = std::binary_search(c.downs.begin(), c.downs.end(), sa);
        const bool db = std::binary_search(c.downs.begin(), c.downs.end(), sb);
        if (da == db) return;
        trips.emplace_back(ci, ci, Complex(-1, 0));
        SpinConfiguration c2 = c;
        for (int& x : c2.downs) {
            if (x == (da ? sa : sb)) x = da ? sb : sa;
        }
        std::sort(c2.downs.begin(), c2.downs.end());
        trips.emplace_back(index_of(basis, c2), ci, Complex(1, 0));
    };

    // term order mirrors the full-space assembly so consolidation sums
    // floating-point contributions identically (the restriction test is exact)
    for (int l = 1; l < L; ++l)
        for (std::size_t ci = 0; ci < basis.dim(); ++ci) add_bond(basis.configs[ci], ci, l, l + 1);
    if (spec.family == ModelFamily::XxxPeriodic) {
        for (std::size_t ci = 0; ci < basis.dim(); ++ci) add_bond(basis.configs[ci], ci, L, 1);
    } else {
        const auto& b = spec.boundary;
        for (std::size_t ci = 0; ci < basis.dim(); ++ci) {
            const auto& c = basis.configs[ci];
            const bool down1 = !c.downs.empty() && c.downs.front() == 1;
            trips.emplace_back(ci, ci, down1 ? b.beta : b.alpha);
        }
        for (std::size_t ci = 0; ci < basis.dim(); ++ci) {
            const auto& c = basis.configs[ci];
            const bool downL = !c.downs.empty() && c.downs.back() == L;
            trips.emplace_back(ci, ci, downL ? b.delta : b.gamma);
        }
    }
    return OperatorMatrix::from_triplets(basis.dim(), std::move(trips));
}

StateVector matvec(const OperatorMatrix& H, const StateVector& v) {
    if (v.dim != H.dim) throw std::invalid_argument("matvec: dimension mismatch");
    StateVector out(H.dim);
    for (std::size_t r = 0; r < H.dim; ++r) {
        Complex acc(0, 0);
        for (std::size_t i = H.row_ptr[r]; i < H.row_ptr[r + 1]; ++i)
            acc += H.val[i] * v.amplitudes[H.col[i]];
        out.amplitudes[r] = acc;
    }
    return out;
}

double sz_commutator_norm(const OperatorMatrix& H, int L) {
    // [H, Sz]_{rc} = H_{rc} (sz(c) - sz(r)) with sz(b) = L - 2 popcount(b)
    double frob2 = 0;
    for (std::size_t r = 0; r < H.dim; ++r) {
        const int szr = L - 2 * static_cast<int>(std::popcount(static_cast<std::uint64_t>(r)));
        for (std::size_t i = H.row_ptr[r]; i < H.row_ptr[r + 1]; ++i) {
            const int szc =
                L - 2 * static_cast<int>(std::popcount(static_cast<std::uint64_t>(H.col[i])));
            frob2 += std::norm(H.val[i]) * static_cast<double>((szc - szr) * (szc - szr));
        }
    }
    return std::sqrt(frob2);
}

}  // namespace spinchain
