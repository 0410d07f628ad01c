#include <doctest.h>

#include <random>

#include "spinchain/hamiltonian.hpp"
#include "spinchain/oracle.hpp"

using namespace spinchain;

namespace {

constexpr double kEps = 1e-13;

StateVector random_state(std::size_t dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    StateVector v(dim);
    for (auto& a : v.amplitudes) a = Complex(u(rng), u(rng));
    return v;
}

}  // namespace

TEST_CASE("xxx local bond is P - I") {
    const LocalOperator h = local_h_xxx();
    // h (up x up) = 0
    for (int r = 0; r < 4; ++r) CHECK(h.at(r, 0) == Complex(0, 0));
    // h (up x down) = down x up - up x down
    CHECK(h.at(1, 1) == Complex(-1, 0));
    CHECK(h.at(2, 1) == Complex(1, 0));
    Complex tr(0, 0);
    for (int r = 0; r < 4; ++r) tr += h.at(r, r);
    CHECK(tr == Complex(-2, 0));
}

TEST_CASE("xxz local bond reduces to xxx at Q = 1") {
    const LocalOperator hxxx = local_h_xxx();
    const LocalOperator h1 = local_h_xxz(Complex(1, 0));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(std::abs(h1.at(r, c) - hxxx.at(r, c)) == 0);
    CHECK_THROWS_AS(local_h_xxz(Complex(0, 0)), std::invalid_argument);
}

TEST_CASE("xxz local bond annihilates up-up and carries Delta, h") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.3, 2.0);
    for (int t = 0; t < 5; ++t) {
        const Complex Q(u(rng), u(rng) - 1.0);
        const LocalOperator h = local_h_xxz(Q);
        for (int r = 0; r < 4; ++r) CHECK(std::abs(h.at(r, 0)) == 0);
    }
    // Q=2: Delta = 1.25, h = 0.75; diagonal entries -(Delta+h), -(Delta-h)
    const LocalOperator h2 = local_h_xxz(Complex(2, 0));
    CHECK(std::abs(h2.at(1, 1) - Complex(-2.0, 0)) < kEps);   // -(1.25 + 0.75)
    CHECK(std::abs(h2.at(2, 2) - Complex(-0.5, 0)) < kEps);   // -(1.25 - 0.75)
}

TEST_CASE("boundary matrices") {
    const Matrix2 zero = boundary_matrix_plus(0, 0, 0);
    for (const Complex& x : zero) CHECK(x == Complex(0, 0));

    const Matrix2 diag = boundary_matrix_plus(Complex(2, 0), Complex(3, 0), Complex(0, 0));
    CHECK(diag == Matrix2{Complex(2, 0), Complex(0, 0), Complex(0, 0), Complex(3, 0)});

    // B+ |down> = mu |up> + beta |down>
    const Matrix2 tri = boundary_matrix_plus(Complex(0, 0), Complex(3, 0), Complex(1, 0));
    CHECK(tri[1] == Complex(1, 0));

    const Matrix2 minus = boundary_matrix_minus(Complex(1, 0), Complex(1, 0));
    CHECK(minus == Matrix2{Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)});
    const Matrix2 gd = boundary_matrix_minus(Complex(5, 0), Complex(7, 0));
    CHECK(gd[0] == Complex(5, 0));  // acts on |up> by gamma
    CHECK(gd[3] == Complex(7, 0));  // acts on |down> by delta
}

TEST_CASE("xxz boundary matrices are singular by construction") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 10; ++t) {
        const Complex al(u(rng), u(rng)), be(u(rng), u(rng)), ga(u(rng), u(rng)),
            de(u(rng), u(rng)), s(u(rng), u(rng)), Q(u(rng) + 1.6, u(rng));
        const auto [Bhat, B] = xxz_boundaries(al, be, ga, de, s, Q, 5);
        const Complex det_hat = Bhat[0] * Bhat[3] - Bhat[1] * Bhat[2];
        const Complex det = B[0] * B[3] - B[1] * B[2];
        CHECK(std::abs(det_hat) < 1e-12);
        CHECK(std::abs(det) < 1e-12);
    }
    // s = 0, alpha = gamma: rank-1 matrix alpha [[1,-1],[-1,1]]
    const auto [Bhat, B] = xxz_boundaries(Complex(0.7, 0), 0, Complex(0.7, 0), 0, 0, Complex(2, 0), 4);
    CHECK(std::abs(Bhat[0] - Complex(0.7, 0)) < kEps);
    CHECK(std::abs(Bhat[1] + Complex(0.7, 0)) < kEps);
    CHECK(std::abs(Bhat[2] + Complex(0.7, 0)) < kEps);
    CHECK(std::abs(Bhat[3] - Complex(0.7, 0)) < kEps);
    (void)B;
}

TEST_CASE("periodic L=2 assembles to 2(P - I)") {
    const OperatorMatrix H = assemble(ModelSpec::periodic(2));
    const LocalOperator h = local_h_xxx();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(H.entry(r, c) - 2.0 * h.at(r, c)) == 0);
    const SpectrumReport sp = dense_eigenvalues(to_dense(H));
    std::vector<double> re;
    for (Complex e : sp.eigenvalues) re.push_back(e.real());
    std::sort(re.begin(), re.end());
    CHECK(std::abs(re[0] + 4) < 1e-12);
    CHECK(std::abs(re[1]) < 1e-12);
    CHECK(std::abs(re[3]) < 1e-12);
}

TEST_CASE("open L=2 with zero boundaries is the bare bond") {
    const OperatorMatrix H = assemble(ModelSpec::open_xxx(2, 0, 0, 0, 0, 0));
    const SpectrumReport sp = dense_eigenvalues(to_dense(H));
    std::vector<double> re;
    for (Complex e : sp.eigenvalues) re.push_back(e.real());
    std::sort(re.begin(), re.end());
    CHECK(std::abs(re[0] + 2) < 1e-12);
    CHECK(std::abs(re[1]) < 1e-12);
}

TEST_CASE("triangular boundary makes H non-Hermitian") {
    const OperatorMatrix H = assemble(ModelSpec::open_xxx(3, 0.2, 0.4, 0.1, 0.3, Complex(1, 0)));
    double asym = 0;
    for (std::size_t r = 0; r < H.dim; ++r)
        for (std::size_t c = 0; c < H.dim; ++c)
            asym = std::max(asym, std::abs(H.entry(r, c) - std::conj(H.entry(c, r))));
    CHECK(asym > 0.5);
}

TEST_CASE("matvec basics") {
    const OperatorMatrix H = assemble(ModelSpec::periodic(4));
    const StateVector zero(16);
    CHECK(matvec(H, zero).norm() == 0);

    std::mt19937_64 rng(1);
    const StateVector v = random_state(16, rng);
    const OperatorMatrix H2 = assemble(ModelSpec::open_xxx(4, 0.5, -0.2, 0.3, 0.1, 0));
    // (H1 + H2) v = H1 v + H2 v
    const StateVector a = matvec(H, v), b = matvec(H2, v);
    std::vector<std::tuple<std::size_t, std::size_t, Complex>> trips;
    for (std::size_t r = 0; r < 16; ++r) {
        for (std::size_t i = H.row_ptr[r]; i < H.row_ptr[r + 1]; ++i)
            trips.emplace_back(r, H.col[i], H.val[i]);
        for (std::size_t i = H2.row_ptr[r]; i < H2.row_ptr[r + 1]; ++i)
            trips.emplace_back(r, H2.col[i], H2.val[i]);
    }
    const OperatorMatrix sum = OperatorMatrix::from_triplets(16, std::move(trips));
    const StateVector sv = matvec(sum, v);
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(std::abs(sv.amplitudes[i] - a.amplitudes[i] - b.amplitudes[i]) < kEps);

    // ferromagnetic vacuum is annihilated by the periodic chain
    StateVector vac(16);
    vac.amplitudes[0] = 1;
    CHECK(matvec(H, vac).norm() < kEps);
    CHECK_THROWS_AS(matvec(H, StateVector(8)), std::invalid_argument);
}

TEST_CASE("Sz commutator vanishes iff magnetization is conserved") {
    for (int L : {4, 6, 8})
        CHECK(sz_commutator_norm(assemble(ModelSpec::periodic(L)), L) < kEps);
    CHECK(sz_commutator_norm(assemble(ModelSpec::open_xxx(5, 0.3, 0.7, -0.2, 0.4, 0)), 5) < kEps);
    CHECK(sz_commutator_norm(assemble(ModelSpec::open_xxx(5, 0.3, 0.7, -0.2, 0.4, 1)), 5) > 1.0);
}

TEST_CASE("sector restriction of the full operator equals direct sector assembly") {
    for (auto spec : {ModelSpec::periodic(6), ModelSpec::open_xxx(6, 0.4, -0.3, 0.2, 0.9, 0)}) {
        const OperatorMatrix Hfull = assemble(spec);
        for (int m : {0, 1, 2, 3}) {
            const SectorBasis basis = enumerate_sector(6, m);
            const OperatorMatrix Hm = assemble_sector(spec, m);
            for (std::size_t i = 0; i < basis.dim(); ++i) {
                for (std::size_t j = 0; j < basis.dim(); ++j) {
                    const Complex full = Hfull.entry(bit_encoding(basis.configs[i]),
                                                     bit_encoding(basis.configs[j]));
                    CHECK(std::abs(Hm.entry(i, j) - full) == 0);  // exact
                }
            }
        }
    }
}

TEST_CASE("triangular family is block upper triangular in ascending-m ordering") {
    const int L = 5;
    const ModelSpec spec = ModelSpec::open_xxx(L, 0.3, -0.6, 0.2, 0.8, Complex(1.3, 0.4));
    const OperatorMatrix H = assemble(spec);

    // basis permutation: sectors in ascending m, colex inside
    std::vector<std::uint64_t> order;
    std::vector<int> sector_of_pos;
    for (int m = 0; m <= L; ++m) {
        for (const auto& c : enumerate_sector(L, m).configs) {
            order.push_back(bit_encoding(c));
            sector_of_pos.push_back(m);
        }
    }
    // zero pattern: entries with row sector > column sector must vanish,
    // and the mu block sits strictly above the diagonal blocks
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = 0; j < order.size(); ++j) {
            const Complex v = H.entry(order[i], order[j]);
            if (sector_of_pos[i] > sector_of_pos[j]) CHECK(std::abs(v) == 0);
            if (sector_of_pos[i] < sector_of_pos[j] - 1) CHECK(std::abs(v) == 0);
        }
    }
    // diagonal blocks equal the mu = 0 sector blocks
    for (int m = 0; m <= L; ++m) {
        const SectorBasis basis = enumerate_sector(L, m);
        const OperatorMatrix block = assemble_sector(spec, m);
        for (std::size_t i = 0; i < basis.dim(); ++i)
            for (std::size_t j = 0; j < basis.dim(); ++j)
                CHECK(std::abs(block.entry(i, j) -
                               H.entry(bit_encoding(basis.configs[i]),
                                       bit_encoding(basis.configs[j]))) == 0);
    }
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(assemble(ModelSpec::periodic(1)), std::invalid_argument);
    CHECK_THROWS_AS(assemble(ModelSpec::open_xxz(4, 0.1, 0.2, 0.3, 0.4, 0.5, Complex(0, 0))),
                    std::invalid_argument);
    CHECK_THROWS_AS(assemble_sector(ModelSpec::open_xxz(4, 0.1, 0.2, 0.3, 0.4, 0.5, Complex(2, 0)), 1),
                    std::invalid_argument);
    ModelSpec bad = ModelSpec::open_xxx(4, 0, 0, 0, 0, 0);
    bad.boundary.mu = Complex(1, 0);  // diagonal kind with nonzero mu
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
