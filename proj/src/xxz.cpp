#include "spinchain/xxz.hpp"

#include <cmath>
#include <stdexcept>

#include "spinchain/hamiltonian.hpp"

namespace spinchain {

std::vector<ConstraintTriplet> constraint_defects(const XxzParams& p, double tol) {
    if (std::abs(p.Q) < kPoleTolerance) throw std::invalid_argument("constraint_defects: Q = 0");
    if (p.L < 1) throw std::invalid_argument("constraint_defects: L < 1");
    std::vector<ConstraintTriplet> out;
    out.reserve(4 * p.L);
    const Complex es = std::exp(-p.s);
    for (int n = 0; n < p.L; ++n) {
        const Complex qpow = std::pow(p.Q, p.L - 1 - n);
        for (int eps : {+1, -1}) {
            for (int eps_prime : {+1, -1}) {
                ConstraintTriplet t;
                t.n = n;
                t.eps = eps;
                t.eps_prime = eps_prime;
                Complex c1(1, 0), c2(1, 0);
                if (eps == +1) {
                    if (std::abs(p.gamma) < kPoleTolerance * (1 + std::abs(p.alpha))) {
                        t.error = true;
                        t.error_message = "c_+(alpha,gamma): division by zero (gamma = 0)";
                    } else {
                        c1 = p.alpha / p.gamma;
                    }
                }
                if (eps_prime == +1 && !t.error) {
                    if (std::abs(p.delta) < kPoleTolerance * (1 + std::abs(p.beta))) {
                        t.error = true;
                        t.error_message = "c_+(beta,delta): division by zero (delta = 0)";
                    } else {
                        c2 = p.beta / p.delta;
                    }
                }
                if (!t.error) {
                    t.defect = c1 * c2 - qpow * es;
                    t.satisfied = std::abs(t.defect) <= tol;
                }
                out.push_back(std::move(t));
            }
        }
    }
    return out;
}

Complex engineered_twist(const XxzParams& p, int n, int eps, int eps_prime) {
    if (n < 0 || n >= p.L) throw std::invalid_argument("engineered_twist: n out of range");
    Complex c(1, 0);
    if (eps == +1) c *= checked_div(p.alpha, p.gamma, "engineered_twist: gamma = 0");
    if (eps_prime == +1) c *= checked_div(p.beta, p.delta, "engineered_twist: delta = 0");
    // c = Q^{L-1-n} e^{-s}  =>  s = log(Q^{L-1-n} / c), principal branch
    const Complex qpow = std::pow(p.Q, p.L - 1 - n);
    return std::log(checked_div(qpow, c, "engineered_twist: vanishing constraint factor"));
}

GaugedVector gauged_vector(int site, Complex parameter, Complex Q) {
    if (std::abs(Q) < kPoleTolerance) throw std::invalid_argument("gauged_vector: Q = 0");
    if (site < 1) throw std::invalid_argument("gauged_vector: sites are 1-based");
    GaugedVector v;
    v.site = site;
    v.parameter = parameter;
    v.components = {Complex(1, 0), std::pow(Q, 1 - site) * parameter};
    return v;
}

std::array<Complex, 2> telescoping_vector(Complex Q) {
    if (std::abs(Q) < kPoleTolerance) throw std::invalid_argument("telescoping_vector: Q = 0");
    return {1.0 / Q - Q, Complex(0, 0)};
}

namespace {

using Vec2 = std::array<Complex, 2>;
using Vec4 = std::array<Complex, 4>;

Vec4 kron(const Vec2& a, const Vec2& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

Vec4 apply_local(const LocalOperator& h, const Vec4& v) {
    Vec4 out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r] += h.at(r, c) * v[c];
    return out;
}

Vec4 sub(Vec4 a, const Vec4& b) {
    for (int i = 0; i < 4; ++i) a[i] -= b[i];
    return a;
}

Vec4 scale(Complex f, Vec4 a) {
    for (auto& x : a) x *= f;
    return a;
}

Vec4 add(Vec4 a, const Vec4& b) {
    for (int i = 0; i < 4; ++i) a[i] += b[i];
    return a;
}

double vnorm(const Vec4& a) {
    double s = 0;
    for (const auto& x : a) s += std::norm(x);
    return std::sqrt(s);
}

struct BondVectors {
    Vec2 u_l, u_r, d_l, d_r, t;
};

BondVectors bond_vectors(Complex Q, Complex u, Complex d, int site, GaugeConvention conv) {
    const Complex p = std::pow(Q, 1 - site);
    BondVectors b;
    b.t = {1.0 / Q - Q, Complex(0, 0)};
    b.u_l = {Complex(1, 0), p * u};
    b.d_l = {Complex(1, 0), p * d};
    switch (conv) {
        case GaugeConvention::BaseSameParameter:
            b.u_r = {Complex(1, 0), p * u / Q};
            b.d_r = {Complex(1, 0), p * d / Q};
            break;
        case GaugeConvention::BaseWithChaining:
            b.u_r = {Complex(1, 0), p * u};
            b.d_r = {Complex(1, 0), p * d};
            break;
        case GaugeConvention::GradedBond:
            b.u_r = {Complex(1, 0), p * u / Q};
            b.d_r = {Complex(1, 0), p * d * Q};
            break;
    }
    return b;
}

}  // namespace

std::array<double, 4> telescoping_check(Complex Q, Complex u, Complex d, int site,
                                        GaugeConvention conv) {
    if (std::abs(Q) < kPoleTolerance) throw std::invalid_argument("telescoping_check: Q = 0");
    if (std::abs(u - d) < kPoleTolerance)
        throw std::invalid_argument("telescoping_check: gauge parameters must differ");
    const LocalOperator h = local_h_xxz(Q);
    const BondVectors b = bond_vectors(Q, u, d, site, conv);
    const Complex qi = 1.0 / Q;

    std::array<double, 4> res{};
    // (1) h (u (x) u) = 0
    res[0] = vnorm(apply_local(h, kron(b.u_l, b.u_r)));
    // (2) h (d (x) d) = t (x) d - d (x) t
    res[1] = vnorm(sub(apply_local(h, kron(b.d_l, b.d_r)),
                       sub(kron(b.t, b.d_r), kron(b.d_l, b.t))));
    if (conv == GaugeConvention::GradedBond) {
        // (3) h (d (x) u) = 1/Q u (x) d - Q d (x) u - d (x) t
        res[2] = vnorm(sub(apply_local(h, kron(b.d_l, b.u_r)),
                           sub(sub(scale(qi, kron(b.u_l, b.d_r)), scale(Q, kron(b.d_l, b.u_r))),
                               kron(b.d_l, b.t))));
        // (4) h (u (x) d) = Q d (x) u - 1/Q u (x) d + t (x) d
        res[3] = vnorm(sub(apply_local(h, kron(b.u_l, b.d_r)),
                           add(sub(scale(Q, kron(b.d_l, b.u_r)), scale(qi, kron(b.u_l, b.d_r))),
                               kron(b.t, b.d_r))));
    } else {
        // literal forms: h (d (x) u) = 1/Q u (x) d - d (x) u - d (x) t
        res[2] = vnorm(sub(apply_local(h, kron(b.d_l, b.u_r)),
                           sub(sub(scale(qi, kron(b.u_l, b.d_r)), kron(b.d_l, b.u_r)),
                               kron(b.d_l, b.t))));
        //               h (u (x) d) = Q d (x) u - u (x) d + u (x) t
        res[3] = vnorm(sub(apply_local(h, kron(b.u_l, b.d_r)),
                           add(sub(scale(Q, kron(b.d_l, b.u_r)), kron(b.u_l, b.d_r)),
                               kron(b.u_l, b.t))));
    }
    return res;
}

ConventionReport select_gauge_convention(Complex Q, Complex u, Complex d, int site, double tol) {
    ConventionReport rep;
    for (GaugeConvention conv : {GaugeConvention::GradedBond, GaugeConvention::BaseSameParameter,
                                 GaugeConvention::BaseWithChaining}) {
        const auto res = telescoping_check(Q, u, d, site, conv);
        rep.all.emplace_back(conv, res);
        const bool pass = res[0] <= tol && res[1] <= tol && res[2] <= tol && res[3] <= tol;
        if (pass && !rep.found) {
            rep.found = true;
            rep.selected = conv;
            rep.residuals = res;
        }
    }
    if (!rep.found) rep.residuals = rep.all.front().second;
    return rep;
}

namespace {

double bulk_norm_on_product(int L, Complex Q, const std::vector<Vec2>& site_vec) {
    // H_bulk = sum_i h_{i,i+1}; apply to the product state and take the norm
    const LocalOperator h = local_h_xxz(Q);
    const std::size_t dim = std::size_t{1} << L;
    std::vector<Complex> psi(dim, Complex(1, 0));
    for (std::size_t b = 0; b < dim; ++b)
        for (int i = 0; i < L; ++i) psi[b] *= site_vec[i][(b >> i) & 1];
    std::vector<Complex> out(dim, Complex(0, 0));
    for (int bond = 1; bond < L; ++bond) {
        const int ba = bond - 1, bb = bond;
        for (std::size_t b = 0; b < dim; ++b) {
            const int in = 2 * static_cast<int>((b >> ba) & 1) + static_cast<int>((b >> bb) & 1);
            for (int r = 0; r < 4; ++r) {
                const Complex v = h.at(r, in);
                if (v == Complex(0, 0)) continue;
                std::uint64_t b2 = b & ~(std::uint64_t{1} << ba) & ~(std::uint64_t{1} << bb);
                b2 |= (static_cast<std::uint64_t>(r >> 1) << ba) |
                      (static_cast<std::uint64_t>(r & 1) << bb);
                out[b2] += v * psi[b];
            }
        }
    }
    double s = 0;
    for (const Complex& x : out) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace

double bulk_telescoping_cancellation(int L, Complex Q, Complex u) {
    if (L < 3) throw std::invalid_argument("bulk_telescoping_cancellation: L must be >= 3");
    if (std::abs(Q) < kPoleTolerance) throw std::invalid_argument("Q = 0");
    std::vector<Vec2> vecs(L);
    for (int i = 1; i <= L; ++i) vecs[i - 1] = gauged_vector(i, u, Q).components;
    return bulk_norm_on_product(L, Q, vecs);
}

double bulk_cancellation_ungraded(int L, Complex Q, Complex u) {
    if (L < 3) throw std::invalid_argument("bulk_cancellation_ungraded: L must be >= 3");
    std::vector<Vec2> vecs(L, Vec2{Complex(1, 0), u});
    return bulk_norm_on_product(L, Q, vecs);
}

}  // namespace spinchain
