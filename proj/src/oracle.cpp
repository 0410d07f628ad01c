#include "spinchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace spinchain {

Complex DenseMatrix::trace() const {
    Complex t(0, 0);
    for (std::size_t i = 0; i < n; ++i) t += at(i, i);
    return t;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0;
    for (const Complex& x : a) s += std::norm(x);
    return std::sqrt(s);
}

DenseMatrix to_dense(const OperatorMatrix& M) {
    if (M.dim > kMaxDenseDim) throw std::invalid_argument("to_dense: dimension guard exceeded");
    DenseMatrix A(M.dim);
    for (std::size_t r = 0; r < M.dim; ++r)
        for (std::size_t i = M.row_ptr[r]; i < M.row_ptr[r + 1]; ++i)
            A.at(r, M.col[i]) += M.val[i];
    return A;
}

namespace {

// In-place Householder reduction to upper Hessenberg form (similarity).
void hessenberg_reduce(DenseMatrix& A) {
    const std::size_t n = A.n;
    if (n < 3) return;
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::norm(A.at(i, k));
        scale = std::sqrt(scale);
        if (scale < 1e-300) continue;
        Complex x0 = A.at(k + 1, k);
        // alpha = -e^{i arg(x0)} * scale, v = x - alpha e1
        const double ax0 = std::abs(x0);
        const Complex phase = (ax0 > 0) ? x0 / ax0 : Complex(1, 0);
        const Complex alpha = -phase * scale;
        double vnorm2 = 0;
        for (std::size_t i = k + 1; i < n; ++i) v[i] = A.at(i, k);
        v[k + 1] -= alpha;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 < 1e-300) continue;

        // A <- (I - 2 v v*/|v|^2) A; row-major passes with a dot buffer
        std::vector<Complex> dots(n, Complex(0, 0));
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex vi = std::conj(v[i]);
            for (std::size_t c = k; c < n; ++c) dots[c] += vi * A.at(i, c);
        }
        const double f2 = 2.0 / vnorm2;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex fvi = f2 * v[i];
            for (std::size_t c = k; c < n; ++c) A.at(i, c) -= fvi * dots[c];
        }
        // A <- A (I - 2 v v*/|v|^2) (all rows, columns k+1..n-1)
        for (std::size_t r = 0; r < n; ++r) {
            Complex dot(0, 0);
            for (std::size_t i = k + 1; i < n; ++i) dot += A.at(r, i) * v[i];
            dot *= 2.0 / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) A.at(r, i) -= dot * std::conj(v[i]);
        }
        A.at(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) A.at(i, k) = 0;
    }
}

struct Givens {
    Complex c;  // real in exact arithmetic of our construction
    Complex s;
};

// rotation with G [f; g] = [r; 0]
Givens make_givens(Complex f, Complex g) {
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0) return {Complex(1, 0), Complex(0, 0)};
    if (af == 0) return {Complex(0, 0), Complex(1, 0)};
    const double r = std::hypot(af, ag);
    const Complex fs = f / af;
    return {Complex(af / r, 0), fs * std::conj(g) / r};
}

// Wilkinson shift from the trailing 2x2 of the active block.
Complex wilkinson_shift(const DenseMatrix& H, std::size_t hi) {
    const Complex a = H.at(hi - 1, hi - 1), b = H.at(hi - 1, hi);
    const Complex c = H.at(hi, hi - 1), d = H.at(hi, hi);
    const Complex tr = a + d;
    const Complex det = a * d - b * c;
    Complex disc = std::sqrt(tr * tr - 4.0 * det);
    Complex l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

constexpr double kDeflateEps = 1e-14;

}  // namespace

SpectrumReport dense_eigenvalues(DenseMatrix A) {
    const std::size_t n = A.n;
    if (n > kMaxDenseDim) throw std::invalid_argument("dense_eigenvalues: dimension guard exceeded");
    SpectrumReport rep;
    rep.eigenvalues.assign(n, Complex(0, 0));
    rep.converged.assign(n, true);
    if (n == 0) return rep;
    if (n == 1) {
        rep.eigenvalues[0] = A.at(0, 0);
        return rep;
    }

    hessenberg_reduce(A);
    const double anorm = std::max(A.frobenius_norm(), 1e-300);

    std::size_t hi = n - 1;
    int block_iters = 0;
    const int per_block_cap = 60;
    while (true) {
        // deflate negligible subdiagonals
        for (std::size_t i = hi; i >= 1; --i) {
            const double s = std::abs(A.at(i - 1, i - 1)) + std::abs(A.at(i, i));
            if (std::abs(A.at(i, i - 1)) <= kDeflateEps * std::max(s, anorm * 1e-3)) {
                A.at(i, i - 1) = 0;
            }
            if (i == 1) break;
        }
        while (hi > 0 && A.at(hi, hi - 1) == Complex(0, 0)) {
            rep.eigenvalues[hi] = A.at(hi, hi);
            ++rep.deflations;
            --hi;
            block_iters = 0;
        }
        if (hi == 0) {
            rep.eigenvalues[0] = A.at(0, 0);
            break;
        }
        std::size_t lo = hi;
        while (lo > 0 && A.at(lo, lo - 1) != Complex(0, 0)) --lo;

        if (block_iters >= per_block_cap) {
            // give up on this block: record its diagonal, flag unconverged
            for (std::size_t i = lo; i <= hi; ++i) {
                rep.eigenvalues[i] = A.at(i, i);
                rep.converged[i] = false;
                rep.all_converged = false;
            }
            if (lo == 0) break;
            hi = lo - 1;
            block_iters = 0;
            continue;
        }

        // shifted QR sweep on rows/cols lo..hi via Givens rotations
        Complex shift = wilkinson_shift(A, hi);
        if (block_iters > 0 && block_iters % 12 == 0) {
            // exceptional shift to break symmetry-induced cycles
            shift = A.at(hi, hi) +
                    Complex(1.1, 0.37) * std::abs(A.at(hi, hi - 1));
        }
        ++rep.qr_sweeps;
        ++block_iters;

        std::vector<Givens> rots(hi - lo);
        for (std::size_t i = lo; i <= hi; ++i) A.at(i, i) -= shift;
        // QR: eliminate subdiagonal
        for (std::size_t i = lo; i < hi; ++i) {
            Givens g = make_givens(A.at(i, i), A.at(i + 1, i));
            rots[i - lo] = g;
            Complex* ri = &A.at(i, 0);
            Complex* ri1 = &A.at(i + 1, 0);
            const Complex gs_conj = std::conj(g.s);
            for (std::size_t c = i; c <= hi; ++c) {
                const Complex x = ri[c], y = ri1[c];
                ri[c] = g.c * x + g.s * y;
                ri1[c] = -gs_conj * x + g.c * y;
            }
        }
        // RQ: apply adjoint rotations on the right, walking each row once
        // (rotation i touches row r only for r <= i + 1)
        for (std::size_t r = lo; r <= hi; ++r) {
            const std::size_t i0 = (r <= lo + 1) ? lo : r - 1;
            Complex* row = &A.at(r, 0);
            for (std::size_t i = i0; i < hi; ++i) {
                const Givens& g = rots[i - lo];
                const Complex x = row[i], y = row[i + 1];
                row[i] = x * g.c + y * std::conj(g.s);
                row[i + 1] = -x * g.s + y * g.c;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) A.at(i, i) += shift;
    }
    return rep;
}

namespace {

// dense LU with partial pivoting; returns false on exact singularity
bool lu_factor(DenseMatrix& A, std::vector<std::size_t>& piv) {
    const std::size_t n = A.n;
    piv.resize(n);
    std::iota(piv.begin(), piv.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(A.at(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(A.at(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best < 1e-300) return false;
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A.at(k, c), A.at(p, c));
            std::swap(piv[k], piv[p]);
        }
        const Complex pivval = A.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = A.at(i, k) / pivval;
            A.at(i, k) = f;
            for (std::size_t c = k + 1; c < n; ++c) A.at(i, c) -= f * A.at(k, c);
        }
    }
    return true;
}

void lu_solve_inplace(const DenseMatrix& LU, const std::vector<std::size_t>& piv,
                      std::vector<Complex>& b) {
    const std::size_t n = LU.n;
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[piv[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= LU.at(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= LU.at(ii, j) * x[j];
        x[ii] /= LU.at(ii, ii);
    }
    b = std::move(x);
}

}  // namespace

std::vector<EigenPair> dense_eigenpairs(const DenseMatrix& A) {
    const SpectrumReport spec = dense_eigenvalues(A);
    const std::size_t n = A.n;
    const double anorm = std::max(A.frobenius_norm(), 1e-300);
    std::vector<EigenPair> out;
    out.reserve(n);
    std::mt19937_64 rng(0x5eed1234u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    for (std::size_t e = 0; e < n; ++e) {
        const Complex lambda = spec.eigenvalues[e];
        EigenPair pair;
        pair.value = lambda;
        std::vector<Complex> v(n);
        for (auto& x : v) x = Complex(unit(rng), unit(rng));

        double backward = 1e30;
        Complex mu = lambda;
        for (int attempt = 0; attempt < 4 && backward > 1e-12; ++attempt) {
            DenseMatrix M = A;
            const double eps_shift = anorm * 1e-14 * (attempt + (attempt ? 1 : 0));
            for (std::size_t i = 0; i < n; ++i) M.at(i, i) -= (mu + Complex(eps_shift, eps_shift));
            std::vector<std::size_t> piv;
            if (!lu_factor(M, piv)) {
                mu += Complex(anorm * 1e-12, 0);
                continue;
            }
            for (int it = 0; it < 3; ++it) {
                lu_solve_inplace(M, piv, v);
                double nv = 0;
                for (const Complex& x : v) nv += std::norm(x);
                nv = std::sqrt(nv);
                if (nv < 1e-300) break;
                for (Complex& x : v) x /= nv;
                // backward error of (lambda, v)
                double res = 0;
                for (std::size_t r = 0; r < n; ++r) {
                    Complex acc(0, 0);
                    for (std::size_t c = 0; c < n; ++c) acc += A.at(r, c) * v[c];
                    res += std::norm(acc - lambda * v[r]);
                }
                backward = std::sqrt(res) / anorm;
                if (backward <= 1e-13) break;
            }
        }
        pair.vector = v;
        pair.backward_error = backward;
        out.push_back(std::move(pair));
    }
    return out;
}

double eigenpair_residual(const OperatorMatrix& H, const StateVector& psi, Complex E) {
    const double pn = psi.norm();
    if (pn <= 0) throw std::invalid_argument("eigenpair_residual: zero vector");
    const StateVector Hpsi = matvec(H, psi);
    double res = 0;
    for (std::size_t i = 0; i < psi.dim; ++i) res += std::norm(Hpsi.amplitudes[i] - E * psi.amplitudes[i]);
    const double hnorm = std::max(H.inf_norm(), 1e-300);
    return std::sqrt(res) / (hnorm * pn);
}

MatchReport match_spectra(const std::vector<Complex>& predicted, const SpectrumReport& exact,
                          double tol) {
    MatchReport rep;
    std::vector<Complex> ex = exact.eigenvalues;
    std::sort(ex.begin(), ex.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<bool> used(ex.size(), false);
    std::vector<bool> done(predicted.size(), false);

    // global greedy: repeatedly take the smallest (prediction, exact) distance
    for (std::size_t round = 0; round < predicted.size(); ++round) {
        double best = 1e300;
        std::size_t bp = predicted.size(), be = ex.size();
        for (std::size_t p = 0; p < predicted.size(); ++p) {
            if (done[p]) continue;
            for (std::size_t e = 0; e < ex.size(); ++e) {
                if (used[e]) continue;
                const double d = std::abs(predicted[p] - ex[e]);
                if (d < best) {
                    best = d;
                    bp = p;
                    be = e;
                }
            }
        }
        if (bp == predicted.size()) break;
        done[bp] = true;
        if (best <= tol) {
            used[be] = true;
            rep.matched.push_back({predicted[bp], ex[be], best});
        } else {
            rep.unmatched_predictions.push_back(predicted[bp]);
        }
    }
    rep.coverage = ex.empty() ? 0.0 : static_cast<double>(rep.matched.size()) /
                                          static_cast<double>(ex.size());
    return rep;
}

}  // namespace spinchain
