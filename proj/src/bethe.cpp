#include "spinchain/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinchain {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Complex> exp_ik(const Momenta& k) {
    std::vector<Complex> z(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) z[j] = std::exp(Complex(0, 1) * k[j]);
    return z;
}

struct EquationSides {
    std::vector<Complex> lhs, rhs;
};

EquationSides sides_periodic(const Momenta& k, int L) {
    const std::size_t m = k.size();
    const std::vector<Complex> z = exp_ik(k);
    EquationSides s;
    s.lhs.resize(m);
    s.rhs.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        Complex prod(1, 0);
        for (std::size_t l = 0; l < m; ++l)
            if (l != j) prod *= scattering(z[l], z[j]);
        s.lhs[j] = prod;
        s.rhs[j] = std::exp(Complex(0, 1) * static_cast<double>(L) * k[j]);
    }
    return s;
}

EquationSides sides_open(const Momenta& k, int L, Complex al, Complex be, Complex ga,
                         Complex de) {
    const std::size_t m = k.size();
    const std::vector<Complex> z = exp_ik(k);
    EquationSides s;
    s.lhs.resize(m);
    s.rhs.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        Complex prod(1, 0);
        const Complex zj_inv = checked_div(1.0, z[j], "residual_open: z = 0");
        for (std::size_t l = 0; l < m; ++l) {
            if (l == j) continue;
            prod *= scattering(z[l], z[j]);
            prod *= scattering(zj_inv, z[l]);
        }
        s.lhs[j] = prod;
        const Complex num = r_plus(z[j], al, be) * r_minus(z[j], ga, de);
        const Complex den = r_plus(zj_inv, al, be) * r_minus(zj_inv, ga, de);
        s.rhs[j] = std::exp(Complex(0, 2) * static_cast<double>(L) * k[j]) *
                   checked_div(num, den, "residual_open: reflection ratio pole");
    }
    return s;
}

}  // namespace

std::vector<Complex> residual_periodic(const Momenta& k, int L) {
    const EquationSides s = sides_periodic(k, L);
    std::vector<Complex> out(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) out[j] = s.lhs[j] - s.rhs[j];
    return out;
}

std::vector<Complex> residual_open(const Momenta& k, int L, Complex alpha, Complex beta,
                                   Complex gamma, Complex delta) {
    const EquationSides s = sides_open(k, L, alpha, beta, gamma, delta);
    std::vector<Complex> out(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) out[j] = s.lhs[j] - s.rhs[j];
    return out;
}

namespace {

bool is_open(ModelFamily f) { return f != ModelFamily::XxxPeriodic; }

// Componentwise relative residual: the raw difference divided by
// 1 + |lhs| + |rhs|.  Deep bound states drive the raw sides to ~e^{2L Im k},
// where an absolute tolerance is meaningless in doubles.
struct ScaledResidual {
    std::vector<Complex> r;
    double scale = 1;
};

ScaledResidual scaled_residual(const ModelSpec& spec, const Momenta& k) {
    const EquationSides s = is_open(spec.family)
                                ? sides_open(k, spec.L, spec.boundary.alpha, spec.boundary.beta,
                                             spec.boundary.gamma, spec.boundary.delta)
                                : sides_periodic(k, spec.L);
    ScaledResidual out;
    out.r.resize(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) {
        // smooth scale so Newton keeps its quadratic tail near deep strings
        const double sj = 1.0 + std::abs(s.lhs[j]) + std::abs(s.rhs[j]);
        out.r[j] = (s.lhs[j] - s.rhs[j]) / sj;
        out.scale = std::max(out.scale, sj);
    }
    return out;
}

double norm2(const std::vector<Complex>& v) {
    double s = 0;
    for (const Complex& x : v) s += std::norm(x);
    return std::sqrt(s);
}

// min_{i<j} |k_i - k_j| (and |k_i + k_j| for open families)
double min_pair_separation(const Momenta& k, bool open_family) {
    double best = 1e300;
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = i + 1; j < k.size(); ++j) {
            best = std::min(best, std::abs(k[i] - k[j]));
            if (open_family) best = std::min(best, std::abs(k[i] + k[j]));
        }
    return best;
}

// z-plane singularity classes excluded by the ansatz
std::string singular_reason(const Momenta& k, bool open_family) {
    const std::vector<Complex> z = exp_ik(k);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (open_family && std::abs(z[i] - 1.0) < 1e-5)
            return "singular momentum k ~ 0 (zero wavefunction for open chains)";
        if (open_family && std::abs(z[i] + 1.0) < 1e-5)
            return "singular momentum k ~ pi (zero wavefunction for open chains)";
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            if (std::abs(z[i] - z[j]) < 1e-6) return "coinciding momenta";
            if (open_family && std::abs(z[i] * z[j] - 1.0) < 1e-6)
                return "momentum pair k, -k (transmission pole)";
        }
    }
    return {};
}

}  // namespace

Momenta canonical_momenta(const Momenta& k, bool open_family) {
    Momenta out;
    out.reserve(k.size());
    for (Complex kk : k) {
        double re = std::remainder(kk.real(), 2 * kPi);  // wrap to (-pi, pi]
        if (re <= -kPi) re += 2 * kPi;
        Complex c(re, kk.imag());
        if (open_family && (c.real() < -1e-9 || (std::abs(c.real()) <= 1e-9 && c.imag() < 0)))
            c = -c;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

namespace {

struct NewtonOutcome {
    Momenta k;
    double residual = 1e300;
    double scale = 1;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

// Damped Newton with a centrally-differenced Jacobian on (Re k, Im k).  After
// reaching the tolerance a few polish steps pin the root to the noise floor.
NewtonOutcome run_newton(const ModelSpec& spec, Momenta k, bool open_family,
                         const SolverOptions& opts, int max_iter) {
    NewtonOutcome out;
    const std::size_t nreal = 2 * k.size();

    auto eval = [&](const Momenta& kk) -> std::optional<ScaledResidual> {
        for (Complex c : kk) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return std::nullopt;
            if (std::abs(c.imag()) > opts.im_cap) return std::nullopt;
        }
        try {
            return scaled_residual(spec, kk);
        } catch (const SingularMomentumError&) {
            return std::nullopt;
        }
    };

    auto res = eval(k);
    if (!res) {
        out.k = std::move(k);
        return out;
    }
    double rn = norm2(res->r);
    out.history.push_back(rn);

    int it = 0;
    int polish_left = 3;
    for (; it < max_iter; ++it) {
        if (rn <= opts.tol) {
            if (polish_left == 0 || rn < 1e-13) break;
            --polish_left;
        }
        std::vector<double> J(nreal * nreal, 0.0);
        std::vector<double> f0(nreal);
        for (std::size_t j = 0; j < k.size(); ++j) {
            f0[2 * j] = res->r[j].real();
            f0[2 * j + 1] = res->r[j].imag();
        }
        bool jac_ok = true;
        for (std::size_t c = 0; c < nreal && jac_ok; ++c) {
            Momenta kp = k, km = k;
            const Complex dc = (c % 2 == 0) ? Complex(opts.fd_step, 0) : Complex(0, opts.fd_step);
            kp[c / 2] += dc;
            km[c / 2] -= dc;
            auto rp = eval(kp), rm = eval(km);
            if (!rp || !rm) {
                jac_ok = false;
                break;
            }
            for (std::size_t j = 0; j < k.size(); ++j) {
                J[(2 * j) * nreal + c] = (rp->r[j].real() - rm->r[j].real()) / (2 * opts.fd_step);
                J[(2 * j + 1) * nreal + c] = (rp->r[j].imag() - rm->r[j].imag()) / (2 * opts.fd_step);
            }
        }
        if (!jac_ok) break;

        // J dx = f0 by Gaussian elimination with partial pivoting
        std::vector<double> dx = f0;
        {
            std::vector<double> M = J;
            std::vector<std::size_t> piv(nreal);
            bool singular = false;
            for (std::size_t cc = 0; cc < nreal; ++cc) piv[cc] = cc;
            for (std::size_t kcol = 0; kcol < nreal; ++kcol) {
                std::size_t p = kcol;
                double best = std::abs(M[piv[kcol] * nreal + kcol]);
                for (std::size_t i = kcol + 1; i < nreal; ++i) {
                    const double v = std::abs(M[piv[i] * nreal + kcol]);
                    if (v > best) {
                        best = v;
                        p = i;
                    }
                }
                if (best < 1e-300) {
                    singular = true;
                    break;
                }
                std::swap(piv[kcol], piv[p]);
                const double pv = M[piv[kcol] * nreal + kcol];
                for (std::size_t i = kcol + 1; i < nreal; ++i) {
                    const double f = M[piv[i] * nreal + kcol] / pv;
                    M[piv[i] * nreal + kcol] = f;
                    for (std::size_t c2 = kcol + 1; c2 < nreal; ++c2)
                        M[piv[i] * nreal + c2] -= f * M[piv[kcol] * nreal + c2];
                }
            }
            if (singular) break;
            std::vector<double> y(nreal);
            for (std::size_t i = 0; i < nreal; ++i) {
                y[i] = dx[piv[i]];
                for (std::size_t j = 0; j < i; ++j) y[i] -= M[piv[i] * nreal + j] * y[j];
            }
            for (std::size_t ii = nreal; ii-- > 0;) {
                for (std::size_t j = ii + 1; j < nreal; ++j) y[ii] -= M[piv[ii] * nreal + j] * y[j];
                y[ii] /= M[piv[ii] * nreal + ii];
            }
            dx = std::move(y);
        }

        // backtracking damping
        double lam = 1.0;
        bool accepted = false;
        while (lam >= opts.damping_floor) {
            Momenta kn = k;
            for (std::size_t j = 0; j < k.size(); ++j)
                kn[j] -= lam * Complex(dx[2 * j], dx[2 * j + 1]);
            // coinciding-momenta guard: nudge once, then reject the step
            if (min_pair_separation(kn, open_family) < opts.coincide_tol) {
                for (std::size_t j = 0; j < kn.size(); ++j) kn[j] += Complex(1e-6 * (j + 1), 0);
            }
            auto rn2 = eval(kn);
            if (rn2 && norm2(rn2->r) < rn) {
                k = std::move(kn);
                res = std::move(rn2);
                rn = norm2(res->r);
                accepted = true;
                break;
            }
            lam /= 2;
        }
        if (!accepted) break;
        out.history.push_back(rn);
    }

    out.k = std::move(k);
    out.residual = rn;
    out.scale = res ? res->scale : 1.0;
    out.iterations = it;
    out.converged = rn <= opts.tol;
    return out;
}

}  // namespace

BetheSolution solve(const ModelSpec& spec, int m, const Seed& seed, const SolverOptions& opts) {
    validate(spec);
    if (spec.family == ModelFamily::XxzOpen)
        throw std::invalid_argument("solve: xxz Bethe equations are out of scope");
    const bool open_family = is_open(spec.family);

    BetheSolution sol;
    sol.family = spec.family;
    sol.L = spec.L;
    sol.quantum_numbers = seed.quantum_numbers;

    Momenta k;
    if (!seed.quantum_numbers.empty()) {
        const double step = open_family ? kPi / spec.L : 2 * kPi / spec.L;
        for (int I : seed.quantum_numbers) k.push_back(Complex(step * I, 0));
    } else {
        k = seed.momenta;
    }
    if (static_cast<int>(k.size()) != m)
        throw std::invalid_argument("solve: seed size differs from magnon count");
    if (m == 0) {
        sol.converged = true;
        sol.energy = open_family ? energy_open(k, spec.boundary.alpha, spec.boundary.gamma)
                                 : energy_periodic(k);
        return sol;
    }

    // one-time perturbation of coinciding seed momenta
    if (min_pair_separation(k, open_family) < opts.coincide_tol) {
        for (std::size_t j = 0; j < k.size(); ++j) k[j] += Complex(1e-6 * (j + 1), 0);
        if (min_pair_separation(k, open_family) < opts.coincide_tol) {
            sol.filtered_reason = "coinciding seed momenta";
            return sol;
        }
    }

    NewtonOutcome run = run_newton(spec, std::move(k), open_family, opts, opts.max_iter);
    sol.k = run.k;
    sol.iterations = run.iterations;
    sol.residual_norm = run.residual;
    sol.residual_history = run.history;
    sol.converged = run.converged;
    if (!sol.converged) return sol;

    // quadratic-tail check with slack 10 over the last steps
    const auto& h = sol.residual_history;
    if (h.size() >= 3) {
        const double r1 = h[h.size() - 2], r2 = h.back();
        if (r1 < 1e-2 && r2 > 10 * r1 * r1 && r2 > 1e-14) sol.slow_convergence = true;
    }

    sol.filtered_reason = singular_reason(sol.k, open_family);
    if (sol.filtered_reason.empty() && run.scale > opts.scale_cap)
        sol.filtered_reason = "residual scale beyond double-precision resolution";

    // Root confirmation: a genuine isolated root re-converges to itself from
    // nearby starts.  Noise minima along ill-scaled residual valleys do not,
    // and they would not reproduce eigenstates.
    if (sol.filtered_reason.empty() && sol.iterations > 0) {
        for (int dir = 0; dir < 2 && sol.filtered_reason.empty(); ++dir) {
            Momenta kp = sol.k;
            for (std::size_t j = 0; j < kp.size(); ++j) {
                const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
                kp[j] += (dir == 0) ? Complex(1e-5 * sgn, 0) : Complex(0, 1e-5 * sgn);
            }
            const NewtonOutcome again = run_newton(spec, std::move(kp), open_family, opts, 80);
            double drift = 1e300;
            if (again.converged) {
                drift = 0;
                for (std::size_t j = 0; j < sol.k.size(); ++j)
                    drift = std::max(drift, std::abs(again.k[j] - sol.k[j]));
            }
            if (drift > 1e-7)
                sol.filtered_reason = "root not locally isolated (flat residual valley)";
        }
    }

    if (sol.filtered_reason.empty()) {
        sol.energy = open_family ? energy_open(sol.k, spec.boundary.alpha, spec.boundary.gamma)
                                 : energy_periodic(sol.k);
    }
    return sol;
}

namespace {

void push_qn_seed(std::vector<Seed>& seeds, std::vector<int> qn) {
    Seed s;
    s.quantum_numbers = std::move(qn);
    seeds.push_back(std::move(s));
}

void push_k_seed(std::vector<Seed>& seeds, Momenta k) {
    Seed s;
    s.momenta = std::move(k);
    seeds.push_back(std::move(s));
}

// Fixed-point iteration of the logarithmic Bethe equations; the integer
// branches are the quantum numbers.  Used purely as seed refinement.
Momenta log_refined_periodic(const std::vector<int>& I, int L) {
    const std::size_t m = I.size();
    Momenta k(m);
    for (std::size_t j = 0; j < m; ++j)
        k[j] = Complex(2 * kPi * I[j] / L + 1e-3 * (j + 1), 0);
    for (int sweep = 0; sweep < 60; ++sweep) {
        Momenta kn = k;
        try {
            for (std::size_t j = 0; j < m; ++j) {
                Complex tot(0, 0);
                for (std::size_t l = 0; l < m; ++l) {
                    if (l == j) continue;
                    const Complex s = scattering(std::exp(Complex(0, 1) * k[l]),
                                                 std::exp(Complex(0, 1) * k[j]));
                    tot += Complex(0, -1) * std::log(s);
                }
                kn[j] = (2 * kPi * I[j] + tot) / static_cast<double>(L);
            }
        } catch (const SingularMomentumError&) {
            return k;
        }
        for (std::size_t j = 0; j < m; ++j) k[j] = 0.5 * k[j] + 0.5 * kn[j];
    }
    return k;
}

Momenta log_refined_open(const std::vector<int>& I, const ModelSpec& spec) {
    const std::size_t m = I.size();
    const int L = spec.L;
    const auto& b = spec.boundary;
    Momenta k(m);
    for (std::size_t j = 0; j < m; ++j) k[j] = Complex(kPi * I[j] / L + 1e-3 * (j + 1), 0);
    for (int sweep = 0; sweep < 60; ++sweep) {
        Momenta kn = k;
        try {
            for (std::size_t j = 0; j < m; ++j) {
                const Complex z = std::exp(Complex(0, 1) * k[j]);
                const Complex zi = 1.0 / z;
                Complex tot = Complex(0, -1) *
                              std::log(checked_div(r_plus(z, b.alpha, b.beta) * r_minus(z, b.gamma, b.delta),
                                                   r_plus(zi, b.alpha, b.beta) * r_minus(zi, b.gamma, b.delta),
                                                   "log seed"));
                for (std::size_t l = 0; l < m; ++l) {
                    if (l == j) continue;
                    const Complex zl = std::exp(Complex(0, 1) * k[l]);
                    tot += Complex(0, -1) * (std::log(scattering(zl, z)) + std::log(scattering(zi, zl)));
                }
                kn[j] = (2 * kPi * I[j] + tot) / static_cast<double>(2 * L);
            }
        } catch (const SingularMomentumError&) {
            return k;
        }
        for (std::size_t j = 0; j < m; ++j) k[j] = 0.7 * k[j] + 0.3 * kn[j];
    }
    return k;
}

}  // namespace

std::vector<BetheSolution> sweep(const ModelSpec& spec, int m, const SolverOptions& opts) {
    validate(spec);
    const bool open_family = is_open(spec.family);
    const int L = spec.L;
    std::vector<Seed> seeds;

    if (m == 0) {
        push_qn_seed(seeds, {});
    } else if (!open_family) {
        if (m == 1) {
            for (int I = 0; I < L; ++I) push_qn_seed(seeds, {I});
        } else if (m == 2) {
            for (int I1 = 0; I1 < L; ++I1)
                for (int I2 = I1; I2 < L; ++I2) {
                    push_qn_seed(seeds, {I1, I2});
                    push_k_seed(seeds, log_refined_periodic({I1, I2}, L));
                }
            for (int Ic = 0; Ic < 2 * L; ++Ic) {
                const double th = kPi * Ic / L;
                for (double v : {0.3, 0.6, 0.9, 1.3})
                    push_k_seed(seeds, {Complex(th, v), Complex(th, -v)});
            }
        } else {
            // m >= 3: quantum-number sweep plus one string ladder
            std::vector<int> I(m, 0);
            while (true) {
                push_qn_seed(seeds, I);
                push_k_seed(seeds, log_refined_periodic(I, L));
                int j = m - 1;
                while (j >= 0 && I[j] == L - 1) --j;
                if (j < 0) break;
                ++I[j];
                for (int l = j + 1; l < m; ++l) I[l] = I[j];
            }
            for (int Ic = 0; Ic < 2 * L; ++Ic) {
                const double th = kPi * Ic / L;
                Momenta k{Complex(th, 0.5), Complex(th, -0.5)};
                for (int extra = 0; extra < m - 2; ++extra)
                    k.push_back(Complex(2 * kPi * (extra + 1) / L, 0));
                push_k_seed(seeds, k);
            }
        }
    } else {
        if (m == 1) {
            for (int I = 1; I < L; ++I) push_qn_seed(seeds, {I});
            for (int I = 1; I < 2 * L; ++I) push_k_seed(seeds, {Complex(kPi * I / (2 * L), 0)});
            for (double v : {0.2, 0.4, 0.7, 1.0, 1.4, 1.9})
                push_k_seed(seeds, {Complex(0, v)});
            for (double v : {0.3, 0.8, 1.4})
                push_k_seed(seeds, {Complex(kPi, v)});
        } else if (m == 2) {
            for (int I1 = 1; I1 < 2 * L; ++I1)
                for (int I2 = I1 + 1; I2 < 2 * L; ++I2)
                    push_k_seed(seeds, {Complex(kPi * I1 / (2 * L), 0), Complex(kPi * I2 / (2 * L), 0)});
            for (int I1 = 1; I1 < L; ++I1)
                for (int I2 = I1 + 1; I2 < L; ++I2)
                    push_k_seed(seeds, log_refined_open({I1, I2}, spec));
            for (int I = 1; I < L; ++I)
                for (double v : {0.3, 0.8}) {
                    push_k_seed(seeds, {Complex(0, v), Complex(kPi * I / L, 0)});
                    push_k_seed(seeds, {Complex(kPi, v), Complex(kPi * I / L, 0)});
                }
            push_k_seed(seeds, {Complex(0, 0.25), Complex(0, 0.6)});
            push_k_seed(seeds, {Complex(0, 0.3), Complex(0, 1.0)});
            for (int Ic = 1; Ic < 2 * L; ++Ic) {
                const double th = kPi * Ic / (2 * L);
                for (double v : {0.4, 0.8})
                    push_k_seed(seeds, {Complex(th, v), Complex(th, -v)});
            }
        } else {
            std::vector<int> I(m);
            for (int j = 0; j < m; ++j) I[j] = j + 1;
            while (true) {
                push_qn_seed(seeds, I);
                push_k_seed(seeds, log_refined_open(I, spec));
                int j = m - 1;
                while (j >= 0 && I[j] == L - 1 - (m - 1 - j)) --j;
                if (j < 0) break;
                ++I[j];
                for (int l = j + 1; l < m; ++l) I[l] = I[l - 1] + 1;
            }
        }
    }

    std::vector<BetheSolution> sols;
    sols.reserve(seeds.size());
    for (const Seed& s : seeds) sols.push_back(solve(spec, m, s, opts));
    return deduplicate(std::move(sols));
}

std::vector<BetheSolution> deduplicate(std::vector<BetheSolution> sols) {
    std::vector<BetheSolution> out;
    for (BetheSolution& s : sols) {
        if (!s.converged) {
            out.push_back(std::move(s));  // unconverged records pass through
            continue;
        }
        s.k = canonical_momenta(s.k, is_open(s.family));
        bool dup = false;
        for (const BetheSolution& t : out) {
            if (!t.converged || t.k.size() != s.k.size()) continue;
            double d = 0;
            for (std::size_t j = 0; j < s.k.size(); ++j) d = std::max(d, std::abs(s.k[j] - t.k[j]));
            if (d < 1e-6) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(s));
    }
    // deterministic order: converged first, then by momenta
    std::stable_sort(out.begin(), out.end(), [](const BetheSolution& a, const BetheSolution& b) {
        if (a.converged != b.converged) return a.converged;
        if (a.k.size() != b.k.size()) return a.k.size() < b.k.size();
        for (std::size_t j = 0; j < a.k.size(); ++j) {
            if (std::abs(a.k[j].real() - b.k[j].real()) > 1e-9)
                return a.k[j].real() < b.k[j].real();
            if (std::abs(a.k[j].imag() - b.k[j].imag()) > 1e-9)
                return a.k[j].imag() < b.k[j].imag();
        }
        return false;
    });
    return out;
}

}  // namespace spinchain
