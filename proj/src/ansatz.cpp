#include "spinchain/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinchain {

Complex scattering(Complex z1, Complex z2) {
    const Complex num = 2.0 * z2 - z1 * z2 - 1.0;
    const Complex den = 2.0 * z1 - z1 * z2 - 1.0;
    return -checked_div(num, den, "scattering: pole of S");
}

Complex r_plus(Complex z, Complex alpha, Complex beta) {
    const Complex num = (z - 1.0) * (1.0 - z + beta - alpha);
    const Complex den = z * (1.0 + z);
    return checked_div(num, den, "r_plus: pole at z in {0,-1}");
}

Complex r_plus_triangular(Complex z, Complex alpha, Complex beta) {
    return -r_plus(z, alpha, beta);
}

Complex reflection(Complex z, Complex alpha, Complex beta) {
    const Complex zinv = checked_div(1.0, z, "reflection: z = 0");
    const Complex num = -z * z * (1.0 - zinv + beta - alpha);
    const Complex den = 1.0 - z + beta - alpha;
    return checked_div(num, den, "reflection: pole of R+");
}

Complex r_minus(Complex z, Complex gamma, Complex delta) {
    const Complex num = (z - 1.0) * (1.0 - z + delta - gamma);
    const Complex den = z + 1.0;
    return checked_div(num, den, "r_minus: pole at z = -1");
}

Complex a_coeff(Complex z1, Complex z2) {
    const Complex num = Complex(0, 1) * (2.0 * z2 - z1 * z2 - 1.0);
    const Complex den = z1 * z2 - 1.0;
    return checked_div(num, den, "a_coeff: pole at z1 z2 = 1");
}

Complex transmission(std::span<const Complex> z, Complex alpha, Complex beta, Complex mu) {
    if (z.empty()) throw std::invalid_argument("transmission: needs at least one momentum");
    if (mu == Complex(0, 0)) return Complex(0, 0);
    const Complex zm = z.back();
    Complex den = r_plus_triangular(zm, alpha, beta);
    for (std::size_t j = 0; j + 1 < z.size(); ++j) {
        den *= a_coeff(zm, z[j]);
        den *= a_coeff(z[j], checked_div(1.0, zm, "transmission: z_m = 0"));
    }
    return checked_div(mu, den, "transmission: zero denominator");
}

Complex lambda_weight(Complex z) {
    return z + checked_div(1.0, z, "lambda_weight: z = 0") - 2.0;
}

Complex energy_periodic(std::span<const Complex> k) {
    Complex e(0, 0);
    for (Complex kj : k) e += lambda_weight(std::exp(Complex(0, 1) * kj));
    return e;
}

Complex energy_open(std::span<const Complex> k, Complex alpha, Complex gamma) {
    Complex e = alpha + gamma;
    for (Complex kj : k) e += lambda_weight(std::exp(Complex(0, 1) * kj));
    return e;
}

namespace {

std::vector<Complex> exp_ik(const Momenta& k) {
    std::vector<Complex> z(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) z[j] = std::exp(Complex(0, 1) * k[j]);
    return z;
}

// One generator step of the amplitude recursion: the factor picked up when
// extending g by w, evaluated on the momenta as currently assigned by g.
Complex step_factor(int code, const SignedPermutation& g, const Momenta& k,
                    const BoundarySpec& b) {
    const std::vector<Complex> kg = act(g, k);
    if (code == 0) {
        const Complex z = std::exp(Complex(0, 1) * kg[0]);
        return reflection(z, b.alpha, b.beta);
    }
    const int j = code - 1;
    const Complex zj = std::exp(Complex(0, 1) * kg[j]);
    const Complex zj1 = std::exp(Complex(0, 1) * kg[j + 1]);
    return scattering(zj, zj1);
}

}  // namespace

Complex amplitude_along_word(const Word& word, int n, const Momenta& k,
                             const BoundarySpec& boundary) {
    if (static_cast<int>(k.size()) != n)
        throw std::invalid_argument("amplitude_along_word: momentum count mismatch");
    SignedPermutation g = identity_element(n);
    Complex amp(1, 0);
    for (int code : word) {
        amp *= step_factor(code, g, k, boundary);
        g = right_multiply(g, generator_element(n, code));
    }
    return amp;
}

AmplitudeTable build_amplitudes(int n, const Momenta& k, const BoundarySpec& boundary) {
    if (static_cast<int>(k.size()) != n)
        throw std::invalid_argument("build_amplitudes: momentum count mismatch");
    AmplitudeTable table;
    table.n = n;

    const bool open_chain = boundary.kind != BoundarySpec::Kind::Periodic;
    const std::vector<SignedPermutation> elems =
        open_chain ? enumerate_group(n) : enumerate_symmetric_subgroup(n);

    table.top.reserve(elems.size());
    for (const auto& g : elems)
        table.top.emplace_back(g, amplitude_along_word(word_decomposition(g), n, k, boundary));

    if (!open_chain) return table;

    // tail levels: A^{(n,m)}_rep = T^{(m)}(slots 0..m-1 of rep) A^{(n,m-1)}_red(rep)
    std::map<CosetKey, Complex> prev;
    for (const auto& [g, a] : table.top) prev[coset_key(g, 0)] = a;

    for (int m = 1; m <= n; ++m) {
        std::map<CosetKey, Complex> level;
        for (const auto& rep : coset_representatives(n, m)) {
            const std::vector<Complex> kg = act(rep.element, k);
            std::vector<Complex> zg(m);
            for (int j = 0; j < m; ++j) zg[j] = std::exp(Complex(0, 1) * kg[j]);
            const Complex t = transmission(zg, boundary.alpha, boundary.beta, boundary.mu);
            const CosetKey finer = coset_key(canonical_coset_representative(rep.element, m - 1),
                                             m - 1);
            level[coset_key(rep.element, m)] = t * prev.at(finer);
        }
        table.tails.push_back(level);
        prev = table.tails.back();
    }
    return table;
}

namespace {

void add_component(StateVector& psi, const SectorBasis& basis,
                   const std::vector<std::pair<SignedPermutation, Complex>>& amps,
                   const Momenta& k, int tail_m) {
    // component with n - tail_m surviving magnons; phase uses slots tail_m..n-1
    for (const SpinConfiguration& c : basis.configs) {
        Complex acc(0, 0);
        for (const auto& [g, a] : amps) {
            if (a == Complex(0, 0)) continue;
            const std::vector<Complex> kg = act(g, k);
            Complex phase(0, 0);
            for (std::size_t j = 0; j < c.downs.size(); ++j)
                phase += kg[tail_m + j] * static_cast<double>(c.downs[j]);
            acc += a * std::exp(Complex(0, 1) * phase);
        }
        psi.amplitudes[bit_encoding(c)] += acc;
    }
}

// Regularity of the momentum set: coinciding entries collapse the ansatz to
// the zero vector, and for open chains so do k = 0, k = pi and pairs k, -k.
void check_regular(const Momenta& k, bool open_chain) {
    const std::vector<Complex> z = exp_ik(k);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (open_chain && (std::abs(z[i] - 1.0) < 1e-9 || std::abs(z[i] + 1.0) < 1e-9))
            throw SingularMomentumError("build_state: momentum at k = 0 or pi (open chain)");
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            if (std::abs(z[i] - z[j]) < 1e-9)
                throw SingularMomentumError("build_state: coinciding momenta");
            if (open_chain && std::abs(z[i] * z[j] - 1.0) < 1e-9)
                throw SingularMomentumError("build_state: momentum pair k, -k (open chain)");
        }
    }
}

}  // namespace

BuiltState build_state(const ModelSpec& spec, const Momenta& k) {
    validate(spec);
    if (spec.family == ModelFamily::XxzOpen)
        throw std::invalid_argument("build_state: xxz wavefunctions are not assembled");
    const int L = spec.L;
    const int n = static_cast<int>(k.size());
    if (n < 0 || n > L) throw std::invalid_argument("build_state: momentum count out of range");
    check_regular(k, spec.family != ModelFamily::XxxPeriodic);

    BuiltState out;
    out.state = StateVector(std::size_t{1} << L);
    const BoundarySpec& b = spec.boundary;

    if (spec.family == ModelFamily::XxxPeriodic) {
        out.energy = energy_periodic(k);
        if (n == 0) {
            out.state.amplitudes[0] = 1;  // the all-up reference state
            return out;
        }
        const AmplitudeTable table = build_amplitudes(n, k, b);
        add_component(out.state, enumerate_sector(L, n), table.top, k, 0);
        return out;
    }

    out.energy = energy_open(k, b.alpha, b.gamma);
    if (n == 0) {
        out.state.amplitudes[0] = 1;
        return out;
    }
    const AmplitudeTable table = build_amplitudes(n, k, b);
    add_component(out.state, enumerate_sector(L, n), table.top, k, 0);
    for (int m = 1; m <= n; ++m) {
        std::vector<std::pair<SignedPermutation, Complex>> amps;
        for (const auto& rep : coset_representatives(n, m))
            amps.emplace_back(rep.element, table.tails[m - 1].at(coset_key(rep.element, m)));
        add_component(out.state, enumerate_sector(L, n - m), amps, k, m);
    }
    return out;
}

}  // namespace spinchain
