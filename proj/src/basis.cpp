#include "spinchain/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinchain {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

bool valid_configuration(const SpinConfiguration& c) {
    if (c.L < 1) return false;
    int prev = 0;
    for (int x : c.downs) {
        if (x <= prev || x > c.L) return false;
        prev = x;
    }
    return true;
}

std::uint64_t bit_encoding(const SpinConfiguration& c) {
    std::uint64_t b = 0;
    for (int x : c.downs) b |= (std::uint64_t{1} << (x - 1));
    return b;
}

SectorBasis enumerate_sector(int L, int m) {
    if (L < 1 || L > kMaxSectorL)
        throw std::invalid_argument("enumerate_sector: L out of range");
    if (m < 0 || m > L)
        throw std::invalid_argument("enumerate_sector: m out of range");

    SectorBasis basis;
    basis.L = L;
    basis.m = m;
    basis.configs.reserve(binomial(L, m));

    std::vector<int> cur(m);
    for (int j = 0; j < m; ++j) cur[j] = j + 1;
    while (true) {
        basis.configs.push_back(SpinConfiguration{L, cur});
        // colex successor: bump the lowest position that has room, reset the
        // ones below it to the bottom.
        int j = 0;
        while (j < m) {
            int limit = (j + 1 < m) ? cur[j + 1] : L + 1;
            if (cur[j] + 1 < limit) break;
            ++j;
        }
        if (j == m) break;
        ++cur[j];
        for (int i = 0; i < j; ++i) cur[i] = i + 1;
    }
    return basis;
}

std::size_t index_of(const SectorBasis& basis, const SpinConfiguration& c) {
    if (c.L != basis.L || static_cast<int>(c.downs.size()) != basis.m)
        throw std::invalid_argument("index_of: configuration belongs to a different sector");
    if (!valid_configuration(c) && basis.m > 0)
        throw std::invalid_argument("index_of: malformed configuration");
    // colex rank: sum of C(x_j - 1, j) over 1-based slot j
    std::uint64_t r = 0;
    for (int j = 0; j < basis.m; ++j) r += binomial(c.downs[j] - 1, j + 1);
    return static_cast<std::size_t>(r);
}

const SpinConfiguration& config_of(const SectorBasis& basis, std::size_t i) {
    if (i >= basis.configs.size())
        throw std::out_of_range("config_of: index out of range");
    return basis.configs[i];
}

double StateVector::norm() const {
    double s = 0;
    for (const Complex& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

StateVector embed_sector(const SectorBasis& basis, const StateVector& v) {
    if (v.dim != basis.dim() || v.amplitudes.size() != basis.dim())
        throw std::invalid_argument("embed_sector: dimension mismatch");
    if (basis.L > kMaxFullSpaceL)
        throw std::invalid_argument("embed_sector: L exceeds full-space guard");
    StateVector out(std::size_t{1} << basis.L);
    for (std::size_t i = 0; i < basis.dim(); ++i)
        out.amplitudes[bit_encoding(basis.configs[i])] = v.amplitudes[i];
    return out;
}

}  // namespace spinchain
