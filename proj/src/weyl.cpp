#include "spinchain/weyl.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace spinchain {

bool canonical_less(const SignedPermutation& a, const SignedPermutation& b) {
    // +1 sorts before -1, then lexicographic on perm
    for (int j = 0; j < a.size(); ++j) {
        if (a.signs[j] != b.signs[j]) return a.signs[j] > b.signs[j];
    }
    return a.perm < b.perm;
}

SignedPermutation identity_element(int n) {
    SignedPermutation g;
    g.perm.resize(n);
    std::iota(g.perm.begin(), g.perm.end(), 0);
    g.signs.assign(n, 1);
    return g;
}

SignedPermutation transposition(int n, int j) {
    if (j < 0 || j + 1 >= n) throw std::invalid_argument("transposition: slot out of range");
    SignedPermutation g = identity_element(n);
    std::swap(g.perm[j], g.perm[j + 1]);
    return g;
}

SignedPermutation reflection_r1(int n) {
    if (n < 1) throw std::invalid_argument("reflection_r1: n must be >= 1");
    SignedPermutation g = identity_element(n);
    g.signs[0] = -1;
    return g;
}

std::vector<Complex> act(const SignedPermutation& g, const std::vector<Complex>& k) {
    if (static_cast<int>(k.size()) != g.size())
        throw std::invalid_argument("act: momentum count differs from rank");
    std::vector<Complex> out(k.size());
    for (int j = 0; j < g.size(); ++j)
        out[j] = static_cast<double>(g.signs[j]) * k[g.perm[j]];
    return out;
}

SignedPermutation compose(const SignedPermutation& g, const SignedPermutation& h) {
    if (g.size() != h.size()) throw std::invalid_argument("compose: rank mismatch");
    const int n = g.size();
    SignedPermutation out;
    out.perm.resize(n);
    out.signs.resize(n);
    for (int j = 0; j < n; ++j) {
        out.perm[j] = h.perm[g.perm[j]];
        out.signs[j] = g.signs[j] * h.signs[g.perm[j]];
    }
    return out;
}

SignedPermutation inverse(const SignedPermutation& g) {
    const int n = g.size();
    SignedPermutation out;
    out.perm.resize(n);
    out.signs.resize(n);
    for (int j = 0; j < n; ++j) {
        out.perm[g.perm[j]] = j;
        out.signs[g.perm[j]] = g.signs[j];
    }
    return out;
}

SignedPermutation right_multiply(const SignedPermutation& g, const SignedPermutation& w) {
    return compose(w, g);
}

SignedPermutation generator_element(int n, int code) {
    if (code == 0) return reflection_r1(n);
    return transposition(n, code - 1);
}

SignedPermutation compose_word(int n, const Word& word) {
    SignedPermutation g = identity_element(n);
    for (int code : word) g = right_multiply(g, generator_element(n, code));
    return g;
}

namespace {

void check_rank(int n) {
    if (n < 1 || n > kMaxWeylRank)
        throw std::invalid_argument("weyl: rank out of supported range [1,8]");
}

struct PackedLess {
    bool operator()(const SignedPermutation& a, const SignedPermutation& b) const {
        if (a.perm != b.perm) return a.perm < b.perm;
        return a.signs < b.signs;
    }
};

// Canonical word per element: BFS from the identity, expanding generators in
// order R1 < t_1 < ... within lexicographically ordered frontiers, so the
// first visit carries the lex-smallest minimal word.
struct WordCache {
    std::map<SignedPermutation, Word, PackedLess> words;
};

const WordCache& word_cache(int n, bool with_reflection) {
    static std::map<std::pair<int, bool>, WordCache> caches;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, with_reflection);
    auto it = caches.find(key);
    if (it != caches.end()) return it->second;

    WordCache cache;
    std::vector<int> gens;
    if (with_reflection) gens.push_back(0);
    for (int j = 1; j < n; ++j) gens.push_back(j);

    std::vector<SignedPermutation> frontier{identity_element(n)};
    cache.words[frontier.front()] = {};
    while (!frontier.empty()) {
        std::vector<SignedPermutation> next;
        for (const auto& g : frontier) {
            const Word& wg = cache.words.at(g);
            for (int code : gens) {
                SignedPermutation h = right_multiply(g, generator_element(n, code));
                if (cache.words.count(h)) continue;
                Word wh = wg;
                wh.push_back(code);
                cache.words.emplace(std::move(h), std::move(wh));
                next.push_back(right_multiply(g, generator_element(n, code)));
            }
        }
        frontier = std::move(next);
    }
    return caches.emplace(key, std::move(cache)).first->second;
}

}  // namespace

std::vector<SignedPermutation> enumerate_group(int n) {
    check_rank(n);
    std::vector<SignedPermutation> out;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        for (int mask = 0; mask < (1 << n); ++mask) {
            SignedPermutation g;
            g.perm = p;
            g.signs.resize(n);
            for (int j = 0; j < n; ++j) g.signs[j] = (mask >> j) & 1 ? -1 : 1;
            out.push_back(std::move(g));
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::vector<SignedPermutation> enumerate_symmetric_subgroup(int n) {
    check_rank(n);
    std::vector<SignedPermutation> out;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        SignedPermutation g;
        g.perm = p;
        g.signs.assign(n, 1);
        out.push_back(std::move(g));
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Word word_decomposition(const SignedPermutation& g) {
    check_rank(g.size());
    const auto& cache = word_cache(g.size(), true);
    auto it = cache.words.find(g);
    if (it == cache.words.end())
        throw std::invalid_argument("word_decomposition: not a valid group element");
    return it->second;
}

std::vector<Word> all_reduced_words(const SignedPermutation& g) {
    check_rank(g.size());
    const int n = g.size();
    const Word canonical = word_decomposition(g);
    const std::size_t len = canonical.size();
    if (len == 0) return {Word{}};

    // one BFS level at a time, keeping every minimal word
    std::map<SignedPermutation, std::vector<Word>, PackedLess> level;
    level[identity_element(n)] = {Word{}};
    for (std::size_t d = 0; d < len; ++d) {
        std::map<SignedPermutation, std::vector<Word>, PackedLess> next;
        for (const auto& [elem, ws] : level) {
            for (int code = 0; code < n; ++code) {
                SignedPermutation h = right_multiply(elem, generator_element(n, code));
                if (word_decomposition(h).size() != d + 1) continue;  // not reduced
                auto& slot = next[h];
                for (const Word& w : ws) {
                    Word w2 = w;
                    w2.push_back(code);
                    slot.push_back(std::move(w2));
                }
            }
        }
        level = std::move(next);
    }
    return level.at(g);
}

CosetKey coset_key(const SignedPermutation& g, int m) {
    CosetKey key;
    for (int j = m; j < g.size(); ++j) key.tail.emplace_back(g.perm[j], g.signs[j]);
    return key;
}

std::vector<CosetRepresentative> coset_representatives(int n, int m) {
    check_rank(n);
    if (m < 0 || m > n) throw std::invalid_argument("coset_representatives: need 0 <= m <= n");
    std::map<CosetKey, SignedPermutation> best;
    for (const auto& g : enumerate_group(n)) {
        CosetKey key = coset_key(g, m);
        auto it = best.find(key);
        if (it == best.end() || canonical_less(g, it->second)) best[key] = g;
    }
    std::vector<CosetRepresentative> out;
    out.reserve(best.size());
    for (auto& [key, g] : best) out.push_back(CosetRepresentative{n, m, std::move(g)});
    return out;
}

SignedPermutation canonical_coset_representative(const SignedPermutation& g, int m) {
    check_rank(g.size());
    const int n = g.size();
    // orbit of g under right multiplication by WB_m embedded on slots 0..m-1
    SignedPermutation best = g;
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    do {
        for (int mask = 0; mask < (1 << m); ++mask) {
            SignedPermutation w = identity_element(n);
            for (int j = 0; j < m; ++j) {
                w.perm[j] = p[j];
                w.signs[j] = (mask >> j) & 1 ? -1 : 1;
            }
            SignedPermutation cand = right_multiply(g, w);
            if (canonical_less(cand, best)) best = cand;
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

}  // namespace spinchain
