#pragma once

#include <vector>

#include "spinchain/numeric.hpp"

namespace spinchain {

// An element of the hyperoctahedral group WB_n: a permutation of slots
// together with a sign per slot.  Acting on a momentum vector k,
//   act(g, k)[j] = signs[j] * k[perm[j]]        (0-based slots).
// Slot 0 is the leftmost magnon, the one the left boundary reflects.
struct SignedPermutation {
    std::vector<int> perm;   // bijection of {0,...,n-1}
    std::vector<int> signs;  // entries +-1

    int size() const { return static_cast<int>(perm.size()); }
    bool operator==(const SignedPermutation&) const = default;
};

// Total order used for canonical coset representatives: compare sign vectors
// first (+1 before -1), then permutations lexicographically.
bool canonical_less(const SignedPermutation& a, const SignedPermutation& b);

SignedPermutation identity_element(int n);
SignedPermutation transposition(int n, int j);  // swaps slots j, j+1 (0-based)
SignedPermutation reflection_r1(int n);         // flips the sign of slot 0

std::vector<Complex> act(const SignedPermutation& g, const std::vector<Complex>& k);

// Group law matching the action: act(compose(g,h), k) = act(g, act(h, k)).
SignedPermutation compose(const SignedPermutation& g, const SignedPermutation& h);
SignedPermutation inverse(const SignedPermutation& g);

// Right multiplication in the word sense: extends g by one more generator
// acting on the slots of act(g, k).  Equals compose(w, g).
SignedPermutation right_multiply(const SignedPermutation& g, const SignedPermutation& w);

// Generator encoding for words: 0 is R1, j >= 1 is the transposition t_j of
// slots (j-1, j).  Generator order R1 < t_1 < t_2 < ... fixes canonical words.
using Word = std::vector<int>;

SignedPermutation generator_element(int n, int code);
SignedPermutation compose_word(int n, const Word& word);  // left-to-right from identity

inline constexpr int kMaxWeylRank = 8;

// All 2^n n! elements, deterministic order.
std::vector<SignedPermutation> enumerate_group(int n);
std::vector<SignedPermutation> enumerate_symmetric_subgroup(int n);  // signs all +1

// Lexicographically smallest reduced word for g (BFS over the Cayley graph).
Word word_decomposition(const SignedPermutation& g);

// All reduced (minimal-length) words for g; used by path-independence tests.
std::vector<Word> all_reduced_words(const SignedPermutation& g);

// Cosets G_m = WB_n / WB_m where WB_m acts on slots 0..m-1 (the momenta
// absorbed by the boundary).  Two elements are equivalent iff their slot
// assignments agree on slots m..n-1.
struct CosetKey {
    std::vector<std::pair<int, int>> tail;  // (perm[j], signs[j]) for j >= m
    auto operator<=>(const CosetKey&) const = default;
};

CosetKey coset_key(const SignedPermutation& g, int m);

struct CosetRepresentative {
    int n = 0;
    int m = 0;
    SignedPermutation element;  // minimal element of the coset in canonical order
};

std::vector<CosetRepresentative> coset_representatives(int n, int m);

// Minimal element of g's coset under the canonical order.
SignedPermutation canonical_coset_representative(const SignedPermutation& g, int m);

}  // namespace spinchain
