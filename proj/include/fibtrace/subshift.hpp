#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace fibtrace {

using TransitionMatrix = std::array<std::array<int, 6>, 6>;

// 6-symbol Markov chain of the V = 0 factor; symbols are 1..6
const TransitionMatrix& subshift_matrix();

bool subshift_admissible(const std::vector<int>& word);

struct SubshiftCounts {
    int n = 0;
    std::uint64_t word_count = 0;
    std::uint64_t periodic_count = 0;  // trace of the n-th matrix power
};

SubshiftCounts subshift_counts(int n);

// depth-first enumeration of admissible words, the cross-check for the matrix powers
std::uint64_t enumerate_words(int n);
std::uint64_t enumerate_periodic(int n);

// power iteration, relative tolerance 1e-10
double subshift_spectral_radius();
double subshift_entropy();

// largest real root of det(xI - M) = x^6 - 2x^4 - 2x - 1, by bisection
double subshift_char_root();

// log(W(n) / W(n-1)); converges to the entropy much faster than log(W(n)) / n
double entropy_from_words(int n);

}  // namespace fibtrace
