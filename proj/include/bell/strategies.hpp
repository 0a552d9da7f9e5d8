#pragma once

// Deterministic single-wing response functions and their joint enumeration.
// Strategy s is a pair (alpha: settings->outcomes for Alice, beta for Bob);
// the joint behaviour it induces is D_s(A,B|a,b) = [A=alpha(a)][B=beta(b)].

#include <cstdint>
#include <vector>

#include "bell/scenario.hpp"

namespace bell {

struct DeterministicStrategy {
    std::vector<int> alpha;  // size m_a, values in [0, k_a)
    std::vector<int> beta;   // size m_b, values in [0, k_b)

    bool operator==(const DeterministicStrategy&) const = default;
};

// k_a^m_a * k_b^m_b, or -1 if it overflows 63 bits.
long long strategy_count(const Scenario& sc);

// Default strategy cap, overridable through the BELL_STRATEGY_CAP
// environment variable. Guards every enumeration in the library.
long long strategy_cap();

// Strategy for flat index s in lexicographic order: Alice's function varies
// slowest, setting 0 is the most significant digit on each wing.
DeterministicStrategy strategy_from_index(const Scenario& sc, long long s);
long long strategy_to_index(const Scenario& sc, const DeterministicStrategy& st);

// All strategies in index order; CapError if the count exceeds cap (<=0
// means use strategy_cap()).
std::vector<DeterministicStrategy> enumerate_strategies(const Scenario& sc, long long cap = 0);

// Value of a coefficient tensor c[a][b][A][B] against one strategy:
// sum_{a,b} c(a, b, alpha(a), beta(b)).
template <class T>
T strategy_value(const Scenario& sc, const std::vector<T>& coeffs,
                 const DeterministicStrategy& st) {
    T v(0);
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b) v += coeffs[sc.index(a, b, st.alpha[a], st.beta[b])];
    return v;
}

}  // namespace bell
