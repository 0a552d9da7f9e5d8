#include "bell/strategies.hpp"

#include <cstdlib>
#include <string>

namespace bell {

namespace {

// base^exp with overflow clamp to -1.
long long checked_pow(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > (1LL << 62) / base) return -1;
        r *= base;
    }
    return r;
}

}  // namespace

long long strategy_count(const Scenario& sc) {
    long long na = checked_pow(sc.k_a, sc.m_a);
    long long nb = checked_pow(sc.k_b, sc.m_b);
    if (na < 0 || nb < 0 || na > (1LL << 62) / nb) return -1;
    return na * nb;
}

long long strategy_cap() {
    if (const char* env = std::getenv("BELL_STRATEGY_CAP")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        throw InputError("BELL_STRATEGY_CAP must be a positive integer");
    }
    return 1000000;
}

DeterministicStrategy strategy_from_index(const Scenario& sc, long long s) {
    long long nb = checked_pow(sc.k_b, sc.m_b);
    long long ia = s / nb, ib = s % nb;
    DeterministicStrategy st;
    st.alpha.resize(sc.m_a);
    st.beta.resize(sc.m_b);
    for (int a = sc.m_a - 1; a >= 0; --a) {
        st.alpha[a] = static_cast<int>(ia % sc.k_a);
        ia /= sc.k_a;
    }
    for (int b = sc.m_b - 1; b >= 0; --b) {
        st.beta[b] = static_cast<int>(ib % sc.k_b);
        ib /= sc.k_b;
    }
    return st;
}

long long strategy_to_index(const Scenario& sc, const DeterministicStrategy& st) {
    long long ia = 0, ib = 0;
    for (int a = 0; a < sc.m_a; ++a) ia = ia * sc.k_a + st.alpha[a];
    for (int b = 0; b < sc.m_b; ++b) ib = ib * sc.k_b + st.beta[b];
    return ia * checked_pow(sc.k_b, sc.m_b) + ib;
}

std::vector<DeterministicStrategy> enumerate_strategies(const Scenario& sc, long long cap) {
    if (cap <= 0) cap = strategy_cap();
    long long n = strategy_count(sc);
    if (n < 0 || n > cap)
        throw CapError("strategy count " + (n < 0 ? std::string("overflows") : std::to_string(n)) +
                       " exceeds cap " + std::to_string(cap));
    std::vector<DeterministicStrategy> out;
    out.reserve(n);
    // Odometer enumeration; matches strategy_from_index ordering.
    DeterministicStrategy st;
    st.alpha.assign(sc.m_a, 0);
    st.beta.assign(sc.m_b, 0);
    for (long long s = 0; s < n; ++s) {
        out.push_back(st);
        // increment beta (least significant wing), carry into alpha
        int i = sc.m_b - 1;
        while (i >= 0 && ++st.beta[i] == sc.k_b) st.beta[i--] = 0;
        if (i < 0) {
            int j = sc.m_a - 1;
            while (j >= 0 && ++st.alpha[j] == sc.k_a) st.alpha[j--] = 0;
        }
    }
    return out;
}

}  // namespace bell
