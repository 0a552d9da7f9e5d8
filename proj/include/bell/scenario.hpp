#pragma once

// Experiment geometry: how many settings and outcomes each wing has, what
// numeric value each outcome index carries, and which setting quadruple a
// CHSH combination reads from.

#include <string>
#include <vector>

#include "bell/rational.hpp"

namespace bell {

// Two-wing measurement scenario. Alice chooses among m_a settings with k_a
// outcomes; Bob m_b settings with k_b outcomes. `context` is a free-text
// label for the preparation (carried through I/O, ignored by the math).
struct Scenario {
    int m_a = 0;
    int m_b = 0;
    int k_a = 0;
    int k_b = 0;
    std::string context;

    bool same_shape(const Scenario& o) const {
        return m_a == o.m_a && m_b == o.m_b && k_a == o.k_a && k_b == o.k_b;
    }
    // Flat index into a joint table laid out [a][b][A][B].
    int index(int a, int b, int A, int B) const {
        return ((a * m_b + b) * k_a + A) * k_b + B;
    }
    int block_count() const { return m_a * m_b; }
    int block_size() const { return k_a * k_b; }
    int table_size() const { return m_a * m_b * k_a * k_b; }

    void check_valid() const {
        if (m_a < 1 || m_b < 1 || k_a < 1 || k_b < 1)
            throw InputError("scenario needs at least one setting and one outcome per wing");
    }
};

// Numeric value attached to each outcome index, per wing. Correlators and
// CHSH need these to be exactly {+1, -1} in some order.
struct OutcomeValues {
    std::vector<double> alice;
    std::vector<double> bob;

    static OutcomeValues pm_one(int k_a, int k_b) {
        OutcomeValues v;
        v.alice.resize(k_a);
        v.bob.resize(k_b);
        for (int i = 0; i < k_a; ++i) v.alice[i] = (i == 0 ? 1.0 : (i == 1 ? -1.0 : 0.0));
        for (int i = 0; i < k_b; ++i) v.bob[i] = (i == 0 ? 1.0 : (i == 1 ? -1.0 : 0.0));
        return v;
    }
    bool matches(const Scenario& sc) const {
        return static_cast<int>(alice.size()) == sc.k_a && static_cast<int>(bob.size()) == sc.k_b;
    }
    // True when a wing's values are {+1,-1} in some order (two outcomes).
    static bool is_pm_one(const std::vector<double>& v) {
        return v.size() == 2 && ((v[0] == 1.0 && v[1] == -1.0) || (v[0] == -1.0 && v[1] == 1.0));
    }
};

// Which setting indices a CHSH combination uses:
//   S = E(a0,b0) + E(a0,b1) + E(a1,b0) - E(a1,b1).
struct ChshSettings {
    int a0 = 0;
    int a1 = 1;
    int b0 = 0;
    int b1 = 1;

    void check_against(const Scenario& sc) const {
        auto in = [](int i, int n) { return i >= 0 && i < n; };
        if (!in(a0, sc.m_a) || !in(a1, sc.m_a) || !in(b0, sc.m_b) || !in(b1, sc.m_b))
            throw InputError("CHSH setting index out of range");
        if (a0 == a1 || b0 == b1)
            throw InputError("CHSH needs two distinct settings per wing");
    }
};

}  // namespace bell
