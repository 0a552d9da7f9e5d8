#pragma once

// Observed behaviour of an experiment: one joint outcome distribution
// f(A,B|a,b) per setting pair, plus the checks that only look at this table
// (validation, signal-locality, predictability, correlators, CHSH).

#include <optional>
#include <vector>

#include "bell/rational.hpp"
#include "bell/scenario.hpp"

namespace bell {

struct Phenomenon {
    Scenario scenario;
    OutcomeValues values;
    Encoding encoding = Encoding::Float64;
    // Float view, always populated. Layout [a][b][A][B] (Scenario::index).
    std::vector<double> table;
    // Exact table, populated iff encoding == Rational.
    std::vector<Rat> rtable;
    // Default comparison tolerance: 1e-9 for float tables, 0 for rational.
    double tolerance = 1e-9;

    static Phenomenon from_float(Scenario sc, OutcomeValues vals, std::vector<double> table,
                                 double tol = 1e-9);
    static Phenomenon from_rational(Scenario sc, OutcomeValues vals, std::vector<Rat> table);

    bool exact() const { return encoding == Encoding::Rational; }
    double at(int a, int b, int A, int B) const { return table[scenario.index(a, b, A, B)]; }
    const Rat& rat_at(int a, int b, int A, int B) const {
        return rtable[scenario.index(a, b, A, B)];
    }
};

// A single defect found by validation; `where` holds the indices relevant to
// `kind` (documented per kind in validate_phenomenon / validate_theory).
struct ValidationIssue {
    std::string kind;
    std::vector<int> where;
    double magnitude = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Kinds: "shape" (table length), "values-shape", "entry-range" (entry outside
// [-tol, 1+tol], where = {a,b,A,B}), "block-sum" (|sum-1| > tol, where = {a,b}).
ValidationReport validate_phenomenon(const Phenomenon& p);
ValidationReport validate_phenomenon(const Phenomenon& p, double tol);

// Worst dependence of one wing's marginal on the other wing's setting.
// wing 'B': f(B|a,b) compared across a (local_setting = b);
// wing 'A': f(A|a,b) compared across b (local_setting = a).
struct MarginalDependence {
    char wing = 'B';
    int local_setting = 0;
    int outcome = 0;
    int remote_1 = 0;
    int remote_2 = 0;
    double deviation = 0;
};

struct SignalReport {
    bool local = true;
    double max_deviation = 0;
    std::vector<MarginalDependence> witnesses;  // per-wing worst offender when > tol
};

// Marginals of one block. Block sums are within tol of 1 for valid tables, so
// these are distributions up to that slack; no renormalisation is applied.
std::vector<double> conditional_marginal_b(const Phenomenon& p, int a, int b);
std::vector<double> conditional_marginal_a(const Phenomenon& p, int a, int b);

SignalReport is_signal_local(const Phenomenon& p);
SignalReport is_signal_local(const Phenomenon& p, double tol);

// Outcome-to-outcome predictability at one setting pair: alice_to_bob means
// every conditional f(B|A,a,b) with conditioning mass f(A|a,b) > tol is within
// tol of 0 or 1. `holds()` demands both directions — they are inequivalent.
struct Predictability {
    bool alice_to_bob = false;
    bool bob_to_alice = false;
    bool holds() const { return alice_to_bob && bob_to_alice; }
};

Predictability is_predictable(const Phenomenon& p, int a, int b);
Predictability is_predictable(const Phenomenon& p, int a, int b, double tol);

// E(a,b) = sum_{A,B} value(A)·value(B)·f(A,B|a,b). Requires both wings'
// outcome values to be {+1,-1}; throws PreconditionError otherwise.
double correlator(const Phenomenon& p, int a, int b);

// S = E(a0,b0) + E(a0,b1) + E(a1,b0) - E(a1,b1).
double chsh_value(const Phenomenon& p, const ChshSettings& s);
// Exact variant for rational tables (throws PreconditionError on float ones).
Rat chsh_value_exact(const Phenomenon& p, const ChshSettings& s);

// Encoding moves. rationalize converts each entry exactly (doubles are dyadic
// rationals) and then renormalises every block exactly to sum 1; note this
// does not repair cross-block inconsistencies such as residual signalling.
Phenomenon rationalize(const Phenomenon& p);
Phenomenon to_float(const Phenomenon& p);

// ---- templated cores, shared with the theory-level checks ----------------

template <class T>
std::vector<T> marginal_b_core(const Scenario& sc, const std::vector<T>& t, int a, int b) {
    std::vector<T> out(sc.k_b, T(0));
    for (int A = 0; A < sc.k_a; ++A)
        for (int B = 0; B < sc.k_b; ++B) out[B] += t[sc.index(a, b, A, B)];
    return out;
}

template <class T>
std::vector<T> marginal_a_core(const Scenario& sc, const std::vector<T>& t, int a, int b) {
    std::vector<T> out(sc.k_a, T(0));
    for (int A = 0; A < sc.k_a; ++A)
        for (int B = 0; B < sc.k_b; ++B) out[A] += t[sc.index(a, b, A, B)];
    return out;
}

template <class T>
Predictability predictable_core(const Scenario& sc, const std::vector<T>& t, int a, int b,
                                const T& tol) {
    Predictability r;
    r.alice_to_bob = true;
    r.bob_to_alice = true;
    auto ma = marginal_a_core(sc, t, a, b);
    for (int A = 0; A < sc.k_a; ++A) {
        if (!(ma[A] > tol)) continue;  // conditioning outcome never occurs
        for (int B = 0; B < sc.k_b; ++B) {
            T cond = t[sc.index(a, b, A, B)] / ma[A];
            if (!extreme(cond, tol)) r.alice_to_bob = false;
        }
    }
    auto mb = marginal_b_core(sc, t, a, b);
    for (int B = 0; B < sc.k_b; ++B) {
        if (!(mb[B] > tol)) continue;
        for (int A = 0; A < sc.k_a; ++A) {
            T cond = t[sc.index(a, b, A, B)] / mb[B];
            if (!extreme(cond, tol)) r.bob_to_alice = false;
        }
    }
    return r;
}

// double for either scalar kind (reporting only, never decisions).
inline double rat_free_double(double x) { return x; }
inline double rat_free_double(const Rat& x) { return rat_to_double(x); }

template <class T>
SignalReport signal_core(const Scenario& sc, const std::vector<T>& t, const T& tol) {
    SignalReport rep;
    // Bob side: f(B|a,b) compared across a.
    T worst_b(0), worst_a(0);
    MarginalDependence wit_b, wit_a;
    for (int b = 0; b < sc.m_b; ++b)
        for (int B = 0; B < sc.k_b; ++B)
            for (int a1 = 0; a1 < sc.m_a; ++a1)
                for (int a2 = a1 + 1; a2 < sc.m_a; ++a2) {
                    T m1(0), m2(0);
                    for (int A = 0; A < sc.k_a; ++A) {
                        m1 += t[sc.index(a1, b, A, B)];
                        m2 += t[sc.index(a2, b, A, B)];
                    }
                    T dev = abs_of(T(m1 - m2));
                    if (dev > worst_b) {
                        worst_b = dev;
                        wit_b = {'B', b, B, a1, a2, rat_free_double(dev)};
                    }
                }
    // Alice side: f(A|a,b) compared across b.
    for (int a = 0; a < sc.m_a; ++a)
        for (int A = 0; A < sc.k_a; ++A)
            for (int b1 = 0; b1 < sc.m_b; ++b1)
                for (int b2 = b1 + 1; b2 < sc.m_b; ++b2) {
                    T m1(0), m2(0);
                    for (int B = 0; B < sc.k_b; ++B) {
                        m1 += t[sc.index(a, b1, A, B)];
                        m2 += t[sc.index(a, b2, A, B)];
                    }
                    T dev = abs_of(T(m1 - m2));
                    if (dev > worst_a) {
                        worst_a = dev;
                        wit_a = {'A', a, A, b1, b2, rat_free_double(dev)};
                    }
                }
    T worst = worst_b > worst_a ? worst_b : worst_a;
    rep.max_deviation = rat_free_double(worst);
    rep.local = !(worst > tol);
    if (worst_b > tol) rep.witnesses.push_back(wit_b);
    if (worst_a > tol) rep.witnesses.push_back(wit_a);
    return rep;
}

}  // namespace bell
