#pragma once

// Hidden-variable theories over a scenario: a weight mu(λ) per hidden state
// and a response kernel P(A,B|a,b,λ) per hidden state, plus the five
// structural properties a theory can have or lack — determinism, locality,
// factorizability, Jarrett completeness, fragile locality — with witnessed,
// three-valued verdicts and consistency guards between them.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "bell/phenomenon.hpp"
#include "bell/rational.hpp"
#include "bell/scenario.hpp"

namespace bell {

struct Theory {
    Scenario scenario;
    OutcomeValues values;
    std::vector<std::string> lambdas;  // labels; size = number of hidden states
    Encoding encoding = Encoding::Float64;
    // Weights mu[λ] and kernels laid out λ-major: kernel[λ * table_size + index(a,b,A,B)].
    std::vector<double> mu;
    std::vector<double> kernel;
    std::vector<Rat> rmu;
    std::vector<Rat> rkernel;
    double tolerance = 1e-9;

    static Theory from_float(Scenario sc, OutcomeValues vals, std::vector<std::string> lambdas,
                             std::vector<double> mu, std::vector<double> kernel, double tol = 1e-9);
    static Theory from_rational(Scenario sc, OutcomeValues vals, std::vector<std::string> lambdas,
                                std::vector<Rat> mu, std::vector<Rat> kernel);

    bool exact() const { return encoding == Encoding::Rational; }
    int n_lambda() const { return static_cast<int>(mu.size()); }
    double k_at(int l, int a, int b, int A, int B) const {
        return kernel[static_cast<size_t>(l) * scenario.table_size() + scenario.index(a, b, A, B)];
    }
    const Rat& rk_at(int l, int a, int b, int A, int B) const {
        return rkernel[static_cast<size_t>(l) * scenario.table_size() + scenario.index(a, b, A, B)];
    }
};

// Kinds: "shape", "values-shape", "weight-range" ({λ}), "weight-sum" ({}),
// "entry-range" ({λ,a,b,A,B}), "block-sum" ({λ,a,b}).
ValidationReport validate_theory(const Theory& t);
ValidationReport validate_theory(const Theory& t, double tol);

// The prediction map: f(A,B|a,b) = sum_λ mu(λ)·P(A,B|a,b,λ). Exact when the
// theory is rational; inherits scenario, values and default tolerance.
Phenomenon predict(const Theory& t);

struct ReproductionReport {
    bool ok = false;
    double max_deviation = 0;
    std::vector<int> where;  // {a,b,A,B} of the worst entry
};

// Entrywise comparison of predict(t) against p; throws InputError on shape
// mismatch. Exact when both sides are rational and tol is 0.
ReproductionReport reproduces(const Theory& t, const Phenomenon& p);
ReproductionReport reproduces(const Theory& t, const Phenomenon& p, double tol);

// ---- property verdicts ----------------------------------------------------

enum class Status { Holds, Fails, Vacuous };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Holds: return "holds";
        case Status::Fails: return "fails";
        default: return "vacuous";
    }
}

struct Witness {
    std::string note;        // which clause produced it
    std::vector<int> where;  // indices, clause-specific (λ first where present)
    double deviation = 0;
};

struct PropertyEntry {
    Status status = Status::Vacuous;
    long comparisons = 0;
    double max_deviation = 0;
    std::optional<Witness> witness;
    // A vacuously-true property counts as satisfied; only a witnessed
    // violation does not.
    bool satisfied() const { return status != Status::Fails; }
};

// Two readings of fragile locality. Strong (default): an extreme one-wing
// marginal must take that same value for every remote setting. Weak: only
// pairs of remote settings whose marginals are both extreme must agree.
enum class FlMode { Strong, Weak };

struct PropertyVector {
    PropertyEntry determinism;
    PropertyEntry locality;
    PropertyEntry factorizability;
    PropertyEntry jarrett_completeness;
    PropertyEntry fragile_locality;
    FlMode fl_mode = FlMode::Strong;
    double tol = 1e-9;
};

PropertyEntry is_deterministic(const Theory& t);
PropertyEntry is_deterministic(const Theory& t, double tol);
PropertyEntry is_local(const Theory& t);
PropertyEntry is_local(const Theory& t, double tol);
PropertyEntry is_factorizable(const Theory& t);
PropertyEntry is_factorizable(const Theory& t, double tol);
PropertyEntry is_jarrett_complete(const Theory& t);
PropertyEntry is_jarrett_complete(const Theory& t, double tol);
PropertyEntry is_fragile_local(const Theory& t, FlMode mode = FlMode::Strong);
PropertyEntry is_fragile_local(const Theory& t, double tol, FlMode mode);

// All five properties at once, then three live consistency guards on the
// satisfied-verdicts: F <=> L and JC; D => JC; L => FL. A guard violation
// throws InternalInconsistency — it can only mean a checker bug (or, in
// float mode, an input sitting within tolerance of a property boundary).
PropertyVector classify(const Theory& t);
PropertyVector classify(const Theory& t, double tol, FlMode mode = FlMode::Strong);

// The consistency guards on their own, for alternative classify drivers.
void cross_check_properties(const PropertyVector& v);

// E(a,b) both directly on predict(t) and through the per-λ decomposition
// sum_λ mu(λ)·Abar(a,λ)·Bbar(b,λ), which is sound only for factorizable
// theories (PreconditionError otherwise). The two routes are asserted equal
// within max(tol, 1e-12); disagreement throws InternalInconsistency.
struct AveragedCorrelator {
    double value = 0;             // correlator(predict(t), a, b)
    double decomposed_value = 0;  // sum_λ mu·Abar·Bbar
    std::vector<double> abar;     // per λ
    std::vector<double> bbar;     // per λ
};

AveragedCorrelator averaged_correlator(const Theory& t, int a, int b);
AveragedCorrelator averaged_correlator(const Theory& t, int a, int b, double tol);

// ---- templated scan cores (shared by serial and parallel drivers) --------

template <class T>
struct PropertyPartial {
    T dev{0};
    long comparisons = 0;
    bool has_witness = false;
    Witness witness;

    void count(long n = 1) { comparisons += n; }
    void offer(const T& d, std::initializer_list<int> where, const char* note) {
        ++comparisons;
        if (!has_witness || d > dev) {
            dev = d;
            witness.note = note;
            witness.where = where;
            witness.deviation = rat_free_double(d);
            has_witness = true;
        }
    }
    // Merge another partial scanned later in λ order (strict > keeps the
    // earliest maximiser, so serial and parallel drivers agree exactly).
    void merge(const PropertyPartial& o) {
        comparisons += o.comparisons;
        if (o.has_witness && (!has_witness || o.dev > dev)) {
            dev = o.dev;
            witness = o.witness;
            has_witness = true;
        }
    }
};

template <class T>
struct LambdaPartials {
    PropertyPartial<T> det, loc, blockfactor, jc, fl;
    void merge(const LambdaPartials& o) {
        det.merge(o.det);
        loc.merge(o.loc);
        blockfactor.merge(o.blockfactor);
        jc.merge(o.jc);
        fl.merge(o.fl);
    }
};

// Scan one hidden state's kernel (K points at its [a][b][A][B] table).
// Collects, for every property at once, the worst deviation and a witness.
template <class T>
void scan_lambda(const Scenario& sc, const T* K, int l, const T& tol, FlMode fl_mode,
                 LambdaPartials<T>& out) {
    auto at = [&](int a, int b, int A, int B) -> const T& { return K[sc.index(a, b, A, B)]; };
    const int ka = sc.k_a, kb = sc.k_b, ma = sc.m_a, mb = sc.m_b;

    // Block marginals P(A|a,b,λ), P(B|a,b,λ).
    std::vector<T> mA(static_cast<size_t>(ma) * mb * ka, T(0));
    std::vector<T> mB(static_cast<size_t>(ma) * mb * kb, T(0));
    auto mAi = [&](int a, int b, int A) -> T& { return mA[(a * mb + b) * ka + A]; };
    auto mBi = [&](int a, int b, int B) -> T& { return mB[(a * mb + b) * kb + B]; };
    for (int a = 0; a < ma; ++a)
        for (int b = 0; b < mb; ++b)
            for (int A = 0; A < ka; ++A)
                for (int B = 0; B < kb; ++B) {
                    const T& x = at(a, b, A, B);
                    mAi(a, b, A) += x;
                    mBi(a, b, B) += x;
                }

    // Determinism: every kernel entry within tol of 0 or 1.
    for (int a = 0; a < ma; ++a)
        for (int b = 0; b < mb; ++b)
            for (int A = 0; A < ka; ++A)
                for (int B = 0; B < kb; ++B) {
                    const T& x = at(a, b, A, B);
                    T d0 = abs_of(x);
                    T d1 = abs_of(T(x - T(1)));
                    out.det.offer(d0 < d1 ? d0 : d1, {l, a, b, A, B}, "kernel entry not 0/1");
                }

    // Locality: one wing's marginal must not move with the other wing's
    // setting. Bob clause compares across a; Alice clause across b.
    for (int b = 0; b < mb; ++b)
        for (int B = 0; B < kb; ++B)
            for (int a1 = 0; a1 < ma; ++a1)
                for (int a2 = a1 + 1; a2 < ma; ++a2)
                    out.loc.offer(abs_of(T(mBi(a1, b, B) - mBi(a2, b, B))), {l, b, B, a1, a2},
                                  "bob marginal depends on alice setting");
    for (int a = 0; a < ma; ++a)
        for (int A = 0; A < ka; ++A)
            for (int b1 = 0; b1 < mb; ++b1)
                for (int b2 = b1 + 1; b2 < mb; ++b2)
                    out.loc.offer(abs_of(T(mAi(a, b1, A) - mAi(a, b2, A))), {l, a, A, b1, b2},
                                  "alice marginal depends on bob setting");

    // Block factorisation: joint equals the product of its own marginals.
    for (int a = 0; a < ma; ++a)
        for (int b = 0; b < mb; ++b)
            for (int A = 0; A < ka; ++A)
                for (int B = 0; B < kb; ++B)
                    out.blockfactor.offer(
                        abs_of(T(at(a, b, A, B) - mAi(a, b, A) * mBi(a, b, B))), {l, a, b, A, B},
                        "joint is not the product of its marginals");

    // Jarrett completeness: conditioning on the co-wing outcome must not
    // move a marginal. Only conditioning outcomes with mass > tol count.
    for (int a = 0; a < ma; ++a)
        for (int b = 0; b < mb; ++b) {
            for (int A = 0; A < ka; ++A) {
                if (!(mAi(a, b, A) > tol)) continue;
                for (int B = 0; B < kb; ++B)
                    out.jc.offer(abs_of(T(at(a, b, A, B) / mAi(a, b, A) - mBi(a, b, B))),
                                 {l, a, b, A, B}, "bob marginal moves when conditioned on A");
            }
            for (int B = 0; B < kb; ++B) {
                if (!(mBi(a, b, B) > tol)) continue;
                for (int A = 0; A < ka; ++A)
                    out.jc.offer(abs_of(T(at(a, b, A, B) / mBi(a, b, B) - mAi(a, b, A))),
                                 {l, a, b, A, B}, "alice marginal moves when conditioned on B");
            }
        }

    // Fragile locality: extreme marginals must be remote-setting-independent
    // (strong) or at least agree with other extreme ones (weak).
    if (fl_mode == FlMode::Strong) {
        for (int b = 0; b < mb; ++b)
            for (int B = 0; B < kb; ++B)
                for (int a = 0; a < ma; ++a) {
                    if (!extreme(mBi(a, b, B), tol)) continue;
                    T v = extreme_round(mBi(a, b, B));
                    for (int a2 = 0; a2 < ma; ++a2)
                        out.fl.offer(abs_of(T(mBi(a2, b, B) - v)), {l, b, B, a, a2},
                                     "extreme bob marginal depends on alice setting");
                }
        for (int a = 0; a < ma; ++a)
            for (int A = 0; A < ka; ++A)
                for (int b = 0; b < mb; ++b) {
                    if (!extreme(mAi(a, b, A), tol)) continue;
                    T v = extreme_round(mAi(a, b, A));
                    for (int b2 = 0; b2 < mb; ++b2)
                        out.fl.offer(abs_of(T(mAi(a, b2, A) - v)), {l, a, A, b, b2},
                                     "extreme alice marginal depends on bob setting");
                }
    } else {
        for (int b = 0; b < mb; ++b)
            for (int B = 0; B < kb; ++B)
                for (int a1 = 0; a1 < ma; ++a1)
                    for (int a2 = a1 + 1; a2 < ma; ++a2) {
                        if (!extreme(mBi(a1, b, B), tol) || !extreme(mBi(a2, b, B), tol)) continue;
                        out.fl.offer(abs_of(T(mBi(a1, b, B) - mBi(a2, b, B))), {l, b, B, a1, a2},
                                     "two extreme bob marginals disagree");
                    }
        for (int a = 0; a < ma; ++a)
            for (int A = 0; A < ka; ++A)
                for (int b1 = 0; b1 < mb; ++b1)
                    for (int b2 = b1 + 1; b2 < mb; ++b2) {
                        if (!extreme(mAi(a, b1, A), tol) || !extreme(mAi(a, b2, A), tol)) continue;
                        out.fl.offer(abs_of(T(mAi(a, b1, A) - mAi(a, b2, A))), {l, a, A, b1, b2},
                                     "two extreme alice marginals disagree");
                    }
    }
}

// Hidden states with weight <= tol never occur and are skipped by every scan.
template <class T>
bool lambda_counts(const T& mu_l, const T& tol) {
    return mu_l > tol;
}

template <class T>
PropertyEntry finish_entry(const PropertyPartial<T>& p, const T& tol) {
    PropertyEntry e;
    e.comparisons = p.comparisons;
    e.max_deviation = p.has_witness ? rat_free_double(p.dev) : 0.0;
    if (p.comparisons == 0)
        e.status = Status::Vacuous;
    else if (p.has_witness && p.dev > tol) {
        e.status = Status::Fails;
        e.witness = p.witness;
    } else
        e.status = Status::Holds;
    return e;
}

// Factorizability = block factorisation AND locality (so the marginals in
// the product are legitimately setting-local).
template <class T>
PropertyEntry finish_factorizability(const PropertyPartial<T>& blockfactor,
                                     const PropertyPartial<T>& loc, const T& tol) {
    PropertyEntry bf = finish_entry(blockfactor, tol);
    PropertyEntry lo = finish_entry(loc, tol);
    PropertyEntry e;
    e.comparisons = bf.comparisons + lo.comparisons;
    e.max_deviation = std::max(bf.max_deviation, lo.max_deviation);
    if (bf.status == Status::Vacuous && lo.status == Status::Vacuous) {
        e.status = Status::Vacuous;
        return e;
    }
    if (bf.status == Status::Fails || lo.status == Status::Fails) {
        e.status = Status::Fails;
        // Report the worse of the failing clauses.
        if (bf.status == Status::Fails &&
            (lo.status != Status::Fails || bf.max_deviation >= lo.max_deviation))
            e.witness = bf.witness;
        else
            e.witness = lo.witness;
    } else
        e.status = Status::Holds;
    return e;
}

}  // namespace bell
