#include "bell/par.hpp"

#include <cmath>

#include "bell/strategies.hpp"

#ifdef BELL_HAVE_OPENMP
#include <omp.h>
#endif

namespace bell::par {

namespace {

#ifdef BELL_HAVE_OPENMP

// Entry-parallel prediction. The inner sum runs over λ in ascending order,
// exactly as the serial λ-outer loop adds into each entry, so the float
// results agree to the bit.
template <class T>
std::vector<T> predict_table(const Scenario& sc, const std::vector<T>& mu,
                             const std::vector<T>& ker) {
    const int ts = sc.table_size();
    const int nl = static_cast<int>(mu.size());
    std::vector<T> out(static_cast<size_t>(ts));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < ts; ++i) {
        T acc{};
        for (int l = 0; l < nl; ++l)
            acc += mu[static_cast<size_t>(l)] * ker[static_cast<size_t>(l) * ts + i];
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

// λ-parallel property scan: each hidden state is scanned independently,
// then the per-λ partials merge in λ order (strict >, earliest maximiser
// kept) — the same comparisons the serial accumulation makes.
template <class T>
LambdaPartials<T> scan_all_par(const Scenario& sc, const std::vector<T>& mu,
                               const std::vector<T>& ker, const T& tol, FlMode mode) {
    const int nl = static_cast<int>(mu.size());
    const int ts = sc.table_size();
    std::vector<LambdaPartials<T>> parts(static_cast<size_t>(nl));
#pragma omp parallel for schedule(dynamic)
    for (int l = 0; l < nl; ++l) {
        if (!lambda_counts(mu[static_cast<size_t>(l)], tol)) continue;
        scan_lambda(sc, ker.data() + static_cast<size_t>(l) * ts, l, tol, mode,
                    parts[static_cast<size_t>(l)]);
    }
    LambdaPartials<T> acc;
    for (int l = 0; l < nl; ++l) acc.merge(parts[static_cast<size_t>(l)]);
    return acc;
}

#endif  // BELL_HAVE_OPENMP

}  // namespace

Phenomenon predict(const Theory& t) {
#ifdef BELL_HAVE_OPENMP
    if (t.exact())
        return Phenomenon::from_rational(t.scenario, t.values,
                                         predict_table<Rat>(t.scenario, t.rmu, t.rkernel));
    return Phenomenon::from_float(t.scenario, t.values,
                                  predict_table<double>(t.scenario, t.mu, t.kernel), t.tolerance);
#else
    return bell::predict(t);
#endif
}

PropertyVector classify(const Theory& t) { return par::classify(t, t.tolerance, FlMode::Strong); }

PropertyVector classify(const Theory& t, double tol, FlMode mode) {
#ifdef BELL_HAVE_OPENMP
    PropertyVector v;
    if (t.exact() && tol == 0.0) {
        auto acc = scan_all_par<Rat>(t.scenario, t.rmu, t.rkernel, Rat(0), mode);
        Rat rtol(0);
        v.determinism = finish_entry(acc.det, rtol);
        v.locality = finish_entry(acc.loc, rtol);
        v.factorizability = finish_factorizability(acc.blockfactor, acc.loc, rtol);
        v.jarrett_completeness = finish_entry(acc.jc, rtol);
        v.fragile_locality = finish_entry(acc.fl, rtol);
    } else {
        auto acc = scan_all_par<double>(t.scenario, t.mu, t.kernel, tol, mode);
        v.determinism = finish_entry(acc.det, tol);
        v.locality = finish_entry(acc.loc, tol);
        v.factorizability = finish_factorizability(acc.blockfactor, acc.loc, tol);
        v.jarrett_completeness = finish_entry(acc.jc, tol);
        v.fragile_locality = finish_entry(acc.fl, tol);
    }
    v.fl_mode = mode;
    v.tol = tol;
    cross_check_properties(v);
    return v;
#else
    return bell::classify(t, tol, mode);
#endif
}

ModelCheck verify_model(const LhvModel& m, const Phenomenon& p) {
    return par::verify_model(m, p, p.tolerance);
}

ModelCheck verify_model(const LhvModel& m, const Phenomenon& p, double tol) {
#ifdef BELL_HAVE_OPENMP
    if (!m.scenario.same_shape(p.scenario))
        throw InputError("model and phenomenon scenarios have different shapes");
    const Scenario& sc = p.scenario;
    const int ts = sc.table_size();
    const bool exact = m.encoding == Encoding::Rational && p.exact() && tol == 0.0;
    ModelCheck chk;
    // Per-entry deviations in parallel, then the serial worst-entry scan in
    // index order — same scalar kind as the reference, so the winning entry
    // (and its tie-breaking) cannot drift.
    if (exact) {
        std::vector<Rat> dev(static_cast<size_t>(ts));
#pragma omp parallel for schedule(static) collapse(2)
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b)
                for (int A = 0; A < sc.k_a; ++A)
                    for (int B = 0; B < sc.k_b; ++B) {
                        Rat s(0);
                        for (const auto& ws : m.support)
                            if (ws.strategy.alpha[a] == A && ws.strategy.beta[b] == B)
                                s += ws.rweight;
                        dev[static_cast<size_t>(sc.index(a, b, A, B))] =
                            abs_of(Rat(s - p.rat_at(a, b, A, B)));
                    }
        Rat worst(0);
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b)
                for (int A = 0; A < sc.k_a; ++A)
                    for (int B = 0; B < sc.k_b; ++B) {
                        const Rat& d = dev[static_cast<size_t>(sc.index(a, b, A, B))];
                        if (d > worst) {
                            worst = d;
                            chk.where = {a, b, A, B};
                        }
                    }
        chk.max_deviation = rat_to_double(worst);
        chk.ok = worst == 0;
        return chk;
    }
    std::vector<double> dev(static_cast<size_t>(ts));
#pragma omp parallel for schedule(static) collapse(2)
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b)
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) {
                    double s = 0;
                    for (const auto& ws : m.support)
                        if (ws.strategy.alpha[a] == A && ws.strategy.beta[b] == B)
                            s += ws.weight;
                    dev[static_cast<size_t>(sc.index(a, b, A, B))] =
                        std::fabs(s - p.at(a, b, A, B));
                }
    double worst = 0;
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b)
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) {
                    const double d = dev[static_cast<size_t>(sc.index(a, b, A, B))];
                    if (d > worst) {
                        worst = d;
                        chk.where = {a, b, A, B};
                    }
                }
    chk.max_deviation = worst;
    chk.ok = worst <= tol;
    return chk;
#else
    return bell::verify_model(m, p, tol);
#endif
}

double local_bound(const Scenario& sc, const std::vector<double>& coeffs, long long cap) {
#ifdef BELL_HAVE_OPENMP
    if (coeffs.size() != static_cast<size_t>(sc.table_size()))
        throw InputError("coefficient tensor does not match the scenario");
    if (cap <= 0) cap = strategy_cap();
    const long long n = strategy_count(sc);
    if (n < 0 || n > cap)
        throw CapError("strategy enumeration for the local bound exceeds the cap");
    // Chunked max over strategy indices. A max is order-independent, but we
    // still resolve ties toward the smallest strategy index so the winner
    // matches the serial enumeration's.
    const int nthreads = omp_get_max_threads();
    std::vector<double> best(static_cast<size_t>(nthreads), 0.0);
    std::vector<long long> at(static_cast<size_t>(nthreads), -1);
#pragma omp parallel
    {
        const int tid = omp_get_thread_num();
        double b = 0;
        long long bi = -1;
        DeterministicStrategy st;
#pragma omp for schedule(static)
        for (long long s = 0; s < n; ++s) {
            st = strategy_from_index(sc, s);
            const double v = strategy_value(sc, coeffs, st);
            if (bi < 0 || v > b) {
                b = v;
                bi = s;
            }
        }
        best[static_cast<size_t>(tid)] = b;
        at[static_cast<size_t>(tid)] = bi;
    }
    double out = 0;
    long long oi = -1;
    for (int i = 0; i < nthreads; ++i) {
        if (at[static_cast<size_t>(i)] < 0) continue;
        if (oi < 0 || best[static_cast<size_t>(i)] > out ||
            (best[static_cast<size_t>(i)] == out && at[static_cast<size_t>(i)] < oi)) {
            out = best[static_cast<size_t>(i)];
            oi = at[static_cast<size_t>(i)];
        }
    }
    return out;
#else
    return local_bound_of(sc, coeffs, cap);
#endif
}

}  // namespace bell::par
