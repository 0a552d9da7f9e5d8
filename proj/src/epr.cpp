#include "bell/epr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bell {

namespace {

// Bob-wing marginal of one λ-kernel at (a,b): P(B|a,b,λ).
template <typename T, typename K>
T kern_marg_b(const K& k, const Scenario& s, int lam, int a, int b, int B) {
    T x{};
    for (int A = 0; A < s.k_a; ++A) x += k(lam, a, b, A, B);
    return x;
}

template <typename T, typename K>
T kern_marg_a(const K& k, const Scenario& s, int lam, int a, int b, int A) {
    T x{};
    for (int B = 0; B < s.k_b; ++B) x += k(lam, a, b, A, B);
    return x;
}

// Shared Rep scan. `bob_wing` selects whose quantity is examined; `fixed`
// is that wing's setting. The marginal must be extreme and must not move
// with the remote setting, for every positive-weight λ.
template <typename T, typename M, typename K>
RepCheck rep_core(const Scenario& s, int n_lambda, const M& mu, const K& k, bool bob_wing,
                  int fixed, const T& tol) {
    RepCheck r;
    r.ok = true;
    bool any = false;
    const int n_remote = bob_wing ? s.m_a : s.m_b;
    const int n_out = bob_wing ? s.k_b : s.k_a;
    for (int lam = 0; lam < n_lambda; ++lam) {
        if (!(mu(lam) > tol)) continue;
        any = true;
        for (int O = 0; O < n_out; ++O) {
            T ref{};
            for (int rem = 0; rem < n_remote; ++rem) {
                const int a = bob_wing ? rem : fixed;
                const int b = bob_wing ? fixed : rem;
                const T m = bob_wing ? kern_marg_b<T>(k, s, lam, a, b, O)
                                     : kern_marg_a<T>(k, s, lam, a, b, O);
                if (!extreme(m, tol)) {
                    T d = m;
                    if (d > T(1) - d) d = T(1) - d;
                    Witness w;
                    w.note = "marginal not extreme";
                    w.where = {lam, a, b, O};
                    w.deviation = rat_free_double(d);
                    if (!r.witness || w.deviation > r.witness->deviation) r.witness = w;
                    r.ok = false;
                }
                if (rem == 0) {
                    ref = m;
                } else {
                    const T d = abs_of(T(m - ref));
                    if (d > tol) {
                        Witness w;
                        w.note = "marginal depends on remote setting";
                        w.where = {lam, a, b, O};
                        w.deviation = rat_free_double(d);
                        if (!r.witness || w.deviation > r.witness->deviation) r.witness = w;
                        r.ok = false;
                    }
                }
            }
        }
    }
    if (!any) {
        r.vacuous = true;
        r.ok = true;
    }
    return r;
}

RepCheck rep_dispatch(const Theory& t, bool bob_wing, int fixed, double tol) {
    const int n_local = bob_wing ? t.scenario.m_b : t.scenario.m_a;
    if (fixed < 0 || fixed >= n_local)
        throw InputError("setting index out of range for Rep check");
    if (t.exact() && tol == 0.0) {
        return rep_core<Rat>(
            t.scenario, t.n_lambda(), [&](int l) { return t.rmu[l]; },
            [&](int l, int a, int b, int A, int B) { return t.rk_at(l, a, b, A, B); }, bob_wing,
            fixed, Rat(0));
    }
    return rep_core<double>(
        t.scenario, t.n_lambda(), [&](int l) { return t.mu[l]; },
        [&](int l, int a, int b, int A, int B) { return t.k_at(l, a, b, A, B); }, bob_wing, fixed,
        tol);
}

}  // namespace

RepCheck rep_in_theory(const Theory& t, int b, double tol) {
    return rep_dispatch(t, true, b, tol);
}

RepCheck rep_in_theory_alice(const Theory& t, int a, double tol) {
    return rep_dispatch(t, false, a, tol);
}

EprElement epr_element(const Phenomenon& p, int b, double tol) {
    if (b < 0 || b >= p.scenario.m_b) throw InputError("Bob setting out of range");
    EprElement e;
    for (int a = 0; a < p.scenario.m_a; ++a) {
        if (is_predictable(p, a, b, tol).alice_to_bob) {
            e.element = true;
            e.witness_remote = a;
            return e;
        }
    }
    return e;
}

EprElement epr_element_alice(const Phenomenon& p, int a, double tol) {
    if (a < 0 || a >= p.scenario.m_a) throw InputError("Alice setting out of range");
    EprElement e;
    for (int b = 0; b < p.scenario.m_b; ++b) {
        if (is_predictable(p, a, b, tol).bob_to_alice) {
            e.element = true;
            e.witness_remote = b;
            return e;
        }
    }
    return e;
}

EprReport check_completeness_implication(const Theory& t, const Phenomenon& p, double tol) {
    if (!t.scenario.same_shape(p.scenario))
        throw InputError("theory and phenomenon scenarios differ");
    const ReproductionReport rr = reproduces(t, p, tol);
    if (!rr.ok)
        throw PreconditionError("theory does not reproduce the phenomenon (max deviation " +
                                std::to_string(rr.max_deviation) + ")");

    EprReport rep;
    for (int a = 0; a < p.scenario.m_a; ++a)
        for (int b = 0; b < p.scenario.m_b; ++b) {
            const Predictability pr = is_predictable(p, a, b, tol);
            rep.predictability.push_back({a, b, pr.alice_to_bob, pr.bob_to_alice});
        }

    bool any_element = false;
    bool all_ok = true;
    for (int b = 0; b < p.scenario.m_b; ++b) {
        EprChainEntry e;
        e.wing = 'B';
        e.setting = b;
        const EprElement el = epr_element(p, b, tol);
        e.element = el.element;
        e.witness_remote = el.witness_remote;
        if (el.element) {
            any_element = true;
            const RepCheck rc = rep_in_theory(t, b, tol);
            e.rep_checked = true;
            e.rep_ok = rc.ok;
            e.rep_witness = rc.witness;
            if (!rc.ok) all_ok = false;
        }
        rep.chain.push_back(e);
    }
    for (int a = 0; a < p.scenario.m_a; ++a) {
        EprChainEntry e;
        e.wing = 'A';
        e.setting = a;
        const EprElement el = epr_element_alice(p, a, tol);
        e.element = el.element;
        e.witness_remote = el.witness_remote;
        if (el.element) {
            any_element = true;
            const RepCheck rc = rep_in_theory_alice(t, a, tol);
            e.rep_checked = true;
            e.rep_ok = rc.ok;
            e.rep_witness = rc.witness;
            if (!rc.ok) all_ok = false;
        }
        rep.chain.push_back(e);
    }
    rep.vacuous = !any_element;
    rep.pass = all_ok;
    return rep;
}

namespace {

// Core of the conditional-certainty propagation check, one direction.
// For every extreme f(B|A,a,b): every λ alive after conditioning on A must
// carry an a-independent extreme Bob marginal agreeing with that value
// (the `bob_wing` flag transposes everything for the Alice direction).
template <typename T, typename F, typename M, typename K>
void jcfl_direction(const Scenario& s, const F& f, int n_lambda, const M& mu, const K& k,
                    bool bob_wing, const T& tol, JcflCheck& out) {
    const int n_loc = bob_wing ? s.k_a : s.k_b;    // conditioned outcome count
    const int n_rem = bob_wing ? s.k_b : s.k_a;    // predicted outcome count
    const int n_rset = bob_wing ? s.m_a : s.m_b;   // remote settings to sweep
    for (int a = 0; a < s.m_a; ++a)
        for (int b = 0; b < s.m_b; ++b)
            for (int C = 0; C < n_loc; ++C) {
                // Conditioning mass at the phenomenon level.
                T mass{};
                for (int O = 0; O < n_rem; ++O) {
                    const int A = bob_wing ? C : O;
                    const int B = bob_wing ? O : C;
                    mass += f(a, b, A, B);
                }
                if (!(mass > tol)) continue;
                for (int O = 0; O < n_rem; ++O) {
                    const int A = bob_wing ? C : O;
                    const int B = bob_wing ? O : C;
                    const T cond = f(a, b, A, B) / mass;
                    if (!extreme(cond, tol)) continue;
                    out.antecedents += 1;
                    const T v = cond > T(1) - cond ? T(1) : T(0);
                    for (int lam = 0; lam < n_lambda; ++lam) {
                        if (!(mu(lam) > tol)) continue;
                        const T lmass = bob_wing ? kern_marg_a<T>(k, s, lam, a, b, C)
                                                 : kern_marg_b<T>(k, s, lam, a, b, C);
                        if (!(lmass > tol)) continue;
                        for (int rem = 0; rem < n_rset; ++rem) {
                            const int ra = bob_wing ? rem : a;
                            const int rb = bob_wing ? b : rem;
                            const T m = bob_wing ? kern_marg_b<T>(k, s, lam, ra, rb, O)
                                                 : kern_marg_a<T>(k, s, lam, ra, rb, O);
                            const T d = abs_of(T(m - v));
                            if (d > tol) {
                                Witness w;
                                w.note = bob_wing ? "Bob marginal not pinned by certainty"
                                                  : "Alice marginal not pinned by certainty";
                                w.where = {lam, ra, rb, C, O};
                                w.deviation = rat_free_double(d);
                                out.failures.push_back(w);
                            }
                        }
                    }
                }
            }
}

}  // namespace

JcflCheck check_jcfl_implies_rep(const Theory& t, const Phenomenon& p, double tol) {
    if (!t.scenario.same_shape(p.scenario))
        throw PreconditionError("theory and phenomenon scenarios differ");
    if (!is_jarrett_complete(t, tol).satisfied())
        throw PreconditionError("theory is not Jarrett-complete");
    if (!is_fragile_local(t, tol, FlMode::Strong).satisfied())
        throw PreconditionError("theory is not fragile-local");
    if (!reproduces(t, p, tol).ok)
        throw PreconditionError("theory does not reproduce the phenomenon");

    JcflCheck out;
    const Scenario& s = t.scenario;
    if (t.exact() && p.exact() && tol == 0.0) {
        const auto f = [&](int a, int b, int A, int B) { return p.rat_at(a, b, A, B); };
        const auto mu = [&](int l) { return t.rmu[l]; };
        const auto k = [&](int l, int a, int b, int A, int B) { return t.rk_at(l, a, b, A, B); };
        jcfl_direction<Rat>(s, f, t.n_lambda(), mu, k, true, Rat(0), out);
        jcfl_direction<Rat>(s, f, t.n_lambda(), mu, k, false, Rat(0), out);
    } else {
        const auto f = [&](int a, int b, int A, int B) { return p.at(a, b, A, B); };
        const auto mu = [&](int l) { return t.mu[l]; };
        const auto k = [&](int l, int a, int b, int A, int B) { return t.k_at(l, a, b, A, B); };
        jcfl_direction<double>(s, f, t.n_lambda(), mu, k, true, tol, out);
        jcfl_direction<double>(s, f, t.n_lambda(), mu, k, false, tol, out);
    }
    out.vacuous = out.antecedents == 0;
    out.pass = out.failures.empty();
    return out;
}

PredictabilityDeterminism check_predictability_forces_determinism(const Theory& t, double tol) {
    if (!is_factorizable(t, tol).satisfied())
        throw PreconditionError("theory is not factorizable");
    PredictabilityDeterminism out;
    const Phenomenon p = predict(t);
    const Scenario& s = t.scenario;
    for (int a = 0; a < s.m_a; ++a)
        for (int b = 0; b < s.m_b; ++b) {
            if (!is_predictable(p, a, b, tol).holds()) continue;
            out.predictable_pairs.push_back({a, b});
            const bool exact_path = t.exact() && tol == 0.0;
            for (int lam = 0; lam < t.n_lambda(); ++lam) {
                if (exact_path ? !(t.rmu[lam] > 0) : !(t.mu[lam] > tol)) continue;
                for (int A = 0; A < s.k_a; ++A)
                    for (int B = 0; B < s.k_b; ++B) {
                        bool bad;
                        double dev;
                        if (exact_path) {
                            const Rat x = t.rk_at(lam, a, b, A, B);
                            bad = !extreme(x, Rat(0));
                            Rat d = x;
                            if (d > Rat(1) - d) d = Rat(1) - d;
                            dev = rat_free_double(d);
                        } else {
                            const double x = t.k_at(lam, a, b, A, B);
                            bad = !extreme(x, tol);
                            dev = std::min(std::fabs(x), std::fabs(1.0 - x));
                        }
                        if (bad) {
                            Witness w;
                            w.note = "kernel entry not deterministic at predictable pair";
                            w.where = {lam, a, b, A, B};
                            w.deviation = dev;
                            out.failures.push_back(w);
                        }
                    }
            }
        }
    out.vacuous = out.predictable_pairs.empty();
    out.pass = out.failures.empty();
    return out;
}

}  // namespace bell
