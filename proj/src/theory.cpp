#include "bell/theory.hpp"

#include <cmath>

namespace bell {

Theory Theory::from_float(Scenario sc, OutcomeValues vals, std::vector<std::string> lambdas,
                          std::vector<double> mu, std::vector<double> kernel, double tol) {
    sc.check_valid();
    if (lambdas.empty()) {
        lambdas.resize(mu.size());
        for (size_t i = 0; i < mu.size(); ++i) lambdas[i] = "l" + std::to_string(i);
    }
    if (lambdas.size() != mu.size())
        throw InputError("lambda label count does not match weight count");
    if (kernel.size() != mu.size() * static_cast<size_t>(sc.table_size()))
        throw InputError("kernel length does not match scenario and lambda count");
    Theory t;
    t.scenario = std::move(sc);
    t.values = std::move(vals);
    t.lambdas = std::move(lambdas);
    t.encoding = Encoding::Float64;
    t.tolerance = tol;
    for (double& x : kernel) {
        if (x < 0.0 && x >= -tol) x = 0.0;
        if (x > 1.0 && x <= 1.0 + tol) x = 1.0;
    }
    t.mu = std::move(mu);
    t.kernel = std::move(kernel);
    return t;
}

Theory Theory::from_rational(Scenario sc, OutcomeValues vals, std::vector<std::string> lambdas,
                             std::vector<Rat> mu, std::vector<Rat> kernel) {
    sc.check_valid();
    if (lambdas.empty()) {
        lambdas.resize(mu.size());
        for (size_t i = 0; i < mu.size(); ++i) lambdas[i] = "l" + std::to_string(i);
    }
    if (lambdas.size() != mu.size())
        throw InputError("lambda label count does not match weight count");
    if (kernel.size() != mu.size() * static_cast<size_t>(sc.table_size()))
        throw InputError("kernel length does not match scenario and lambda count");
    Theory t;
    t.scenario = std::move(sc);
    t.values = std::move(vals);
    t.lambdas = std::move(lambdas);
    t.encoding = Encoding::Rational;
    t.tolerance = 0.0;
    t.mu.reserve(mu.size());
    for (const Rat& r : mu) t.mu.push_back(rat_to_double(r));
    t.kernel.reserve(kernel.size());
    for (const Rat& r : kernel) t.kernel.push_back(rat_to_double(r));
    t.rmu = std::move(mu);
    t.rkernel = std::move(kernel);
    return t;
}

namespace {

template <class T>
void validate_theory_core(const Scenario& sc, const std::vector<T>& mu, const std::vector<T>& ker,
                          const T& tol, ValidationReport& rep) {
    T wsum(0);
    for (size_t l = 0; l < mu.size(); ++l) {
        wsum += mu[l];
        if (mu[l] < T(0) - tol)
            rep.issues.push_back({"weight-range",
                                  {static_cast<int>(l)},
                                  rat_free_double(mu[l]),
                                  "negative hidden-state weight"});
    }
    T werr = abs_of(T(wsum - T(1)));
    if (werr > tol)
        rep.issues.push_back({"weight-sum", {}, rat_free_double(werr), "weights do not sum to 1"});
    const int ts = sc.table_size();
    for (size_t l = 0; l < mu.size(); ++l) {
        const T* K = ker.data() + l * ts;
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b) {
                T sum(0);
                for (int A = 0; A < sc.k_a; ++A)
                    for (int B = 0; B < sc.k_b; ++B) {
                        const T& x = K[sc.index(a, b, A, B)];
                        sum += x;
                        if (x < T(0) - tol || x > T(1) + tol)
                            rep.issues.push_back({"entry-range",
                                                  {static_cast<int>(l), a, b, A, B},
                                                  rat_free_double(x),
                                                  "kernel entry outside [0,1]"});
                    }
                T err = abs_of(T(sum - T(1)));
                if (err > tol)
                    rep.issues.push_back({"block-sum",
                                          {static_cast<int>(l), a, b},
                                          rat_free_double(err),
                                          "kernel block does not sum to 1"});
            }
    }
}

}  // namespace

ValidationReport validate_theory(const Theory& t) { return validate_theory(t, t.tolerance); }

ValidationReport validate_theory(const Theory& t, double tol) {
    ValidationReport rep;
    if (t.kernel.size() != t.mu.size() * static_cast<size_t>(t.scenario.table_size()) ||
        t.mu.empty()) {
        rep.issues.push_back({"shape", {}, 0, "kernel/weight shapes do not match scenario"});
        return rep;
    }
    if (!t.values.matches(t.scenario))
        rep.issues.push_back({"values-shape", {}, 0, "outcome value list length mismatch"});
    if (t.exact())
        validate_theory_core<Rat>(t.scenario, t.rmu, t.rkernel, Rat(0), rep);
    else
        validate_theory_core<double>(t.scenario, t.mu, t.kernel, tol, rep);
    return rep;
}

Phenomenon predict(const Theory& t) {
    const int ts = t.scenario.table_size();
    if (t.exact()) {
        std::vector<Rat> out(ts, Rat(0));
        for (int l = 0; l < t.n_lambda(); ++l) {
            const Rat* K = t.rkernel.data() + static_cast<size_t>(l) * ts;
            for (int i = 0; i < ts; ++i) out[i] += t.rmu[l] * K[i];
        }
        return Phenomenon::from_rational(t.scenario, t.values, std::move(out));
    }
    std::vector<double> out(ts, 0.0);
    for (int l = 0; l < t.n_lambda(); ++l) {
        const double* K = t.kernel.data() + static_cast<size_t>(l) * ts;
        for (int i = 0; i < ts; ++i) out[i] += t.mu[l] * K[i];
    }
    return Phenomenon::from_float(t.scenario, t.values, std::move(out), t.tolerance);
}

ReproductionReport reproduces(const Theory& t, const Phenomenon& p) {
    return reproduces(t, p, std::max(t.tolerance, p.tolerance));
}

ReproductionReport reproduces(const Theory& t, const Phenomenon& p, double tol) {
    if (!t.scenario.same_shape(p.scenario))
        throw InputError("theory and phenomenon scenarios have different shapes");
    Phenomenon pred = predict(t);
    ReproductionReport rep;
    const Scenario& sc = t.scenario;
    if (t.exact() && p.exact() && tol == 0.0) {
        Rat worst(0);
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b)
                for (int A = 0; A < sc.k_a; ++A)
                    for (int B = 0; B < sc.k_b; ++B) {
                        Rat d = abs_of(Rat(pred.rat_at(a, b, A, B) - p.rat_at(a, b, A, B)));
                        if (d > worst) {
                            worst = d;
                            rep.where = {a, b, A, B};
                        }
                    }
        rep.max_deviation = rat_to_double(worst);
        rep.ok = worst == 0;
        return rep;
    }
    double worst = 0;
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b)
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) {
                    double d = std::fabs(pred.at(a, b, A, B) - p.at(a, b, A, B));
                    if (d > worst) {
                        worst = d;
                        rep.where = {a, b, A, B};
                    }
                }
    rep.max_deviation = worst;
    rep.ok = worst <= tol;
    return rep;
}

namespace {

template <class T>
LambdaPartials<T> scan_all(const Scenario& sc, const std::vector<T>& mu, const std::vector<T>& ker,
                           const T& tol, FlMode mode) {
    LambdaPartials<T> acc;
    const int ts = sc.table_size();
    for (size_t l = 0; l < mu.size(); ++l) {
        if (!lambda_counts(mu[l], tol)) continue;
        scan_lambda(sc, ker.data() + l * ts, static_cast<int>(l), tol, mode, acc);
    }
    return acc;
}

struct Scans {
    PropertyEntry det, loc, factor, jc, fl;
};

Scans run_scans(const Theory& t, double tol, FlMode mode) {
    Scans s;
    if (t.exact() && tol == 0.0) {
        auto acc = scan_all<Rat>(t.scenario, t.rmu, t.rkernel, Rat(0), mode);
        Rat rtol(0);
        s.det = finish_entry(acc.det, rtol);
        s.loc = finish_entry(acc.loc, rtol);
        s.factor = finish_factorizability(acc.blockfactor, acc.loc, rtol);
        s.jc = finish_entry(acc.jc, rtol);
        s.fl = finish_entry(acc.fl, rtol);
    } else {
        auto acc = scan_all<double>(t.scenario, t.mu, t.kernel, tol, mode);
        s.det = finish_entry(acc.det, tol);
        s.loc = finish_entry(acc.loc, tol);
        s.factor = finish_factorizability(acc.blockfactor, acc.loc, tol);
        s.jc = finish_entry(acc.jc, tol);
        s.fl = finish_entry(acc.fl, tol);
    }
    return s;
}

}  // namespace

PropertyEntry is_deterministic(const Theory& t) { return is_deterministic(t, t.tolerance); }
PropertyEntry is_deterministic(const Theory& t, double tol) {
    return run_scans(t, tol, FlMode::Strong).det;
}

PropertyEntry is_local(const Theory& t) { return is_local(t, t.tolerance); }
PropertyEntry is_local(const Theory& t, double tol) { return run_scans(t, tol, FlMode::Strong).loc; }

PropertyEntry is_factorizable(const Theory& t) { return is_factorizable(t, t.tolerance); }
PropertyEntry is_factorizable(const Theory& t, double tol) {
    return run_scans(t, tol, FlMode::Strong).factor;
}

PropertyEntry is_jarrett_complete(const Theory& t) { return is_jarrett_complete(t, t.tolerance); }
PropertyEntry is_jarrett_complete(const Theory& t, double tol) {
    return run_scans(t, tol, FlMode::Strong).jc;
}

PropertyEntry is_fragile_local(const Theory& t, FlMode mode) {
    return is_fragile_local(t, t.tolerance, mode);
}
PropertyEntry is_fragile_local(const Theory& t, double tol, FlMode mode) {
    return run_scans(t, tol, mode).fl;
}

void cross_check_properties(const PropertyVector& v) {
    bool F = v.factorizability.satisfied();
    bool L = v.locality.satisfied();
    bool D = v.determinism.satisfied();
    bool JC = v.jarrett_completeness.satisfied();
    bool FL = v.fragile_locality.satisfied();
    if (F != (L && JC))
        throw InternalInconsistency(
            "factorizability disagrees with locality+completeness (F <=> L and JC)");
    if (D && !JC) throw InternalInconsistency("deterministic theory judged Jarrett-incomplete");
    if (L && !FL) throw InternalInconsistency("local theory judged fragile-locality-violating");
}

PropertyVector classify(const Theory& t) { return classify(t, t.tolerance, FlMode::Strong); }

PropertyVector classify(const Theory& t, double tol, FlMode mode) {
    Scans s = run_scans(t, tol, mode);
    PropertyVector v;
    v.determinism = s.det;
    v.locality = s.loc;
    v.factorizability = s.factor;
    v.jarrett_completeness = s.jc;
    v.fragile_locality = s.fl;
    v.fl_mode = mode;
    v.tol = tol;
    cross_check_properties(v);
    return v;
}

AveragedCorrelator averaged_correlator(const Theory& t, int a, int b) {
    return averaged_correlator(t, a, b, t.tolerance);
}

AveragedCorrelator averaged_correlator(const Theory& t, int a, int b, double tol) {
    if (!OutcomeValues::is_pm_one(t.values.alice) || !OutcomeValues::is_pm_one(t.values.bob))
        throw PreconditionError("averaged correlator needs {+1,-1} outcome values on both wings");
    if (a < 0 || a >= t.scenario.m_a || b < 0 || b >= t.scenario.m_b)
        throw InputError("setting index out of range");
    if (!is_factorizable(t, tol).satisfied())
        throw PreconditionError(
            "per-lambda correlator decomposition requires a factorizable theory");
    AveragedCorrelator r;
    r.value = correlator(predict(t), a, b);
    const Scenario& sc = t.scenario;
    for (int l = 0; l < t.n_lambda(); ++l) {
        double ab = 0, bb = 0;
        for (int A = 0; A < sc.k_a; ++A)
            for (int B = 0; B < sc.k_b; ++B) {
                ab += t.values.alice[A] * t.k_at(l, a, b, A, B);
                bb += t.values.bob[B] * t.k_at(l, a, b, A, B);
            }
        r.abar.push_back(ab);
        r.bbar.push_back(bb);
        r.decomposed_value += t.mu[l] * ab * bb;
    }
    if (std::fabs(r.value - r.decomposed_value) > std::max(tol, 1e-12))
        throw InternalInconsistency("per-lambda correlator decomposition disagrees with direct sum");
    return r;
}

}  // namespace bell
