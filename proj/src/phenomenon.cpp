#include "bell/phenomenon.hpp"

#include <cmath>

namespace bell {

Phenomenon Phenomenon::from_float(Scenario sc, OutcomeValues vals, std::vector<double> table,
                                  double tol) {
    sc.check_valid();
    if (static_cast<int>(table.size()) != sc.table_size())
        throw InputError("phenomenon table has wrong length for its scenario");
    Phenomenon p;
    p.scenario = std::move(sc);
    p.values = std::move(vals);
    p.encoding = Encoding::Float64;
    p.tolerance = tol;
    // Tiny excursions below 0 / above 1 (within tol) are rounding debris from
    // upstream float work; clamp them so downstream logs & divisions behave.
    for (double& x : table) {
        if (x < 0.0 && x >= -tol) x = 0.0;
        if (x > 1.0 && x <= 1.0 + tol) x = 1.0;
    }
    p.table = std::move(table);
    return p;
}

Phenomenon Phenomenon::from_rational(Scenario sc, OutcomeValues vals, std::vector<Rat> table) {
    sc.check_valid();
    if (static_cast<int>(table.size()) != sc.table_size())
        throw InputError("phenomenon table has wrong length for its scenario");
    Phenomenon p;
    p.scenario = std::move(sc);
    p.values = std::move(vals);
    p.encoding = Encoding::Rational;
    p.tolerance = 0.0;
    p.table.reserve(table.size());
    for (const Rat& r : table) p.table.push_back(rat_to_double(r));
    p.rtable = std::move(table);
    return p;
}

namespace {

template <class T>
void validate_table(const Scenario& sc, const std::vector<T>& t, const T& tol,
                    ValidationReport& rep) {
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b) {
            T sum(0);
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) {
                    const T& x = t[sc.index(a, b, A, B)];
                    sum += x;
                    if (x < T(0) - tol || x > T(1) + tol)
                        rep.issues.push_back({"entry-range",
                                              {a, b, A, B},
                                              rat_free_double(x),
                                              "entry outside [0,1]"});
                }
            T err = abs_of(T(sum - T(1)));
            if (err > tol)
                rep.issues.push_back(
                    {"block-sum", {a, b}, rat_free_double(err), "block does not sum to 1"});
        }
}

}  // namespace

ValidationReport validate_phenomenon(const Phenomenon& p) {
    return validate_phenomenon(p, p.tolerance);
}

ValidationReport validate_phenomenon(const Phenomenon& p, double tol) {
    ValidationReport rep;
    if (static_cast<int>(p.table.size()) != p.scenario.table_size()) {
        rep.issues.push_back({"shape", {}, 0, "table length does not match scenario"});
        return rep;
    }
    if (!p.values.matches(p.scenario))
        rep.issues.push_back({"values-shape", {}, 0, "outcome value list length mismatch"});
    if (p.exact())
        validate_table<Rat>(p.scenario, p.rtable, Rat(0), rep);
    else
        validate_table<double>(p.scenario, p.table, tol, rep);
    return rep;
}

std::vector<double> conditional_marginal_b(const Phenomenon& p, int a, int b) {
    return marginal_b_core(p.scenario, p.table, a, b);
}

std::vector<double> conditional_marginal_a(const Phenomenon& p, int a, int b) {
    return marginal_a_core(p.scenario, p.table, a, b);
}

SignalReport is_signal_local(const Phenomenon& p) { return is_signal_local(p, p.tolerance); }

SignalReport is_signal_local(const Phenomenon& p, double tol) {
    if (p.exact() && tol == 0.0) return signal_core<Rat>(p.scenario, p.rtable, Rat(0));
    return signal_core<double>(p.scenario, p.table, tol);
}

Predictability is_predictable(const Phenomenon& p, int a, int b) {
    return is_predictable(p, a, b, p.tolerance);
}

Predictability is_predictable(const Phenomenon& p, int a, int b, double tol) {
    if (p.exact() && tol == 0.0) return predictable_core<Rat>(p.scenario, p.rtable, a, b, Rat(0));
    return predictable_core<double>(p.scenario, p.table, a, b, tol);
}

namespace {

void require_pm_one(const Phenomenon& p) {
    if (!OutcomeValues::is_pm_one(p.values.alice) || !OutcomeValues::is_pm_one(p.values.bob))
        throw PreconditionError("correlator needs {+1,-1} outcome values on both wings");
}

}  // namespace

double correlator(const Phenomenon& p, int a, int b) {
    require_pm_one(p);
    double e = 0;
    for (int A = 0; A < p.scenario.k_a; ++A)
        for (int B = 0; B < p.scenario.k_b; ++B)
            e += p.values.alice[A] * p.values.bob[B] * p.at(a, b, A, B);
    return e;
}

double chsh_value(const Phenomenon& p, const ChshSettings& s) {
    s.check_against(p.scenario);
    return correlator(p, s.a0, s.b0) + correlator(p, s.a0, s.b1) + correlator(p, s.a1, s.b0) -
           correlator(p, s.a1, s.b1);
}

Rat chsh_value_exact(const Phenomenon& p, const ChshSettings& s) {
    if (!p.exact()) throw PreconditionError("exact CHSH needs a rational table");
    require_pm_one(p);
    s.check_against(p.scenario);
    auto corr = [&](int a, int b) {
        Rat e(0);
        for (int A = 0; A < p.scenario.k_a; ++A)
            for (int B = 0; B < p.scenario.k_b; ++B) {
                // Outcome values are exactly ±1, so the double->Rat move is exact.
                Rat v = rat_from_double(p.values.alice[A] * p.values.bob[B]);
                e += v * p.rat_at(a, b, A, B);
            }
        return e;
    };
    return corr(s.a0, s.b0) + corr(s.a0, s.b1) + corr(s.a1, s.b0) - corr(s.a1, s.b1);
}

Phenomenon rationalize(const Phenomenon& p) {
    if (p.exact()) return p;
    const Scenario& sc = p.scenario;
    std::vector<Rat> rt(p.table.size());
    for (size_t i = 0; i < p.table.size(); ++i) rt[i] = rat_from_double(p.table[i]);
    // Exact renormalisation per block, so the rational table is a genuine
    // family of distributions even though the float one was only approximate.
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b) {
            Rat sum(0);
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) sum += rt[sc.index(a, b, A, B)];
            if (sum == 0) throw InputError("cannot rationalize a block with zero mass");
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) rt[sc.index(a, b, A, B)] /= sum;
        }
    return Phenomenon::from_rational(sc, p.values, std::move(rt));
}

Phenomenon to_float(const Phenomenon& p) {
    if (!p.exact()) return p;
    return Phenomenon::from_float(p.scenario, p.values, p.table, 1e-9);
}

}  // namespace bell
