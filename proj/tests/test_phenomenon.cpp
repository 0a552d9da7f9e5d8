#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bell/phenomenon.hpp"

using namespace bell;

namespace {

Scenario sc2222() { return {2, 2, 2, 2, "test"}; }

// Table built from correlators E(a,b) with uniform marginals:
// f = (1 + val(A)val(B)E)/4. Exactly normalised and signal-free.
Phenomenon corr_table(const std::array<double, 4>& E) {
    const Scenario sc = sc2222();
    std::vector<double> t(static_cast<size_t>(sc.table_size()));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    const double va = A == 0 ? 1 : -1, vb = B == 0 ? 1 : -1;
                    t[static_cast<size_t>(sc.index(a, b, A, B))] =
                        (1.0 + va * vb * E[static_cast<size_t>(a * 2 + b)]) / 4.0;
                }
    return Phenomenon::from_float(sc, OutcomeValues::pm_one(2, 2), std::move(t));
}

}  // namespace

TEST_CASE("scenario index is a bijection onto the table") {
    const Scenario sc{2, 3, 2, 3, "asym"};
    std::vector<int> hit(static_cast<size_t>(sc.table_size()), 0);
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b)
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) hit[static_cast<size_t>(sc.index(a, b, A, B))]++;
    for (int h : hit) CHECK(h == 1);
}

TEST_CASE("validation flags bad entries and bad block sums with locations") {
    const Scenario sc{1, 1, 2, 2, "v"};
    const OutcomeValues vals = OutcomeValues::pm_one(2, 2);

    Phenomenon bad_entry = Phenomenon::from_float(sc, vals, {0.5, 0.5, 0.25, -0.25});
    ValidationReport r1 = validate_phenomenon(bad_entry);
    REQUIRE_FALSE(r1.ok());
    CHECK(r1.issues[0].kind == "entry-range");
    CHECK(r1.issues[0].where == std::vector<int>{0, 0, 1, 1});

    Phenomenon bad_sum = Phenomenon::from_float(sc, vals, {0.5, 0.5, 0.25, 0.25});
    ValidationReport r2 = validate_phenomenon(bad_sum);
    REQUIRE_FALSE(r2.ok());
    CHECK(r2.issues[0].kind == "block-sum");
}

TEST_CASE("within-tolerance dirt is clamped, beyond-tolerance dirt is reported") {
    const Scenario sc{1, 1, 2, 2, "v"};
    Phenomenon p = Phenomenon::from_float(sc, OutcomeValues::pm_one(2, 2),
                                          {0.5 + 4e-10, 0.5 - 4e-10, -3e-10, 0.0});
    CHECK(p.at(0, 0, 1, 0) == 0.0);  // clamped up to the boundary
    CHECK(validate_phenomenon(p).ok());
}

TEST_CASE("exact tables validate exactly") {
    const Scenario sc{1, 1, 2, 2, "v"};
    Phenomenon good = Phenomenon::from_rational(sc, OutcomeValues::pm_one(2, 2),
                                                {Rat(0), Rat(1, 2), Rat(1, 2), Rat(0)});
    CHECK(validate_phenomenon(good).ok());
    Phenomenon off = Phenomenon::from_rational(
        sc, OutcomeValues::pm_one(2, 2),
        {Rat(0), Rat(1, 2), Rat(1, 2), Rat(1, 1000000000000LL)});
    CHECK_FALSE(validate_phenomenon(off).ok());
}

TEST_CASE("conditional marginals are distributions over the right wing") {
    Phenomenon p = corr_table({0.3, -0.2, 0.1, 0.7});
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double sb = 0, sa = 0;
            for (double x : conditional_marginal_b(p, a, b)) sb += x;
            for (double x : conditional_marginal_a(p, a, b)) sa += x;
            CHECK(sb == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(sa == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("correlation-form tables are signal-local; a skewed table is not") {
    CHECK(is_signal_local(corr_table({0.9, -0.9, 0.4, 0.0})).local);

    // Bob's marginal moves with Alice's setting: P(B=0) is 1 under a=0 but
    // 1/2 under a=1.
    const Scenario sc = sc2222();
    std::vector<double> t(static_cast<size_t>(sc.table_size()), 0.0);
    for (int b = 0; b < 2; ++b) {
        t[static_cast<size_t>(sc.index(0, b, 0, 0))] = 0.5;
        t[static_cast<size_t>(sc.index(0, b, 1, 0))] = 0.5;
        t[static_cast<size_t>(sc.index(1, b, 0, 0))] = 0.25;
        t[static_cast<size_t>(sc.index(1, b, 0, 1))] = 0.25;
        t[static_cast<size_t>(sc.index(1, b, 1, 0))] = 0.25;
        t[static_cast<size_t>(sc.index(1, b, 1, 1))] = 0.25;
    }
    Phenomenon p = Phenomenon::from_float(sc, OutcomeValues::pm_one(2, 2), std::move(t));
    SignalReport r = is_signal_local(p);
    REQUIRE_FALSE(r.local);
    CHECK(r.max_deviation == doctest::Approx(0.5));
    bool bob_witness = false;
    for (const MarginalDependence& d : r.witnesses)
        if (d.wing == 'B') bob_witness = true;
    CHECK(bob_witness);
}

TEST_CASE("predictability can hold in one direction only") {
    // B is a non-injective function of A (always 0), with A uniform: Alice's
    // outcome settles Bob's, but B=0 leaves A open.
    const Scenario sc{1, 1, 2, 2, "one-way"};
    Phenomenon p = Phenomenon::from_float(sc, OutcomeValues::pm_one(2, 2), {0.5, 0.0, 0.5, 0.0});
    const Predictability pr = is_predictable(p, 0, 0);
    CHECK(pr.alice_to_bob);
    CHECK_FALSE(pr.bob_to_alice);
    CHECK_FALSE(pr.holds());

    // Perfect anticorrelation: both directions.
    const Predictability both = is_predictable(
        Phenomenon::from_float(sc, OutcomeValues::pm_one(2, 2), {0.0, 0.5, 0.5, 0.0}), 0, 0);
    CHECK(both.holds());
}

TEST_CASE("correlator and the fixed CHSH combination") {
    const std::array<double, 4> E = {0.6, -0.25, 0.5, 0.125};
    Phenomenon p = corr_table(E);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            CHECK(correlator(p, a, b) ==
                  doctest::Approx(E[static_cast<size_t>(a * 2 + b)]).epsilon(1e-12));
    const double S = chsh_value(p, ChshSettings{0, 1, 0, 1});
    CHECK(S == doctest::Approx(E[0] + E[1] + E[2] - E[3]).epsilon(1e-12));
    // Swapped roles change the combination accordingly.
    const double S2 = chsh_value(p, ChshSettings{1, 0, 0, 1});
    CHECK(S2 == doctest::Approx(E[2] + E[3] + E[0] - E[1]).epsilon(1e-12));
}

TEST_CASE("correlator requires +/-1 outcome values") {
    const Scenario sc{1, 1, 2, 2, "vals"};
    OutcomeValues v;
    v.alice = {1.0, 0.0};
    v.bob = {1.0, -1.0};
    Phenomenon p = Phenomenon::from_float(sc, v, {0.25, 0.25, 0.25, 0.25});
    CHECK_THROWS_AS(correlator(p, 0, 0), PreconditionError);
}

TEST_CASE("exact CHSH agrees with float CHSH on dyadic tables") {
    const std::array<double, 4> E = {0.5, 0.5, 0.5, -0.5};
    Phenomenon pf = corr_table(E);
    std::vector<Rat> rt;
    for (double x : pf.table) rt.push_back(rat_from_double(x));
    Phenomenon pr = Phenomenon::from_rational(pf.scenario, pf.values, std::move(rt));
    const Rat rs = chsh_value_exact(pr, ChshSettings{0, 1, 0, 1});
    CHECK(rs == Rat(2));
    CHECK(chsh_value(pf, ChshSettings{0, 1, 0, 1}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("rationalize renormalises blocks exactly and round-trips closely") {
    Phenomenon pf = corr_table({0.31, -0.47, 0.05, 0.93});
    Phenomenon pr = rationalize(pf);
    REQUIRE(pr.exact());
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Rat s(0);
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) s += pr.rat_at(a, b, A, B);
            CHECK(s == Rat(1));
        }
    Phenomenon back = to_float(pr);
    for (size_t i = 0; i < pf.table.size(); ++i)
        CHECK(back.table[i] == doctest::Approx(pf.table[i]).epsilon(1e-12));
}
