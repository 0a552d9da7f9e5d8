#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bell/generators.hpp"
#include "bell/lhv.hpp"
#include "bell/quantum.hpp"
#include "bell/theory.hpp"

using namespace bell;

namespace {

Scenario sc2222() { return {2, 2, 2, 2, "test"}; }

// Single deterministic hidden state: A = alpha(a), B = beta(b).
Theory det_local(const std::vector<int>& alpha, const std::vector<int>& beta) {
    const Scenario sc = sc2222();
    std::vector<double> kern(static_cast<size_t>(sc.table_size()), 0.0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            kern[static_cast<size_t>(sc.index(
                a, b, alpha[static_cast<size_t>(a)], beta[static_cast<size_t>(b)]))] = 1.0;
    return Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"l"}, {1.0}, std::move(kern));
}

// Single deterministic hidden state where Bob copies Alice's SETTING:
// B = a, A = 0. Deterministic, complete, and flagrantly nonlocal.
Theory det_nonlocal_toy() {
    const Scenario sc = sc2222();
    std::vector<double> kern(static_cast<size_t>(sc.table_size()), 0.0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) kern[static_cast<size_t>(sc.index(a, b, 0, a))] = 1.0;
    return Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"l"}, {1.0}, std::move(kern));
}

}  // namespace

TEST_CASE("two opposite deterministic states at even odds predict the uniform-diagonal table") {
    const Scenario sc = sc2222();
    std::vector<double> k0(static_cast<size_t>(sc.table_size()), 0.0);
    std::vector<double> k1(static_cast<size_t>(sc.table_size()), 0.0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            k0[static_cast<size_t>(sc.index(a, b, 0, 0))] = 1.0;
            k1[static_cast<size_t>(sc.index(a, b, 1, 1))] = 1.0;
        }
    std::vector<double> kern;
    kern.insert(kern.end(), k0.begin(), k0.end());
    kern.insert(kern.end(), k1.begin(), k1.end());
    Theory t = Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"up", "down"}, {0.5, 0.5},
                                  std::move(kern));
    Phenomenon p = predict(t);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            CHECK(p.at(a, b, 0, 0) == 0.5);
            CHECK(p.at(a, b, 1, 1) == 0.5);
            CHECK(p.at(a, b, 0, 1) == 0.0);
        }
    CHECK(reproduces(t, p).ok);
}

TEST_CASE("validation catches weight and kernel defects") {
    const Scenario sc{1, 1, 2, 2, "v"};
    Theory bad_w = Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"a", "b"}, {0.7, 0.7},
                                      std::vector<double>(8, 0.25));
    ValidationReport r = validate_theory(bad_w);
    REQUIRE_FALSE(r.ok());
    CHECK(r.issues[0].kind == "weight-sum");

    Theory bad_k = Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"a"}, {1.0},
                                      {0.5, 0.5, 0.25, 0.3});
    ValidationReport r2 = validate_theory(bad_k);
    REQUIRE_FALSE(r2.ok());
    CHECK(r2.issues[0].kind == "block-sum");
    CHECK(r2.issues[0].where == std::vector<int>{0, 0, 0});
}

TEST_CASE("deterministic local single state: the full property sweep holds") {
    Theory t = det_local({0, 1}, {1, 0});
    PropertyVector v = classify(t);
    CHECK(v.determinism.status == Status::Holds);
    CHECK(v.locality.status == Status::Holds);
    CHECK(v.factorizability.status == Status::Holds);
    CHECK(v.jarrett_completeness.status == Status::Holds);
    CHECK(v.fragile_locality.status == Status::Holds);
}

TEST_CASE("deterministic nonlocal toy: complete but not local in any sense") {
    PropertyVector v = classify(det_nonlocal_toy());
    CHECK(v.determinism.status == Status::Holds);
    CHECK(v.locality.status == Status::Fails);
    CHECK(v.factorizability.status == Status::Fails);
    CHECK(v.jarrett_completeness.status == Status::Holds);
    CHECK(v.fragile_locality.status == Status::Fails);
    REQUIRE(v.locality.witness.has_value());
    CHECK(v.locality.witness->deviation == doctest::Approx(1.0));
}

TEST_CASE("local but Jarrett-incomplete: correlated noise inside one block") {
    // One hidden state, product marginals (uniform x uniform) at every
    // block, but the joint at (0,0) carries a diagonal twist d: marginals
    // stay uniform (locality intact) while conditioning on the co-wing
    // outcome moves the marginal by 4d^... by 2d/0.5 = 4d.
    const Scenario sc = sc2222();
    const double d = 0.1;
    std::vector<double> kern(static_cast<size_t>(sc.table_size()), 0.25);
    kern[static_cast<size_t>(sc.index(0, 0, 0, 0))] += d;
    kern[static_cast<size_t>(sc.index(0, 0, 1, 1))] += d;
    kern[static_cast<size_t>(sc.index(0, 0, 0, 1))] -= d;
    kern[static_cast<size_t>(sc.index(0, 0, 1, 0))] -= d;
    Theory t =
        Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"l"}, {1.0}, std::move(kern));
    PropertyVector v = classify(t);
    CHECK(v.locality.status == Status::Holds);
    CHECK(v.jarrett_completeness.status == Status::Fails);
    CHECK(v.factorizability.status == Status::Fails);
    REQUIRE(v.jarrett_completeness.witness.has_value());
    CHECK(v.jarrett_completeness.witness->deviation == doctest::Approx(2 * d));
}

TEST_CASE("complete but nonlocal: product kernels whose Bob factor tracks Alice's setting") {
    const Scenario sc = sc2222();
    std::vector<double> kern(static_cast<size_t>(sc.table_size()));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    const double pb = a == 0 ? (B == 0 ? 0.9 : 0.1) : (B == 0 ? 0.2 : 0.8);
                    kern[static_cast<size_t>(sc.index(a, b, A, B))] = 0.5 * pb;
                }
    Theory t =
        Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"l"}, {1.0}, std::move(kern));
    PropertyVector v = classify(t);
    CHECK(v.jarrett_completeness.status == Status::Holds);
    CHECK(v.locality.status == Status::Fails);
    CHECK(v.factorizability.status == Status::Fails);
    CHECK(v.locality.witness->deviation == doctest::Approx(0.7));
}

TEST_CASE("vacuous verdicts are labelled and count as satisfied") {
    // Single setting per wing: no remote setting to vary, so locality and
    // fragile locality have nothing to compare.
    const Scenario sc{1, 1, 2, 2, "single"};
    Theory t = Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"l"}, {1.0},
                                  {0.25, 0.25, 0.25, 0.25});
    PropertyVector v = classify(t);
    CHECK(v.locality.status == Status::Vacuous);
    CHECK(v.locality.satisfied());
    CHECK(v.fragile_locality.status == Status::Vacuous);  // no extreme marginal either
    CHECK(v.determinism.status == Status::Fails);
    CHECK(v.jarrett_completeness.status == Status::Holds);
}

TEST_CASE("strong vs weak fragile locality diverge exactly where one side is extreme") {
    // Bob's marginal is extreme under a=0 but strictly mixed under a=1:
    // the strong reading demands the a=1 marginal match the extreme value;
    // the weak reading finds no extreme pair to compare.
    const Scenario sc{2, 1, 2, 2, "fl"};
    std::vector<double> kern(static_cast<size_t>(sc.table_size()));
    for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B) {
            kern[static_cast<size_t>(sc.index(0, 0, A, B))] = 0.5 * (B == 0 ? 1.0 : 0.0);
            kern[static_cast<size_t>(sc.index(1, 0, A, B))] = 0.5 * 0.5;
        }
    Theory t =
        Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"l"}, {1.0}, std::move(kern));
    CHECK(is_fragile_local(t, 1e-9, FlMode::Strong).status == Status::Fails);
    CHECK(is_fragile_local(t, 1e-9, FlMode::Weak).status == Status::Vacuous);
}

TEST_CASE("boxes-style single state classifies as incomplete, not nonlocal") {
    Theory t = boxes_oqm_theory();
    PropertyVector v = classify(t, 0.0, FlMode::Strong);
    CHECK(v.determinism.status == Status::Fails);
    CHECK(v.locality.status == Status::Vacuous);
    CHECK(v.locality.satisfied());
    CHECK(v.factorizability.status == Status::Fails);
    CHECK(v.jarrett_completeness.status == Status::Fails);
    CHECK(v.fragile_locality.status == Status::Vacuous);
}

TEST_CASE("averaged correlator decomposes for factorizable theories and refuses otherwise") {
    Rng rng(41);
    Theory t = random_theory(sc2222(), 3, TheoryKind::Factorizable, Encoding::Float64, rng);
    const Phenomenon p = predict(t);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const AveragedCorrelator ac = averaged_correlator(t, a, b);
            CHECK(ac.value == doctest::Approx(correlator(p, a, b)).epsilon(1e-10));
        }
    CHECK_THROWS_AS(averaged_correlator(det_nonlocal_toy(), 0, 0), PreconditionError);
}

TEST_CASE("same grid draws, two encodings, equal verdicts") {
    const TheoryKind kinds[] = {TheoryKind::Generic, TheoryKind::Deterministic,
                                TheoryKind::Factorizable, TheoryKind::LocalNotJc,
                                TheoryKind::JcNotLocal, TheoryKind::JcFl};
    for (int i = 0; i < 60; ++i) {
        Rng rf(1000 + i), rr(1000 + i);
        Theory tf = random_theory(sc2222(), 1 + i % 3, kinds[i % 6], Encoding::Float64, rf);
        Theory tr = random_theory(sc2222(), 1 + i % 3, kinds[i % 6], Encoding::Rational, rr);
        PropertyVector vf = classify(tf, 1e-9, FlMode::Strong);
        PropertyVector vr = classify(tr, 0.0, FlMode::Strong);
        CHECK(vf.determinism.satisfied() == vr.determinism.satisfied());
        CHECK(vf.locality.satisfied() == vr.locality.satisfied());
        CHECK(vf.factorizability.satisfied() == vr.factorizability.satisfied());
        CHECK(vf.jarrett_completeness.satisfied() == vr.jarrett_completeness.satisfied());
        CHECK(vf.fragile_locality.satisfied() == vr.fragile_locality.satisfied());
    }
}

TEST_CASE("relabeling outcomes does not change any verdict") {
    Rng rng(77);
    Theory t = random_theory(sc2222(), 2, TheoryKind::Generic, Encoding::Float64, rng);
    // Swap Bob's outcome labels everywhere.
    Theory s = t;
    const Scenario& sc = t.scenario;
    for (int l = 0; l < t.n_lambda(); ++l)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int A = 0; A < 2; ++A)
                    for (int B = 0; B < 2; ++B)
                        s.kernel[static_cast<size_t>(l) * sc.table_size() +
                                 static_cast<size_t>(sc.index(a, b, A, B))] =
                            t.k_at(l, a, b, A, 1 - B);
    PropertyVector v0 = classify(t), v1 = classify(s);
    CHECK(v0.determinism.satisfied() == v1.determinism.satisfied());
    CHECK(v0.locality.satisfied() == v1.locality.satisfied());
    CHECK(v0.factorizability.satisfied() == v1.factorizability.satisfied());
    CHECK(v0.jarrett_completeness.satisfied() == v1.jarrett_completeness.satisfied());
    CHECK(v0.fragile_locality.satisfied() == v1.fragile_locality.satisfied());
}

TEST_CASE("reproduction check reports the worst entry") {
    Theory t = det_local({0, 0}, {0, 0});
    Phenomenon p = predict(t);
    p.table[static_cast<size_t>(p.scenario.index(1, 0, 0, 0))] -= 0.25;
    p.table[static_cast<size_t>(p.scenario.index(1, 0, 0, 1))] += 0.25;
    ReproductionReport r = reproduces(t, p);
    CHECK_FALSE(r.ok);
    CHECK(r.max_deviation == doctest::Approx(0.25));
    CHECK(r.where == std::vector<int>{1, 0, 0, 0});
}
