#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "bell/generators.hpp"
#include "bell/lhv.hpp"
#include "bell/quantum.hpp"

using namespace bell;

namespace {

Scenario sc2222() { return {2, 2, 2, 2, "test"}; }

// The PR box diluted toward white noise: f = w*PR + (1-w)/4. Local exactly
// when w <= 1/2 (its CHSH value is 4w). Exact rational table.
Phenomenon pr_box_mix(const Rat& w) {
    const Scenario sc = sc2222();
    std::vector<Rat> t(static_cast<size_t>(sc.table_size()));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    const Rat pr = ((A ^ B) == (a & b)) ? Rat(1, 2) : Rat(0);
                    t[static_cast<size_t>(sc.index(a, b, A, B))] =
                        w * pr + (Rat(1) - w) * Rat(1, 4);
                }
    return Phenomenon::from_rational(sc, OutcomeValues::pm_one(2, 2), std::move(t));
}

}  // namespace

TEST_CASE("strategy indexing is a bijection matching enumeration order") {
    const Scenario sc{2, 3, 2, 3, "strat"};
    const long long n = strategy_count(sc);
    CHECK(n == 4 * 27);
    const std::vector<DeterministicStrategy> all = enumerate_strategies(sc);
    REQUIRE(static_cast<long long>(all.size()) == n);
    for (long long i = 0; i < n; ++i) {
        CHECK(strategy_from_index(sc, i) == all[static_cast<size_t>(i)]);
        CHECK(strategy_to_index(sc, all[static_cast<size_t>(i)]) == i);
    }
}

TEST_CASE("the strategy cap honours its environment override") {
    setenv("BELL_STRATEGY_CAP", "10", 1);
    CHECK(strategy_cap() == 10);
    CHECK_THROWS_AS(enumerate_strategies(sc2222()), CapError);  // 16 > 10
    unsetenv("BELL_STRATEGY_CAP");
    CHECK(strategy_cap() == 1000000);
}

TEST_CASE("every CHSH sign variant has local bound exactly 2") {
    const Scenario sc = sc2222();
    for (int mask = 0; mask < 16; ++mask) {
        int minus = 0;
        for (int i = 0; i < 4; ++i) minus += (mask >> i) & 1;
        if (minus % 2 == 0) continue;
        std::vector<Rat> c(static_cast<size_t>(sc.table_size()));
        std::vector<double> cf(static_cast<size_t>(sc.table_size()));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const int s = ((mask >> (a * 2 + b)) & 1) ? -1 : 1;
                for (int A = 0; A < 2; ++A)
                    for (int B = 0; B < 2; ++B) {
                        const int v = s * (A == 0 ? 1 : -1) * (B == 0 ? 1 : -1);
                        c[static_cast<size_t>(sc.index(a, b, A, B))] = Rat(v);
                        cf[static_cast<size_t>(sc.index(a, b, A, B))] = v;
                    }
            }
        CHECK(local_bound_of_exact(sc, c) == Rat(2));
        CHECK(local_bound_of(sc, cf) == 2.0);
    }
}

TEST_CASE("uniform table is feasible and the model re-verifies") {
    Phenomenon p = Phenomenon::from_float(sc2222(), OutcomeValues::pm_one(2, 2),
                                          std::vector<double>(16, 0.25));
    LhvResult r = solve_lhv(p);
    REQUIRE(r.outcome == LhvOutcome::Feasible);
    REQUIRE(r.model.has_value());
    CHECK(verify_model(*r.model, p).ok);
    double total = 0;
    for (const WeightedStrategy& w : r.model->support) {
        CHECK(w.weight > 0);
        total += w.weight;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("PR box mixtures bracket the local boundary exactly") {
    LhvResult feas = solve_lhv(pr_box_mix(Rat(1, 4)));
    CHECK(feas.outcome == LhvOutcome::Feasible);
    REQUIRE(feas.model.has_value());
    CHECK(verify_model(*feas.model, pr_box_mix(Rat(1, 4)), 0.0).ok);

    LhvResult edge = solve_lhv(pr_box_mix(Rat(1, 2)));
    CHECK(edge.outcome == LhvOutcome::Feasible);  // the boundary itself is local

    LhvResult infeas = solve_lhv(pr_box_mix(Rat(3, 4)));
    REQUIRE(infeas.outcome == LhvOutcome::Infeasible);
    REQUIRE(infeas.certificate.has_value());
    const BellCertificate& c = *infeas.certificate;
    CHECK(c.name == "chsh");
    CHECK(c.r_local_bound == Rat(2));
    CHECK(c.r_value == Rat(3));  // CHSH = 4w = 3 at w = 3/4
    CHECK(c.r_gap == Rat(1));
    CertificateCheck cc = verify_certificate(c, pr_box_mix(Rat(3, 4)));
    CHECK(cc.ok);
    CHECK(cc.separates);
}

TEST_CASE("the full PR box gets the maximal CHSH certificate") {
    LhvResult r = solve_lhv(pr_box_mix(Rat(1)));
    REQUIRE(r.outcome == LhvOutcome::Infeasible);
    CHECK(r.certificate->r_value == Rat(4));
    CHECK(r.certificate->r_gap == Rat(2));
}

TEST_CASE("the float singlet at optimal angles is infeasible with a CHSH certificate") {
    const ChshGeometry g = chsh_optimal_geometry();
    const Phenomenon p = born_phenomenon(singlet(), g.alice, g.bob);
    LhvResult r = solve_lhv(p);
    REQUIRE(r.outcome == LhvOutcome::Infeasible);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->name == "chsh");
    CHECK(r.certificate->local_bound == 2.0);
    CHECK(r.certificate->value ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(verify_certificate(*r.certificate, p).ok);
}

TEST_CASE("a signalling block is infeasible outside CHSH form: raw Farkas certificate") {
    // One Alice setting, two Bob settings; Alice's marginal depends on b —
    // no strategy mixture can do that.
    const Scenario sc{1, 2, 2, 2, "signal"};
    std::vector<Rat> t(static_cast<size_t>(sc.table_size()), Rat(0));
    t[static_cast<size_t>(sc.index(0, 0, 0, 0))] = Rat(1);
    t[static_cast<size_t>(sc.index(0, 1, 1, 0))] = Rat(1);
    Phenomenon p = Phenomenon::from_rational(sc, OutcomeValues::pm_one(2, 2), std::move(t));
    LhvResult r = solve_lhv(p);
    REQUIRE(r.outcome == LhvOutcome::Infeasible);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->name.empty());
    CHECK(r.certificate->r_gap > Rat(0));
    CertificateCheck cc = verify_certificate(*r.certificate, p);
    CHECK(cc.ok);
    CHECK(cc.separates);
}

TEST_CASE("certificates that do not separate are rejected by verification") {
    // CHSH coefficients against the uniform table: value 0, far below the
    // bound. Verification must refuse to call this a separation.
    const Scenario sc = sc2222();
    BellCertificate c;
    c.scenario = sc;
    c.encoding = Encoding::Float64;
    c.coeffs.assign(static_cast<size_t>(sc.table_size()), 0.0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    const int s = (a == 1 && b == 1) ? -1 : 1;
                    c.coeffs[static_cast<size_t>(sc.index(a, b, A, B))] =
                        s * (A == 0 ? 1 : -1) * (B == 0 ? 1 : -1);
                }
    c.local_bound = 2.0;
    c.value = 0.0;
    c.gap = -2.0;
    Phenomenon uniform = Phenomenon::from_float(sc, OutcomeValues::pm_one(2, 2),
                                                std::vector<double>(16, 0.25));
    CertificateCheck cc = verify_certificate(c, uniform);
    CHECK_FALSE(cc.ok);
    CHECK_FALSE(cc.separates);
}

TEST_CASE("float and exact solves agree across random local mixtures") {
    for (int i = 0; i < 20; ++i) {
        Rng rng(500 + i);
        // A mixture of deterministic local strategies is local by
        // construction; both encodings must say Feasible.
        Theory t = random_theory(sc2222(), 1 + i % 3, TheoryKind::Factorizable,
                                 Encoding::Rational, rng);
        Theory det = determinize(t);
        Phenomenon exact_p = predict(det);
        LhvResult re = solve_lhv(exact_p);
        CHECK(re.outcome == LhvOutcome::Feasible);
        Phenomenon float_p = to_float(exact_p);
        LhvResult rf = solve_lhv(float_p);
        CHECK(rf.outcome == LhvOutcome::Feasible);
    }
}

TEST_CASE("determinize requires factorizability") {
    const Scenario sc = sc2222();
    std::vector<double> kern(static_cast<size_t>(sc.table_size()), 0.25);
    kern[static_cast<size_t>(sc.index(0, 0, 0, 0))] += 0.1;
    kern[static_cast<size_t>(sc.index(0, 0, 1, 1))] += 0.1;
    kern[static_cast<size_t>(sc.index(0, 0, 0, 1))] -= 0.1;
    kern[static_cast<size_t>(sc.index(0, 0, 1, 0))] -= 0.1;
    Theory t =
        Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"l"}, {1.0}, std::move(kern));
    CHECK_THROWS_AS(determinize(t), PreconditionError);
}

TEST_CASE("determinize round trip on a hand-built factorizable state") {
    const Scenario sc = sc2222();
    std::vector<double> kern(static_cast<size_t>(sc.table_size()));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    const double pa = a == 0 ? (A == 0 ? 0.75 : 0.25) : (A == 0 ? 0.5 : 0.5);
                    const double pb = b == 0 ? (B == 0 ? 0.125 : 0.875) : (B == 0 ? 1.0 : 0.0);
                    kern[static_cast<size_t>(sc.index(a, b, A, B))] = pa * pb;
                }
    Theory t =
        Theory::from_float(sc, OutcomeValues::pm_one(2, 2), {"l"}, {1.0}, std::move(kern));
    Theory d = determinize(t);
    CHECK(is_deterministic(d).satisfied());
    CHECK(is_local(d).satisfied());
    CHECK(reproduces(d, predict(t)).ok);

    LhvModel m = model_from_deterministic(d);
    CHECK(verify_model(m, predict(t)).ok);
    Theory back = theory_from_model(m, t.values, "back");
    CHECK(reproduces(back, predict(t)).ok);
}

TEST_CASE("tampered models fail verification with the worst entry named") {
    Phenomenon p = pr_box_mix(Rat(0));  // uniform, exact
    LhvResult r = solve_lhv(p);
    REQUIRE(r.outcome == LhvOutcome::Feasible);
    LhvModel m = *r.model;
    m.support[0].rweight += Rat(1, 5);
    m.support[0].weight += 0.2;
    ModelCheck chk = verify_model(m, p, 0.0);
    CHECK_FALSE(chk.ok);
    CHECK(chk.max_deviation > 0.19);
    CHECK(chk.where.size() == 4);
}

TEST_CASE("solver honours the strategy cap") {
    SolveOptions opt;
    opt.cap = 8;  // below the 16 strategies of the 2x2x2x2 scenario
    Phenomenon p = Phenomenon::from_float(sc2222(), OutcomeValues::pm_one(2, 2),
                                          std::vector<double>(16, 0.25));
    CHECK_THROWS_AS(solve_lhv(p, opt), CapError);
}

TEST_CASE("invalid tables are rejected before solving") {
    Phenomenon p = Phenomenon::from_float(sc2222(), OutcomeValues::pm_one(2, 2),
                                          std::vector<double>(16, 0.3));
    CHECK_THROWS_AS(solve_lhv(p), InputError);
}
