#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bell/generators.hpp"
#include "bell/json_io.hpp"
#include "bell/par.hpp"
#include "bell/quantum.hpp"

using namespace bell;

// Every parallel kernel must be bit-identical to its serial reference —
// same doubles, same witnesses, same JSON bytes. These tests compare
// serializations so any drift in any field is caught.

namespace {

bool same_entry(const PropertyEntry& x, const PropertyEntry& y) {
    return render_json(to_json(x)) == render_json(to_json(y));
}

bool same_vector(const PropertyVector& x, const PropertyVector& y) {
    return render_json(to_json(x)) == render_json(to_json(y));
}

}  // namespace

TEST_CASE("parallel prediction is bit-identical to serial") {
    const Scenario sc{3, 3, 4, 4, "par"};
    for (int i = 0; i < 10; ++i) {
        Rng rng(2000 + i);
        const Encoding enc = i % 2 == 0 ? Encoding::Float64 : Encoding::Rational;
        Theory t = random_theory(sc, 200, TheoryKind::Generic, enc, rng);
        const Phenomenon ps = predict(t);
        const Phenomenon pp = par::predict(t);
        CHECK(ps.table == pp.table);  // exact double equality, all entries
        if (enc == Encoding::Rational) CHECK(ps.rtable == pp.rtable);
    }
}

TEST_CASE("parallel classification matches serial witness for witness") {
    const Scenario sc{2, 3, 2, 3, "par"};
    const TheoryKind kinds[] = {TheoryKind::Generic,      TheoryKind::Deterministic,
                                TheoryKind::Factorizable, TheoryKind::JcNotLocal,
                                TheoryKind::LocalNotJc,   TheoryKind::JcFl};
    for (int i = 0; i < 18; ++i) {
        Rng rng(3000 + i);
        const TheoryKind kind =
            kinds[i % 6] == TheoryKind::JcFl && sc.k_a > sc.k_b ? TheoryKind::Generic
                                                                : kinds[i % 6];
        const Encoding enc = i % 2 == 0 ? Encoding::Float64 : Encoding::Rational;
        Theory t = random_theory(sc, 40, kind, enc, rng);
        CHECK(same_vector(classify(t), par::classify(t)));
    }
}

TEST_CASE("a vacuous-heavy scenario classifies identically in parallel") {
    // Single setting per wing: locality and fragile locality have nothing to
    // compare, so the vacuous branches must merge identically too.
    Rng rng(3100);
    Theory t = random_theory({1, 1, 2, 2, "par"}, 30, TheoryKind::Generic,
                             Encoding::Float64, rng);
    CHECK(same_vector(classify(t), par::classify(t)));
}

TEST_CASE("parallel model verification agrees on passing and failing models") {
    Rng rng(3200);
    Theory t = random_theory({3, 3, 3, 3, "par"}, 16, TheoryKind::Factorizable,
                             Encoding::Float64, rng);
    Theory det = determinize(t);
    LhvModel m = model_from_deterministic(det);
    const Phenomenon p = predict(t);

    ModelCheck s = verify_model(m, p);
    ModelCheck q = par::verify_model(m, p);
    CHECK(s.ok);
    CHECK(q.ok);
    CHECK(s.max_deviation == q.max_deviation);
    CHECK(s.where == q.where);

    m.support[0].weight += 0.05;  // now it misses the table
    s = verify_model(m, p);
    q = par::verify_model(m, p);
    CHECK_FALSE(s.ok);
    CHECK_FALSE(q.ok);
    CHECK(s.max_deviation == q.max_deviation);
    CHECK(s.where == q.where);
}

TEST_CASE("parallel local bound agrees, including on tie-prone tensors") {
    // 4^5 strategies per wing — slightly over the default cap, so the
    // explicit cap is part of what this exercises.
    const Scenario sc{5, 5, 4, 4, "par"};
    const long long cap = 2'000'000;
    std::vector<double> g(static_cast<size_t>(sc.table_size()));
    Rng rng(3300);
    for (double& x : g) x = rng.gaussian();
    CHECK(par::local_bound(sc, g, cap) == local_bound_of(sc, g, cap));

    // Small integers create many strategies attaining the maximum; both
    // drivers must still report the same bound.
    std::vector<double> ties(static_cast<size_t>(sc.table_size()));
    for (double& x : ties) x = static_cast<double>(rng.range(-1, 1));
    CHECK(par::local_bound(sc, ties, cap) == local_bound_of(sc, ties, cap));
}

TEST_CASE("parallel battery reports the same bytes as serial") {
    BatteryConfig cfg;
    cfg.seed = 99;
    cfg.roundtrip_instances = 3;
    cfg.equivalence_instances = 12;
    cfg.determinism_instances = 12;
    cfg.predictability_instances = 3;
    cfg.propagation_instances = 6;
    BatteryConfig par_cfg = cfg;
    par_cfg.parallel = true;
    const BatteryReport serial = run_theorem_battery(cfg);
    const BatteryReport parallel = run_theorem_battery(par_cfg);
    CHECK(serial.all_pass);
    Json js = to_json(serial), jp = to_json(parallel);
    jp["parallel"] = false;  // the one field that legitimately differs
    CHECK(render_json(js) == render_json(jp));
}

TEST_CASE("parallel simplex pricing returns identical results") {
    SolveOptions par_opt;
    par_opt.parallel = true;

    Rng rng(3400);
    Theory t = random_theory({2, 2, 2, 2, "par"}, 3, TheoryKind::Factorizable,
                             Encoding::Rational, rng);
    const Phenomenon feas = predict(t);
    CHECK(render_json(to_json(solve_lhv(feas))) ==
          render_json(to_json(solve_lhv(feas, par_opt))));

    const ChshGeometry g = chsh_optimal_geometry();
    const Phenomenon infeas = born_phenomenon(singlet(), g.alice, g.bob);
    CHECK(render_json(to_json(solve_lhv(infeas))) ==
          render_json(to_json(solve_lhv(infeas, par_opt))));
}
