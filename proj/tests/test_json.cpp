#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bell/generators.hpp"
#include "bell/json_io.hpp"
#include "bell/quantum.hpp"

using namespace bell;

namespace {

Scenario sc2222() { return {2, 2, 2, 2, "json-test"}; }

}  // namespace

TEST_CASE("phenomenon survives a JSON round trip byte for byte") {
    for (Encoding enc : {Encoding::Float64, Encoding::Rational}) {
        Rng rng(101);
        Phenomenon p = random_phenomenon(sc2222(), enc, rng);
        const std::string s1 = render_json(to_json(p));
        Phenomenon q = phenomenon_from_json(Json::parse(s1));
        const std::string s2 = render_json(to_json(q));
        CHECK(s1 == s2);
        CHECK(q.encoding == p.encoding);
        CHECK(q.scenario.context == p.scenario.context);
        CHECK(q.table == p.table);
        if (enc == Encoding::Rational) CHECK(q.rtable == p.rtable);
    }
}

TEST_CASE("theory survives a JSON round trip byte for byte") {
    for (Encoding enc : {Encoding::Float64, Encoding::Rational}) {
        Rng rng(202);
        Theory t = random_theory(sc2222(), 3, TheoryKind::Generic, enc, rng);
        const std::string s1 = render_json(to_json(t));
        Theory u = theory_from_json(Json::parse(s1));
        CHECK(render_json(to_json(u)) == s1);
        CHECK(u.mu == t.mu);
        CHECK(u.kernel == t.kernel);
        if (enc == Encoding::Rational) CHECK(u.rkernel == t.rkernel);
    }
}

TEST_CASE("model and certificate round trips preserve the solver artifacts") {
    // Feasible: uniform exact table.
    Phenomenon uni = Phenomenon::from_rational(sc2222(), OutcomeValues::pm_one(2, 2),
                                               std::vector<Rat>(16, Rat(1, 4)));
    LhvResult feas = solve_lhv(uni);
    REQUIRE(feas.model.has_value());
    const std::string m1 = render_json(to_json(*feas.model));
    LhvModel m = model_from_json(Json::parse(m1));
    CHECK(render_json(to_json(m)) == m1);
    CHECK(verify_model(m, uni, 0.0).ok);

    // Infeasible: singlet at the optimal geometry, float.
    const ChshGeometry g = chsh_optimal_geometry();
    LhvResult infeas = solve_lhv(born_phenomenon(singlet(), g.alice, g.bob));
    REQUIRE(infeas.certificate.has_value());
    const std::string c1 = render_json(to_json(*infeas.certificate));
    BellCertificate c = certificate_from_json(Json::parse(c1));
    CHECK(render_json(to_json(c)) == c1);
    CHECK(c.name == infeas.certificate->name);
    CHECK(verify_certificate(c, born_phenomenon(singlet(), g.alice, g.bob)).ok);
}

TEST_CASE("report renderings are deterministic") {
    Rng rng(303);
    Theory t = random_theory(sc2222(), 2, TheoryKind::Factorizable, Encoding::Float64, rng);
    CHECK(render_json(to_json(classify(t))) == render_json(to_json(classify(t))));

    const Phenomenon p = predict(t);
    CHECK(render_json(to_json(solve_lhv(p))) == render_json(to_json(solve_lhv(p))));

    EprReport er = check_completeness_implication(t, p, 1e-9);
    CHECK(render_json(to_json(er)) == render_json(to_json(er)));

    BatteryConfig cfg;
    cfg.roundtrip_instances = 2;
    cfg.equivalence_instances = 4;
    cfg.determinism_instances = 4;
    cfg.predictability_instances = 2;
    cfg.propagation_instances = 2;
    CHECK(render_json(to_json(run_theorem_battery(cfg))) ==
          render_json(to_json(run_theorem_battery(cfg))));
}

TEST_CASE("missing fields and foreign format tags are rejected") {
    Rng rng(404);
    Json j = to_json(random_phenomenon(sc2222(), Encoding::Float64, rng));
    Json no_table = j;
    no_table.erase("table");
    CHECK_THROWS_AS(phenomenon_from_json(no_table), InputError);

    Json wrong_tag = j;
    wrong_tag["format"] = "theory/1";
    CHECK_THROWS_AS(phenomenon_from_json(wrong_tag), InputError);

    Json no_tag = j;
    no_tag.erase("format");
    CHECK_THROWS_AS(phenomenon_from_json(no_tag), InputError);

    CHECK_THROWS_AS(theory_from_json(j), InputError);
}

TEST_CASE("rational strings parse and format canonically") {
    CHECK(rat_format(rat_parse("3/6")) == "1/2");
    CHECK(rat_format(rat_parse("-4/8")) == "-1/2");
    CHECK(rat_format(rat_parse("5")) == "5");
    CHECK(rat_parse("0/7") == Rat(0));
    CHECK_THROWS_AS(rat_parse("1/0"), InputError);
    CHECK_THROWS_AS(rat_parse("abc"), InputError);

    // Dyadic doubles convert exactly.
    CHECK(rat_from_double(0.375) == Rat(3, 8));
    CHECK(rat_to_double(Rat(3, 8)) == 0.375);
}

TEST_CASE("loading checks shape; semantic validation stays a separate step") {
    Rng rng(505);
    Json j = to_json(random_phenomenon(sc2222(), Encoding::Float64, rng));
    j["table"][0] = 0.9;  // breaks the block sum but not the shape
    Phenomenon p = phenomenon_from_json(j);
    CHECK_FALSE(validate_phenomenon(p).ok());

    j["table"] = std::vector<double>(4, 0.25);  // wrong length
    CHECK_THROWS_AS(phenomenon_from_json(j), InputError);
}
