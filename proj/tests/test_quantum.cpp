#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bell/generators.hpp"
#include "bell/quantum.hpp"
#include "bell/theory.hpp"

using namespace bell;

namespace {

constexpr double kPi = 3.14159265358979323846;

double dot(const MeasurementSetting& x, const MeasurementSetting& y) {
    return x.nx * y.nx + x.ny * y.ny + x.nz * y.nz;
}

// E(a,b) straight from the trace rule, outcome values (+1,-1).
double born_correlator(const TwoQubitState& s, const MeasurementSetting& a,
                       const MeasurementSetting& b) {
    double e = 0;
    for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B)
            e += (A == 0 ? 1 : -1) * (B == 0 ? 1 : -1) * born_probability(s, a, b, A, B);
    return e;
}

}  // namespace

TEST_CASE("projectors are Hermitian, idempotent, trace one, and sum to identity") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const MeasurementSetting n = random_setting(rng);
        const Mat2 p0 = projector(n, 0), p1 = projector(n, 1);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                // Hermitian: p[r][c] == conj(p[c][r]).
                CHECK(std::abs(p0[r * 2 + c] - std::conj(p0[c * 2 + r])) < 1e-12);
                // Idempotent: (p0 p0)[r][c] == p0[r][c].
                Cx acc(0);
                for (int k = 0; k < 2; ++k) acc += p0[r * 2 + k] * p0[k * 2 + c];
                CHECK(std::abs(acc - p0[r * 2 + c]) < 1e-12);
                // Completeness.
                const Cx id = (r == c) ? Cx(1) : Cx(0);
                CHECK(std::abs(p0[r * 2 + c] + p1[r * 2 + c] - id) < 1e-12);
            }
        CHECK(std::abs(p0[0] + p0[3] - Cx(1)) < 1e-12);  // trace
    }
}

TEST_CASE("the singlet correlator is minus the dot product of the directions") {
    const TwoQubitState s = singlet();
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const MeasurementSetting a = random_setting(rng), b = random_setting(rng);
        CHECK(born_correlator(s, a, b) == doctest::Approx(-dot(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("singlet and Werner states pass state validation") {
    CHECK_NOTHROW(singlet().check_valid());
    for (double v : {-1.0 / 3.0, 0.0, 0.5, 1.0}) CHECK_NOTHROW(werner(v).check_valid());
}

TEST_CASE("Werner eigenvalues match the closed form") {
    for (double v : {0.0, 0.3, 0.7, 1.0}) {
        const std::array<double, 4> ev = hermitian_eigenvalues(werner(v).rho);
        // Ascending: three copies of (1-v)/4 then (1+3v)/4.
        for (int i = 0; i < 3; ++i) CHECK(ev[i] == doctest::Approx((1 - v) / 4).epsilon(1e-10));
        CHECK(ev[3] == doctest::Approx((1 + 3 * v) / 4).epsilon(1e-10));
    }
}

TEST_CASE("random mixed states are valid states") {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) CHECK_NOTHROW(random_state(rng).check_valid());
}

TEST_CASE("singlet marginals are even odds at every setting") {
    const ChshGeometry g = chsh_optimal_geometry();
    const Phenomenon p = born_phenomenon(singlet(), g.alice, g.bob);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            for (double m : conditional_marginal_a(p, a, b))
                CHECK(m == doctest::Approx(0.5).epsilon(1e-12));
            for (double m : conditional_marginal_b(p, a, b))
                CHECK(m == doctest::Approx(0.5).epsilon(1e-12));
        }
}

TEST_CASE("the optimal geometry attains S = -2*sqrt(2) on the singlet") {
    const ChshGeometry g = chsh_optimal_geometry();
    CHECK(g.settings.a0 == 0);
    CHECK(g.settings.a1 == 1);
    CHECK(g.settings.b0 == 0);
    CHECK(g.settings.b1 == 1);
    const Phenomenon p = born_phenomenon(singlet(), g.alice, g.bob);
    CHECK(chsh_value(p, g.settings) ==
          doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("Werner CHSH scales linearly in the visibility") {
    const ChshGeometry g = chsh_optimal_geometry();
    for (double v : {0.0, 0.25, 0.5, 1.0 / std::sqrt(2.0), 0.9}) {
        const Phenomenon p = born_phenomenon(werner(v), g.alice, g.bob);
        CHECK(chsh_value(p, g.settings) ==
              doctest::Approx(-2.0 * std::sqrt(2.0) * v).epsilon(1e-11));
    }
}

TEST_CASE("operational quantum theories reproduce their Born table") {
    const ChshGeometry g = chsh_optimal_geometry();

    // Trivial decomposition of the singlet.
    Theory t = oqm_theory(singlet(), {{1.0, singlet()}}, g.alice, g.bob);
    CHECK(reproduces(t, born_phenomenon(singlet(), g.alice, g.bob)).ok);

    // A genuine two-component decomposition of Werner 1/2:
    // rho = 1/2 singlet + 1/2 (identity/4), both valid states.
    TwoQubitState id4;
    for (int i = 0; i < 4; ++i) id4.rho[i * 4 + i] = Cx(0.25);
    Theory tw = oqm_theory(werner(0.5), {{0.5, singlet()}, {0.5, id4}}, g.alice, g.bob);
    CHECK(reproduces(tw, born_phenomenon(werner(0.5), g.alice, g.bob)).ok);
    CHECK(tw.mu.size() == 2);
}

TEST_CASE("malformed mixtures are rejected") {
    const ChshGeometry g = chsh_optimal_geometry();
    // Weights off from 1.
    CHECK_THROWS_AS(oqm_theory(singlet(), {{0.7, singlet()}}, g.alice, g.bob), InputError);
    // Components that do not reconstruct the state.
    TwoQubitState id4;
    for (int i = 0; i < 4; ++i) id4.rho[i * 4 + i] = Cx(0.25);
    CHECK_THROWS_AS(oqm_theory(singlet(), {{1.0, id4}}, g.alice, g.bob), InputError);
}

TEST_CASE("the boxes block is exact perfect anticorrelation at even odds") {
    const Phenomenon p = boxes_phenomenon();
    REQUIRE(p.exact());
    CHECK(p.scenario.m_a == 1);
    CHECK(p.scenario.m_b == 1);
    CHECK(p.rat_at(0, 0, 0, 0) == Rat(0));
    CHECK(p.rat_at(0, 0, 0, 1) == Rat(1, 2));
    CHECK(p.rat_at(0, 0, 1, 0) == Rat(1, 2));
    CHECK(p.rat_at(0, 0, 1, 1) == Rat(0));
    CHECK(reproduces(boxes_oqm_theory(), p).ok);
}

TEST_CASE("in_plane directions land in the named plane and are unit") {
    const MeasurementSetting xz = MeasurementSetting::in_plane(kPi / 3);
    CHECK(xz.nx == doctest::Approx(std::sin(kPi / 3)).epsilon(1e-15));
    CHECK(xz.ny == 0.0);
    CHECK(xz.nz == doctest::Approx(std::cos(kPi / 3)).epsilon(1e-15));
    const MeasurementSetting xy = MeasurementSetting::in_plane(kPi / 5, "xy");
    CHECK(xy.nx == doctest::Approx(std::cos(kPi / 5)).epsilon(1e-15));
    CHECK(xy.ny == doctest::Approx(std::sin(kPi / 5)).epsilon(1e-15));
    CHECK(xy.nz == 0.0);
    CHECK_NOTHROW(xz.check_unit());
    MeasurementSetting bad;
    bad.nz = 1.5;
    CHECK_THROWS_AS(bad.check_unit(), InputError);
}
