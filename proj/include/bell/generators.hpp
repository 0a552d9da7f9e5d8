#pragma once

// Seeded random instances for the theorem batteries and property tests.
// Probabilities are drawn on an integer grid (numerator / block total), so
// the same draw can be emitted exactly as rationals or rounded as floats and
// both encodings see the same mathematical object. All entries are bounded
// away from 0 and 1 except where a construction plants exact point masses,
// keeping float verdicts far from every tolerance boundary.

#include <array>
#include <cstdint>
#include <random>

#include "bell/phenomenon.hpp"
#include "bell/quantum.hpp"
#include "bell/theory.hpp"

namespace bell {

// mt19937_64 with hand-rolled draws, so streams are identical across
// platforms and standard-library versions.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t bits() { return eng(); }
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    long long below(long long n) { return static_cast<long long>(bits() % static_cast<std::uint64_t>(n)); }
    int range(int lo, int hi_inclusive) {  // uniform on [lo, hi]
        return lo + static_cast<int>(below(hi_inclusive - lo + 1));
    }
    double gaussian() {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
};

// The structural families a random theory can be drawn from.
enum class TheoryKind {
    Generic,        // arbitrary kernels: usually nothing holds
    Deterministic,  // random response pair per (a,b): D holds, L usually not
    Factorizable,   // product of setting-local marginals: L, F, JC hold
    LocalNotJc,     // setting-local marginals, correlated within blocks
    JcNotLocal,     // blockwise products with remote-dependent factors
    JcFl,           // blockwise products, extreme only at the planted pair
};

// n_lambda hidden states over sc. The planted families JcFl and (optionally)
// Factorizable put an exact, bijection-linked point mass at setting pair
// (0,0), which makes predict(t) outcome-predictable there in both
// directions. Scenario must be at least 2x2x2x2 for the planted families.
Theory random_theory(const Scenario& sc, int n_lambda, TheoryKind kind, Encoding enc, Rng& rng);

// Factorizable with the deterministic planted pair at (0,0) (used by the
// predictability-forces-determinism battery).
Theory random_factorizable_with_planted_pair(const Scenario& sc, int n_lambda, Encoding enc,
                                             Rng& rng);

// A valid random phenomenon (independent normalized blocks).
Phenomenon random_phenomenon(const Scenario& sc, Encoding enc, Rng& rng);

// Uniformly random direction (Gaussian 3-vector, normalised).
MeasurementSetting random_setting(Rng& rng);

// Random mixed state: G G† / tr for a complex Gaussian G.
TwoQubitState random_state(Rng& rng);

// Correlation-form 2x2 table f(A,B|a,b) = (1 + val(A)·val(B)·E[2a+b]) / 4
// with outcome values (+1,-1). Exactly normalized and exactly no-signalling
// for any E in [-1,1]^4 — the rational variant is therefore safe to hand to
// the exact solver. Throws InputError if some |E| > 1.
Phenomenon correlation_phenomenon(const std::array<double, 4>& E, const std::string& context);
Phenomenon correlation_phenomenon_exact(const std::array<Rat, 4>& E, const std::string& context);

}  // namespace bell
