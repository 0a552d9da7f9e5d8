#pragma once

// Two-qubit states, spin projectors and the trace rule, generating the
// quantum phenomena and operational theories the rest of the library
// dissects. The 4x4 complex linear algebra lives here on purpose: the few
// operations needed (products, Kronecker, trace, a Jacobi eigensolve for
// positivity) are small enough that owning them keeps every number in the
// pipeline auditable.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "bell/phenomenon.hpp"
#include "bell/theory.hpp"

namespace bell {

using Cx = std::complex<double>;
using Mat2 = std::array<Cx, 4>;    // row-major 2x2
using Mat4 = std::array<Cx, 16>;   // row-major 4x4

// A projective spin measurement direction: a unit Bloch vector. Outcome
// index 0 is the +1 eigenvalue along n, index 1 the -1 eigenvalue.
struct MeasurementSetting {
    double nx = 0, ny = 0, nz = 1;

    // Angle within a coordinate plane: "xz" gives (sin t, 0, cos t),
    // "xy" gives (cos t, sin t, 0). Radians.
    static MeasurementSetting in_plane(double t, const std::string& plane = "xz");
    void check_unit(double tol = 1e-9) const;
};

struct TwoQubitState {
    Mat4 rho{};

    // Hermitian within 1e-12, unit trace within 1e-12, eigenvalues above
    // -1e-10. Throws InputError with the violated clause.
    void check_valid() const;
};

// |psi-><psi-|, exactly representable entries.
TwoQubitState singlet();
// v * singlet + (1-v)/4 * I. Valid as a state for v in [-1/3, 1].
TwoQubitState werner(double v);

Mat2 projector(const MeasurementSetting& n, int outcome);
Mat4 kron(const Mat2& x, const Mat2& y);

// Tr[rho (Pi_A tensor Pi_B)] (real part; the imaginary part is roundoff).
double born_probability(const TwoQubitState& s, const MeasurementSetting& a,
                        const MeasurementSetting& b, int A, int B);

// Ascending eigenvalues by cyclic Jacobi with complex rotations.
std::array<double, 4> hermitian_eigenvalues(const Mat4& m);

// The full predicted table over given setting lists; outcome values ±1.
// The result is checked to be signal-local within 1e-9 (it must be, by
// construction) — a violation throws InternalInconsistency.
Phenomenon born_phenomenon(const TwoQubitState& s, const std::vector<MeasurementSetting>& alice,
                           const std::vector<MeasurementSetting>& bob,
                           const std::string& context = "quantum");

// One hidden state per mixture component, each responding by the trace rule.
// Weights must be nonnegative and sum to 1 within 1e-12, every component
// must be a valid state, and the mixture must reconstruct `s` within 1e-10
// entrywise. Components may themselves be mixed — the trivial decomposition
// (the state itself, weight 1) is always admissible.
struct OqmComponent {
    double weight = 1;
    TwoQubitState state;
};

Theory oqm_theory(const TwoQubitState& s, const std::vector<OqmComponent>& components,
                  const std::vector<MeasurementSetting>& alice,
                  const std::vector<MeasurementSetting>& bob,
                  const std::string& context = "quantum");

// The one-particle/two-boxes setup: a single preparation, one opening per
// wing, outcomes (found, empty), perfect anticorrelation with even odds.
// Exact rational tables.
Phenomenon boxes_phenomenon();
// The same block as a single-hidden-state operational theory ("the wave
// function is the complete state").
Theory boxes_oqm_theory();

// The standard maximally-violating geometry in the xz plane, paired with
// the setting quadruple that attains |S| = 2*sqrt(2) on the singlet.
struct ChshGeometry {
    std::vector<MeasurementSetting> alice;
    std::vector<MeasurementSetting> bob;
    ChshSettings settings;
};
ChshGeometry chsh_optimal_geometry();

}  // namespace bell
