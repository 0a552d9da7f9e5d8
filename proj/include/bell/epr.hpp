#pragma once

// The completeness dialectic, executable: elements of reality at the
// phenomenon level (outcomes predictable with certainty at a distance),
// representation at the theory level (outcomes locally predetermined by the
// hidden state), and the implication between them that a complete theory
// must honour. Both wings are treated symmetrically throughout.

#include <optional>
#include <vector>

#include "bell/phenomenon.hpp"
#include "bell/theory.hpp"

namespace bell {

struct RepCheck {
    bool ok = false;
    bool vacuous = false;  // no positive-weight hidden state (degenerate)
    std::optional<Witness> witness;
};

// Is Bob's quantity at setting b represented in the theory: for every
// positive-weight λ and every B, the marginal P(B|a,b,λ) is extreme and
// independent of a (so P(B|b,λ) exists and is 0/1).
RepCheck rep_in_theory(const Theory& t, int b, double tol);
// Alice twin: P(A|a,b,λ) extreme and independent of b.
RepCheck rep_in_theory_alice(const Theory& t, int a, double tol);

struct EprElement {
    bool element = false;
    int witness_remote = -1;  // the remote setting that grants certainty
};

// Is there an element of reality for Bob's quantity at b: some Alice
// setting a whose outcome lets Bob's be predicted with certainty
// (Alice-to-Bob predictability at (a,b)). Disturbance of the distant wing
// is excluded by assumption, so no further conjunct is checked.
EprElement epr_element(const Phenomenon& p, int b, double tol);
EprElement epr_element_alice(const Phenomenon& p, int a, double tol);

struct PredictFlag {
    int a = 0, b = 0;
    bool alice_to_bob = false, bob_to_alice = false;
};

struct EprChainEntry {
    char wing = 'B';          // which quantity: 'B' = Bob's at `setting`, 'A' = Alice's
    int setting = 0;
    bool element = false;     // antecedent: element of reality exists
    int witness_remote = -1;  // remote setting witnessing it
    bool rep_checked = false;  // consequent examined (only when element holds)
    bool rep_ok = false;
    std::optional<Witness> rep_witness;
};

struct EprReport {
    std::vector<PredictFlag> predictability;  // every setting pair
    std::vector<EprChainEntry> chain;         // every wing-setting
    bool pass = false;     // all checked consequents hold
    bool vacuous = false;  // no element of reality anywhere: pass by default
};

// The one implication completeness is held to: wherever the phenomenon
// grants an element of reality, the theory must represent that quantity.
// Precondition: t reproduces p within tol (PreconditionError otherwise;
// InputError on shape mismatch). A failing report on a theory offered as
// complete is exactly an incompleteness verdict.
EprReport check_completeness_implication(const Theory& t, const Phenomenon& p, double tol);

struct JcflCheck {
    bool pass = false;
    bool vacuous = false;  // no extreme phenomenon conditional anywhere
    long antecedents = 0;  // extreme conditionals examined
    std::vector<Witness> failures;
};

// The mechanism behind the completeness-criteria chain: if the theory is
// Jarrett-complete and fragile-local and reproduces p, then every extreme
// phenomenon conditional f(B|A,a,b) forces the theory marginal P(B|b,λ) to
// exist (a-independent) and be extreme on the conditioned support — and
// symmetrically for Alice. Preconditions are gated, not assumed.
JcflCheck check_jcfl_implies_rep(const Theory& t, const Phenomenon& p, double tol);

// The locality-plus-predictability route to determinism, instance-checked:
// for a factorizable theory, at every setting pair where predict(t) is
// predictable in both directions, every kernel entry of every
// positive-weight λ must be extreme there.
struct PredictabilityDeterminism {
    bool pass = false;
    bool vacuous = false;  // no predictable pair
    std::vector<std::pair<int, int>> predictable_pairs;
    std::vector<Witness> failures;
};

PredictabilityDeterminism check_predictability_forces_determinism(const Theory& t, double tol);

}  // namespace bell
