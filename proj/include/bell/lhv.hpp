#pragma once

// Membership of a phenomenon in the local deterministic polytope, decided by
// exact or float phase-1 simplex over the deterministic strategies, with a
// constructive model on the feasible branch and a separating inequality
// (Farkas dual, canonicalised to CHSH when one applies) on the infeasible
// branch. Also: independent verifiers for both artifacts, and the
// determinization construction for factorizable theories.

#include <optional>
#include <string>
#include <vector>

#include "bell/phenomenon.hpp"
#include "bell/strategies.hpp"
#include "bell/theory.hpp"

namespace bell {

struct WeightedStrategy {
    DeterministicStrategy strategy;
    double weight = 0;
    Rat rweight;  // meaningful iff the model is rational
};

struct LhvModel {
    Scenario scenario;
    Encoding encoding = Encoding::Float64;
    std::vector<WeightedStrategy> support;  // strictly positive weights only
};

struct BellCertificate {
    Scenario scenario;
    Encoding encoding = Encoding::Float64;
    // Coefficient tensor c[a][b][A][B]; the inequality is
    //   sum c·f  <=  local_bound   for every local phenomenon f,
    // and this phenomenon attains `value` = local_bound + gap > local_bound.
    std::vector<double> coeffs;
    std::vector<Rat> rcoeffs;
    double local_bound = 0, value = 0, gap = 0;
    Rat r_local_bound, r_value, r_gap;
    // "chsh" when canonicalised to a CHSH sign-variant (coefficients ±1,
    // bound exactly 2); empty for a raw scaled Farkas dual.
    std::string name;
};

enum class LhvOutcome { Feasible, Infeasible, Ambiguous };

inline const char* lhv_outcome_name(LhvOutcome o) {
    switch (o) {
        case LhvOutcome::Feasible: return "feasible";
        case LhvOutcome::Infeasible: return "infeasible";
        default: return "ambiguous";
    }
}

struct LhvResult {
    LhvOutcome outcome = LhvOutcome::Ambiguous;
    std::optional<LhvModel> model;
    std::optional<BellCertificate> certificate;
    std::string note;
    long long strategies = 0;
    long iterations = 0;
};

struct SolveOptions {
    long long cap = 0;    // <=0: BELL_STRATEGY_CAP / built-in default
    double tol = -1;      // <0: phenomenon's own tolerance
    bool parallel = false;  // OpenMP pricing in the simplex
};

// Rational input (tol 0) gives an exact verdict: Feasible with an exact
// model or Infeasible with an exact certificate, never Ambiguous. Float
// input re-checks the winning artifact at `tol` and reports Ambiguous when
// neither a model nor a positive-gap certificate survives.
LhvResult solve_lhv(const Phenomenon& p, const SolveOptions& opt = {});

struct ModelCheck {
    bool ok = false;
    double max_deviation = 0;
    std::vector<int> where;  // worst {a,b,A,B}
};

// Independent re-summation sum_s w_s D_s against p's table — no simplex
// state involved. Exact when both sides are rational and tol is 0.
ModelCheck verify_model(const LhvModel& m, const Phenomenon& p);
ModelCheck verify_model(const LhvModel& m, const Phenomenon& p, double tol);

struct CertificateCheck {
    bool ok = false;          // stored numbers confirmed AND value > bound
    bool separates = false;   // recomputed value > recomputed bound
    double local_bound = 0;   // recomputed over all strategies
    double value = 0;         // recomputed contraction against p
    std::string note;
};

// Recomputes the bound by full strategy enumeration and the value by direct
// contraction, then compares against the stored fields.
CertificateCheck verify_certificate(const BellCertificate& c, const Phenomenon& p,
                                    long long cap = 0);

// max_s sum_{a,b} c(a,b,alpha(a),beta(b)) over all deterministic strategies.
double local_bound_of(const Scenario& sc, const std::vector<double>& coeffs, long long cap = 0);
Rat local_bound_of_exact(const Scenario& sc, const std::vector<Rat>& coeffs, long long cap = 0);

// The constructive half of the locality/determinism equivalence: a
// factorizable theory is re-expressed over hidden states (λ, alpha, beta)
// with deterministic local kernels, preserving its prediction. Weights are
// mu(λ)·prod_a Pbar(alpha(a)|a,λ)·prod_b Pbar(beta(b)|b,λ) with Pbar the
// block-averaged single-wing marginals; exact-zero components are dropped.
// PreconditionError if the theory is not factorizable at tol; CapError if
// |Λ|·#strategies exceeds cap.
Theory determinize(const Theory& t);
Theory determinize(const Theory& t, double tol, long long cap = 0);

// A model re-read as a theory: one hidden state per support strategy with
// the matching deterministic local kernel.
Theory theory_from_model(const LhvModel& m, const OutcomeValues& vals, const std::string& context);

// The reverse reading for deterministic local theories: each hidden state's
// kernel is collapsed to its strategy and weights are grouped by strategy.
// PreconditionError unless determinism and locality hold at tol.
LhvModel model_from_deterministic(const Theory& t);
LhvModel model_from_deterministic(const Theory& t, double tol);

}  // namespace bell
