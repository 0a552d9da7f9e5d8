#include "bell/battery.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "bell/epr.hpp"
#include "bell/generators.hpp"
#include "bell/lhv.hpp"
#include "bell/quantum.hpp"
#include "bell/theory.hpp"

#ifdef BELL_HAVE_OPENMP
#include <omp.h>
#endif

namespace bell {

namespace {

constexpr double kPi = 3.14159265358979323846;

// splitmix64 finalizer: decorrelates the per-item and per-instance seeds
// drawn from one battery seed.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct Tally {
    long fails = 0;
    std::string first;
};

// Run n independent instances; fn(i) returns "" on success or a failure
// description. Instances draw from their own seeded generators, so the
// parallel schedule cannot change any verdict, and the recorded failure is
// always the lowest-index one.
template <typename F>
Tally run_instances(int n, bool parallel, F&& fn) {
    std::vector<std::string> out(static_cast<size_t>(n));
#ifdef BELL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int i = 0; i < n; ++i) {
        try {
            out[static_cast<size_t>(i)] = fn(i);
        } catch (const std::exception& e) {
            out[static_cast<size_t>(i)] = std::string("error: ") + e.what();
        }
    }
    (void)parallel;
    Tally t;
    for (int i = 0; i < n; ++i)
        if (!out[static_cast<size_t>(i)].empty()) {
            if (t.fails == 0)
                t.first = "instance " + std::to_string(i) + ": " + out[static_cast<size_t>(i)];
            t.fails += 1;
        }
    return t;
}

template <typename Fn>
BatteryItem timed_item(const std::string& name, std::uint64_t seed, Fn&& fn) {
    BatteryItem it;
    it.name = name;
    it.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn(it);
    } catch (const std::exception& e) {
        it.pass = false;
        it.detail = std::string("error: ") + e.what();
    }
    it.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return it;
}

std::string prop_line(const PropertyVector& pv) {
    std::ostringstream os;
    os << "D=" << status_name(pv.determinism.status) << " L=" << status_name(pv.locality.status)
       << " F=" << status_name(pv.factorizability.status)
       << " JC=" << status_name(pv.jarrett_completeness.status)
       << " FL=" << status_name(pv.fragile_locality.status);
    return os.str();
}

// The brute-force local completion of an arbitrary phenomenon: one hidden
// state per assignment of an outcome pair to every setting block, weighted
// by the product of the block probabilities it picks. Deterministic by
// construction, reproduces the table exactly, and (for a signalling table)
// nonlocal in every λ-resolved sense.
Theory block_product_theory(const Phenomenon& p) {
    const Scenario& s = p.scenario;
    const int blocks = s.m_a * s.m_b;
    const int per = s.k_a * s.k_b;
    long long count = 1;
    for (int i = 0; i < blocks; ++i) {
        count *= per;
        if (count > 65536) throw InputError("scenario too large for block-product construction");
    }
    const size_t ts = s.table_size();
    std::vector<double> mu(static_cast<size_t>(count));
    std::vector<double> kern(static_cast<size_t>(count) * ts, 0.0);
    std::vector<std::string> labels(static_cast<size_t>(count));
    std::vector<int> digit(static_cast<size_t>(blocks));
    for (long long l = 0; l < count; ++l) {
        long long rest = l;
        for (int blk = blocks - 1; blk >= 0; --blk) {
            digit[static_cast<size_t>(blk)] = static_cast<int>(rest % per);
            rest /= per;
        }
        double w = 1;
        std::string lab = "g";
        for (int blk = 0; blk < blocks; ++blk) {
            const int d = digit[static_cast<size_t>(blk)];
            w *= p.table[static_cast<size_t>(blk * per + d)];
            lab += static_cast<char>('0' + d);
        }
        mu[static_cast<size_t>(l)] = w;
        labels[static_cast<size_t>(l)] = lab;
        for (int blk = 0; blk < blocks; ++blk)
            kern[static_cast<size_t>(l) * ts +
                 static_cast<size_t>(blk * per + digit[static_cast<size_t>(blk)])] = 1.0;
    }
    return Theory::from_float(s, p.values, std::move(labels), std::move(mu), std::move(kern),
                              p.tolerance);
}

Scenario battery_scenario() { return Scenario{2, 2, 2, 2, "battery"}; }

}  // namespace

BatteryReport run_theorem_battery(const BatteryConfig& cfg) {
    BatteryReport rep;
    rep.seed = cfg.seed;
    rep.encoding = cfg.encoding;
    rep.parallel = cfg.parallel;
    rep.fault_injected = cfg.fault != BatteryFault::None;

    const Encoding enc = cfg.encoding;
    const double tol = enc == Encoding::Rational ? 0.0 : 1e-9;
    const Scenario sc = battery_scenario();
    SolveOptions sopt;
    sopt.parallel = cfg.parallel;

    // The singlet at the maximally violating geometry: CHSH at -2*sqrt(2),
    // no local model in float or exact arithmetic, CHSH-form certificate
    // with local bound exactly 2 and a positive gap.
    rep.items.push_back(timed_item("singlet-has-no-local-model", cfg.seed, [&](BatteryItem& it) {
        it.instances = 1;
        const ChshGeometry g = chsh_optimal_geometry();
        const Phenomenon ph = born_phenomenon(singlet(), g.alice, g.bob, "chsh singlet");
        const double S = chsh_value(ph, g.settings);
        std::ostringstream os;
        os << "S=" << S;
        if (std::fabs(std::fabs(S) - 2.0 * std::sqrt(2.0)) > 1e-9) {
            it.detail = os.str() + "; expected |S|=2*sqrt(2)";
            it.failures = 1;
            return;
        }
        const LhvResult rf = solve_lhv(ph, sopt);
        if (rf.outcome != LhvOutcome::Infeasible || !rf.certificate ||
            rf.certificate->name != "chsh") {
            it.detail = os.str() + "; float solve: " + lhv_outcome_name(rf.outcome) +
                        " (wanted infeasible with chsh certificate)";
            it.failures = 1;
            return;
        }
        std::array<Rat, 4> E;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                E[static_cast<size_t>(a * 2 + b)] = rat_from_double(correlator(ph, a, b));
        const Phenomenon phx = correlation_phenomenon_exact(E, "chsh singlet");
        const LhvResult rx = solve_lhv(phx, sopt);
        if (rx.outcome != LhvOutcome::Infeasible || !rx.certificate ||
            rx.certificate->name != "chsh" || rx.certificate->r_local_bound != Rat(2) ||
            !(rx.certificate->r_gap > Rat(0))) {
            it.detail = os.str() + "; exact solve: " + lhv_outcome_name(rx.outcome) +
                        " (wanted infeasible, bound exactly 2, positive gap)";
            it.failures = 1;
            return;
        }
        const CertificateCheck cc = verify_certificate(*rx.certificate, phx, 0.0);
        if (!cc.ok || !cc.separates) {
            it.detail = os.str() + "; exact certificate failed independent verification";
            it.failures = 1;
            return;
        }
        os << "; local bound 2, gap " << rat_to_double(rx.certificate->r_gap)
           << ", iterations " << rx.iterations;
        it.pass = true;
        it.detail = os.str();
    }));

    // Determinization round trip: a factorizable theory determinizes to an
    // equally predictive deterministic local theory, whose strategy mixture
    // verifies against the original prediction; the LP finds a model too.
    const std::uint64_t seed_rt = mix(cfg.seed ^ 0x11);
    rep.items.push_back(
        timed_item("factorizable-determinize-roundtrip", seed_rt, [&](BatteryItem& it) {
            it.instances = cfg.roundtrip_instances;
            const Tally t =
                run_instances(cfg.roundtrip_instances, cfg.parallel, [&](int i) -> std::string {
                    Rng rng(mix(seed_rt + static_cast<std::uint64_t>(i)));
                    const int nl = rng.range(1, 3);
                    const Theory th = random_theory(sc, nl, TheoryKind::Factorizable, enc, rng);
                    Theory det = determinize(th);
                    if (cfg.fault == BatteryFault::Roundtrip && i == 0 && !det.mu.empty()) {
                        det.mu[0] += 0.1;
                        if (det.exact()) det.rmu[0] += Rat(1, 10);
                    }
                    const PropertyVector pv = classify(det, tol, FlMode::Strong);
                    if (!pv.determinism.satisfied() || !pv.locality.satisfied() ||
                        !pv.factorizability.satisfied() || !pv.jarrett_completeness.satisfied() ||
                        !pv.fragile_locality.satisfied())
                        return "determinized theory lost a property: " + prop_line(pv);
                    const Phenomenon pred = predict(th);
                    const ReproductionReport rr = reproduces(det, pred, tol);
                    if (!rr.ok)
                        return "determinized theory drifted by " +
                               std::to_string(rr.max_deviation);
                    const LhvModel m = model_from_deterministic(det, tol);
                    if (!verify_model(m, pred, tol).ok)
                        return "strategy mixture from determinization failed verification";
                    const LhvResult r = solve_lhv(pred, sopt);
                    if (r.outcome != LhvOutcome::Feasible || !r.model)
                        return std::string("solver verdict ") + lhv_outcome_name(r.outcome) +
                               " on a factorizable prediction";
                    if (!verify_model(*r.model, pred, tol).ok)
                        return "solver model failed verification";
                    return "";
                });
            it.failures = t.fails;
            it.pass = t.fails == 0;
            it.detail = t.fails == 0 ? "determinize and solve agree on every instance" : t.first;
        }));

    // Factorizability is exactly locality plus Jarrett completeness, across
    // every structural family of random theories (the classifier also
    // cross-checks this internally and would throw on a discrepancy).
    const std::uint64_t seed_eq = mix(cfg.seed ^ 0x22);
    rep.items.push_back(
        timed_item("factorizable-iff-local-and-complete", seed_eq, [&](BatteryItem& it) {
            it.instances = cfg.equivalence_instances;
            const TheoryKind kinds[] = {TheoryKind::Generic,    TheoryKind::Deterministic,
                                        TheoryKind::Factorizable, TheoryKind::LocalNotJc,
                                        TheoryKind::JcNotLocal,  TheoryKind::JcFl};
            const Tally t =
                run_instances(cfg.equivalence_instances, cfg.parallel, [&](int i) -> std::string {
                    Rng rng(mix(seed_eq + static_cast<std::uint64_t>(i)));
                    const int nl = rng.range(1, 3);
                    const Theory th = random_theory(sc, nl, kinds[i % 6], enc, rng);
                    const PropertyVector pv = classify(th, tol, FlMode::Strong);
                    const bool f = pv.factorizability.satisfied();
                    const bool lc = pv.locality.satisfied() && pv.jarrett_completeness.satisfied();
                    if (f != lc) return "equivalence discrepancy: " + prop_line(pv);
                    return "";
                });
            it.failures = t.fails;
            it.pass = t.fails == 0;
            it.detail = t.fails == 0 ? "no discrepancy across mixed families" : t.first;
        }));

    // Deterministic kernels are Jarrett-complete, always.
    const std::uint64_t seed_dc = mix(cfg.seed ^ 0x33);
    rep.items.push_back(
        timed_item("deterministic-implies-complete", seed_dc, [&](BatteryItem& it) {
            it.instances = cfg.determinism_instances;
            const Tally t =
                run_instances(cfg.determinism_instances, cfg.parallel, [&](int i) -> std::string {
                    Rng rng(mix(seed_dc + static_cast<std::uint64_t>(i)));
                    const int nl = rng.range(1, 4);
                    const Theory th = random_theory(sc, nl, TheoryKind::Deterministic, enc, rng);
                    const PropertyVector pv = classify(th, tol, FlMode::Strong);
                    if (!pv.determinism.satisfied()) return "generator emitted a non-deterministic theory";
                    if (!pv.jarrett_completeness.satisfied())
                        return "deterministic theory judged incomplete: " + prop_line(pv);
                    return "";
                });
            it.failures = t.fails;
            it.pass = t.fails == 0;
            it.detail = t.fails == 0 ? "completeness held for every deterministic instance" : t.first;
        }));

    // A factorizable theory whose prediction is two-way predictable at a
    // setting pair must be outcome-deterministic there, hidden state by
    // hidden state.
    const std::uint64_t seed_pd = mix(cfg.seed ^ 0x44);
    rep.items.push_back(
        timed_item("predictability-forces-determinism", seed_pd, [&](BatteryItem& it) {
            it.instances = cfg.predictability_instances;
            const Tally t = run_instances(
                cfg.predictability_instances, cfg.parallel, [&](int i) -> std::string {
                    Rng rng(mix(seed_pd + static_cast<std::uint64_t>(i)));
                    const int nl = rng.range(1, 3);
                    const Theory th = random_factorizable_with_planted_pair(sc, nl, enc, rng);
                    const PredictabilityDeterminism r =
                        check_predictability_forces_determinism(th, tol);
                    if (r.vacuous) return "planted pair was not predictable";
                    if (!r.pass)
                        return "non-extreme kernel at a predictable pair (dev " +
                               std::to_string(r.failures.front().deviation) + ")";
                    return "";
                });
            it.failures = t.fails;
            it.pass = t.fails == 0;
            it.detail =
                t.fails == 0 ? "kernels deterministic at every predictable pair" : t.first;
        }));

    // Jarrett-complete fragile-local theories: an extreme phenomenon
    // conditional pins the remote marginal of every surviving hidden state
    // to the same extreme value, independently of the nearby setting.
    const std::uint64_t seed_cp = mix(cfg.seed ^ 0x55);
    rep.items.push_back(timed_item("certainty-pins-hidden-states", seed_cp, [&](BatteryItem& it) {
        it.instances = cfg.propagation_instances;
        const Tally t =
            run_instances(cfg.propagation_instances, cfg.parallel, [&](int i) -> std::string {
                Rng rng(mix(seed_cp + static_cast<std::uint64_t>(i)));
                const int nl = rng.range(1, 3);
                const Theory th = random_theory(sc, nl, TheoryKind::JcFl, enc, rng);
                const JcflCheck r = check_jcfl_implies_rep(th, predict(th), tol);
                if (r.vacuous) return "no extreme conditional in a planted-certainty instance";
                if (!r.pass)
                    return "hidden state escaped a certain conditional (dev " +
                           std::to_string(r.failures.front().deviation) + ")";
                return "";
            });
        it.failures = t.fails;
        it.pass = t.fails == 0;
        it.detail = t.fails == 0 ? "every certain conditional pinned every hidden state" : t.first;
    }));

    // The boxes: a local model exists (the even mixture of the two
    // strategies that put the ball in exactly one box), and the
    // single-state operational theory fails factorizability and Jarrett
    // completeness — incompleteness rather than nonlocality.
    rep.items.push_back(timed_item("einstein-boxes", mix(cfg.seed ^ 0x66), [&](BatteryItem& it) {
        it.instances = 1;
        const Phenomenon bx = boxes_phenomenon();
        const LhvResult r = solve_lhv(bx, sopt);
        if (r.outcome != LhvOutcome::Feasible || !r.model) {
            it.detail = std::string("boxes block judged ") + lhv_outcome_name(r.outcome);
            it.failures = 1;
            return;
        }
        if (r.model->support.size() != 2 || r.model->support[0].rweight != Rat(1, 2) ||
            r.model->support[1].rweight != Rat(1, 2)) {
            it.detail = "boxes model is not the even two-strategy mixture";
            it.failures = 1;
            return;
        }
        const Theory tb = boxes_oqm_theory();
        const PropertyVector pv = classify(tb, 0.0, FlMode::Strong);
        if (pv.factorizability.satisfied() || pv.jarrett_completeness.satisfied() ||
            pv.determinism.satisfied()) {
            it.detail = "single-state boxes theory misclassified: " + prop_line(pv);
            it.failures = 1;
            return;
        }
        const EprReport er = check_completeness_implication(tb, bx, 0.0);
        if (er.pass || er.vacuous) {
            it.detail = "boxes completeness implication did not fail as it must";
            it.failures = 1;
            return;
        }
        it.pass = true;
        it.detail = "local model (1/2,1/2); single-state theory incomplete (" + prop_line(pv) + ")";
    }));

    // Perfect anticorrelation at aligned settings grants elements of
    // reality on both wings; the operational quantum theory represents
    // neither, so the completeness implication fails in both directions.
    rep.items.push_back(
        timed_item("singlet-completeness-verdict", mix(cfg.seed ^ 0x77), [&](BatteryItem& it) {
            it.instances = 1;
            const std::vector<MeasurementSetting> s2 = {MeasurementSetting::in_plane(0.0),
                                                        MeasurementSetting::in_plane(kPi / 2)};
            const Phenomenon ph = born_phenomenon(singlet(), s2, s2, "aligned singlet");
            const Theory th = oqm_theory(singlet(), {{1.0, singlet()}}, s2, s2, "aligned singlet");
            const EprReport er = check_completeness_implication(th, ph, 1e-9);
            if (er.vacuous) {
                it.detail = "no element of reality at aligned settings";
                it.failures = 1;
                return;
            }
            if (er.pass) {
                it.detail = "operational theory passed a completeness check it must fail";
                it.failures = 1;
                return;
            }
            bool bob_fail = false, alice_fail = false;
            for (const EprChainEntry& e : er.chain)
                if (e.element && e.rep_checked && !e.rep_ok) {
                    (e.wing == 'B' ? bob_fail : alice_fail) = true;
                }
            if (!bob_fail || !alice_fail) {
                it.detail = "expected unrepresented elements on both wings";
                it.failures = 1;
                return;
            }
            it.pass = true;
            it.detail = "elements on both wings, neither represented";
        }));

    // At a geometry with both a violating CHSH quadruple and an aligned
    // pair: the operational theory keeps (fragile) locality but stays
    // incomplete; the deterministic block-product completion is complete
    // but loses locality in both senses. Every conjunction a completion
    // would need — locality+completeness, fragile locality+completeness,
    // fragile locality+determinism — fails for both.
    rep.items.push_back(
        timed_item("perfect-correlation-tradeoffs", mix(cfg.seed ^ 0x88), [&](BatteryItem& it) {
            it.instances = 1;
            const std::vector<MeasurementSetting> alice = {MeasurementSetting::in_plane(kPi / 2),
                                                           MeasurementSetting::in_plane(0.0),
                                                           MeasurementSetting::in_plane(kPi / 4)};
            const std::vector<MeasurementSetting> bob = {MeasurementSetting::in_plane(kPi / 4),
                                                         MeasurementSetting::in_plane(3 * kPi / 4)};
            const Phenomenon ph = born_phenomenon(singlet(), alice, bob, "singlet aligned+chsh");
            const double S = chsh_value(ph, ChshSettings{0, 1, 0, 1});
            if (std::fabs(S) <= 2.0 + 1e-6) {
                it.detail = "geometry failed to violate the local bound";
                it.failures = 1;
                return;
            }
            if (std::fabs(correlator(ph, 2, 0) + 1.0) > 1e-9 ||
                !is_predictable(ph, 2, 0, 1e-9).holds()) {
                it.detail = "aligned pair not perfectly anticorrelated";
                it.failures = 1;
                return;
            }
            const Theory tq =
                oqm_theory(singlet(), {{1.0, singlet()}}, alice, bob, "singlet aligned+chsh");
            const PropertyVector pq = classify(tq, 1e-9, FlMode::Strong);
            const bool q_ok = pq.locality.satisfied() && pq.fragile_locality.satisfied() &&
                              !pq.jarrett_completeness.satisfied() && !pq.determinism.satisfied();
            const Theory td = block_product_theory(ph);
            const ReproductionReport rr = reproduces(td, ph, 1e-9);
            const PropertyVector pd = classify(td, 1e-9, FlMode::Strong);
            const bool d_ok = rr.ok && pd.determinism.satisfied() &&
                              pd.jarrett_completeness.satisfied() && !pd.locality.satisfied() &&
                              !pd.fragile_locality.satisfied();
            if (!q_ok) {
                it.detail = "operational theory: " + prop_line(pq);
                it.failures = 1;
                return;
            }
            if (!d_ok) {
                it.detail = "block-product completion: " + prop_line(pd) +
                            (rr.ok ? "" : " (and it failed to reproduce)");
                it.failures = 1;
                return;
            }
            // Both candidate completions violate every rescue conjunction.
            const bool conj = (pq.locality.satisfied() && pq.jarrett_completeness.satisfied()) ||
                              (pq.fragile_locality.satisfied() &&
                               pq.jarrett_completeness.satisfied()) ||
                              (pq.fragile_locality.satisfied() && pq.determinism.satisfied()) ||
                              (pd.locality.satisfied() && pd.jarrett_completeness.satisfied()) ||
                              (pd.fragile_locality.satisfied() &&
                               pd.jarrett_completeness.satisfied()) ||
                              (pd.fragile_locality.satisfied() && pd.determinism.satisfied());
            if (conj) {
                it.detail = "a rescue conjunction unexpectedly held";
                it.failures = 1;
                return;
            }
            it.pass = true;
            it.detail = "operational: " + prop_line(pq) + "; completion: " + prop_line(pd);
        }));

    rep.all_pass = true;
    for (const BatteryItem& it : rep.items)
        if (!it.pass) rep.all_pass = false;
    return rep;
}

}  // namespace bell
