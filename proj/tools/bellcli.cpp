// bellcli — check phenomena and theories, solve for local hidden-variable
// models, verify models and Bell certificates, generate quantum instances,
// and run the theorem battery. Every subcommand prints one JSON document.
//
// Exit codes: 0 affirmative/pass, 1 negative (with certificate or witness
// in the payload), 2 broken input or internal inconsistency, 3 numerically
// ambiguous. Identical inputs and flags give byte-identical output.

#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bell/battery.hpp"
#include "bell/epr.hpp"
#include "bell/generators.hpp"
#include "bell/json_io.hpp"
#include "bell/lhv.hpp"
#include "bell/quantum.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

int emit(const bell::Json& j, const std::string& out_path, int code) {
    const std::string text = bell::render_json(j);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw bell::InputError("cannot write " + out_path);
        out << text;
    }
    return code;
}

int fail_json(const std::string& kind, const std::string& message) {
    bell::Json j{{"error", bell::Json{{"kind", kind}, {"message", message}}}};
    std::cout << bell::render_json(j);
    return 2;
}

std::vector<bell::MeasurementSetting> settings_from_degrees(const std::vector<double>& deg,
                                                            const std::string& plane) {
    std::vector<bell::MeasurementSetting> out;
    out.reserve(deg.size());
    for (double d : deg) out.push_back(bell::MeasurementSetting::in_plane(d * kPi / 180.0, plane));
    return out;
}

struct Shared {
    std::string input;
    std::string out_path;
    double tol = -1;  // <0: use the artifact's own tolerance
};

double pick_tol(const Shared& sh, double fallback) { return sh.tol < 0 ? fallback : sh.tol; }

int run_check_phenomenon(const Shared& sh) {
    const bell::Phenomenon p = bell::phenomenon_from_json(bell::load_json_file(sh.input));
    const double tol = pick_tol(sh, p.tolerance);
    const bell::ValidationReport vr = bell::validate_phenomenon(p, tol);
    if (!vr.ok()) {
        bell::Json j{{"format", "phenomenon-check/1"},
                     {"validation", bell::to_json(vr)},
                     {"signal", nullptr}};
        emit(j, sh.out_path, 2);
        return 2;
    }
    const bell::SignalReport sr = bell::is_signal_local(p, tol);
    bell::Json j{{"format", "phenomenon-check/1"},
                 {"validation", bell::to_json(vr)},
                 {"signal", bell::to_json(sr)}};
    return emit(j, sh.out_path, sr.local ? 0 : 1);
}

int run_check_theory(const Shared& sh, const std::string& fl_mode) {
    const bell::Theory t = bell::theory_from_json(bell::load_json_file(sh.input));
    const double tol = pick_tol(sh, t.tolerance);
    const bell::ValidationReport vr = bell::validate_theory(t, tol);
    if (!vr.ok()) {
        bell::Json j{{"format", "theory-check/1"},
                     {"validation", bell::to_json(vr)},
                     {"properties", nullptr}};
        emit(j, sh.out_path, 2);
        return 2;
    }
    const bell::FlMode mode = fl_mode == "weak" ? bell::FlMode::Weak : bell::FlMode::Strong;
    const bell::PropertyVector pv = bell::classify(t, tol, mode);
    bell::Json j{{"format", "theory-check/1"},
                 {"validation", bell::to_json(vr)},
                 {"properties", bell::to_json(pv)}};
    return emit(j, sh.out_path, 0);
}

int run_solve(const Shared& sh, long long cap, bool parallel) {
    const bell::Phenomenon p = bell::phenomenon_from_json(bell::load_json_file(sh.input));
    bell::SolveOptions opt;
    opt.cap = cap;
    opt.tol = sh.tol;
    opt.parallel = parallel;
    const bell::LhvResult r = bell::solve_lhv(p, opt);
    int code = 3;
    if (r.outcome == bell::LhvOutcome::Feasible) code = 0;
    if (r.outcome == bell::LhvOutcome::Infeasible) code = 1;
    return emit(bell::to_json(r), sh.out_path, code);
}

int run_verify_model(const Shared& sh, const std::string& phen_path) {
    const bell::LhvModel m = bell::model_from_json(bell::load_json_file(sh.input));
    const bell::Phenomenon p = bell::phenomenon_from_json(bell::load_json_file(phen_path));
    const double tol = pick_tol(sh, p.tolerance);
    const bell::ModelCheck c = bell::verify_model(m, p, tol);
    return emit(bell::to_json(c), sh.out_path, c.ok ? 0 : 1);
}

int run_verify_certificate(const Shared& sh, const std::string& phen_path, long long cap) {
    const bell::BellCertificate c = bell::certificate_from_json(bell::load_json_file(sh.input));
    const bell::Phenomenon p = bell::phenomenon_from_json(bell::load_json_file(phen_path));
    const bell::CertificateCheck r = bell::verify_certificate(c, p, cap);
    return emit(bell::to_json(r), sh.out_path, r.ok ? 0 : 1);
}

int run_quantum_gen(const std::string& which, const Shared& sh, std::vector<double>& alice_deg,
                    std::vector<double>& bob_deg, const std::string& plane, double visibility,
                    const std::string& encoding, bool as_theory) {
    if (which == "boxes") {
        if (as_theory) return emit(bell::to_json(bell::boxes_oqm_theory()), sh.out_path, 0);
        return emit(bell::to_json(bell::boxes_phenomenon()), sh.out_path, 0);
    }
    const bell::TwoQubitState state =
        which == "werner" ? bell::werner(visibility) : bell::singlet();
    const std::string context = which == "werner"
                                    ? "werner v=" + std::to_string(visibility)
                                    : "singlet";
    std::vector<bell::MeasurementSetting> alice, bob;
    if (alice_deg.empty() && bob_deg.empty()) {
        const bell::ChshGeometry g = bell::chsh_optimal_geometry();
        alice = g.alice;
        bob = g.bob;
    } else {
        alice = settings_from_degrees(alice_deg, plane);
        bob = settings_from_degrees(bob_deg, plane);
    }
    if (alice.empty() || bob.empty())
        throw bell::InputError("need at least one setting per wing");
    if (as_theory) {
        const bell::Theory t =
            bell::oqm_theory(state, {{1.0, state}}, alice, bob, context);
        return emit(bell::to_json(t), sh.out_path, 0);
    }
    bell::Phenomenon p = bell::born_phenomenon(state, alice, bob, context);
    if (encoding == "rational") {
        // Exactness is supported for two-setting/two-setting geometries via
        // the correlation form, which keeps the table exactly normalised
        // and exactly signal-free.
        if (alice.size() != 2 || bob.size() != 2)
            throw bell::InputError(
                "rational encoding needs a 2x2 geometry (correlation form)");
        std::array<bell::Rat, 4> E;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                E[static_cast<size_t>(a * 2 + b)] =
                    bell::rat_from_double(bell::correlator(p, a, b));
        p = bell::correlation_phenomenon_exact(E, context);
    }
    return emit(bell::to_json(p), sh.out_path, 0);
}

int run_chsh(const Shared& sh, std::vector<int>& quad) {
    const bell::Phenomenon p = bell::phenomenon_from_json(bell::load_json_file(sh.input));
    bell::ChshSettings cs;
    if (!quad.empty()) {
        if (quad.size() != 4) throw bell::InputError("--settings needs a0 a1 b0 b1");
        cs = bell::ChshSettings{quad[0], quad[1], quad[2], quad[3]};
    }
    cs.check_against(p.scenario);
    const double tol = pick_tol(sh, p.tolerance);
    const double S = bell::chsh_value(p, cs);
    bell::Json j{{"format", "chsh/1"},
                 {"settings", bell::Json{{"a0", cs.a0}, {"a1", cs.a1}, {"b0", cs.b0}, {"b1", cs.b1}}},
                 {"value", S},
                 {"local_bound", 2.0}};
    int code;
    if (p.exact()) {
        const bell::Rat rs = bell::chsh_value_exact(p, cs);
        j["r_value"] = bell::rat_format(rs);
        const bool violated = bell::abs_of(rs) > bell::Rat(2);
        j["violated"] = violated;
        code = violated ? 1 : 0;
    } else {
        const double excess = std::fabs(S) - 2.0;
        const bool violated = excess > tol;
        j["violated"] = violated;
        if (!violated && excess > -tol) {
            j["ambiguous"] = true;
            code = 3;
        } else {
            code = violated ? 1 : 0;
        }
    }
    return emit(j, sh.out_path, code);
}

int run_epr_report(const Shared& sh, const std::string& phen_path) {
    const bell::Theory t = bell::theory_from_json(bell::load_json_file(sh.input));
    const bell::Phenomenon p = bell::phenomenon_from_json(bell::load_json_file(phen_path));
    const double tol = pick_tol(sh, std::max(t.tolerance, p.tolerance));
    const bell::EprReport r = bell::check_completeness_implication(t, p, tol);
    return emit(bell::to_json(r), sh.out_path, r.pass ? 0 : 1);
}

int run_battery(const Shared& sh, const bell::BatteryConfig& cfg) {
    const bell::BatteryReport r = bell::run_theorem_battery(cfg);
    return emit(bell::to_json(r), sh.out_path, r.all_pass ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell phenomena, hidden-variable theories, and the theorems between them"};
    app.require_subcommand(1);

    Shared sh;

    auto* c_phen = app.add_subcommand("check-phenomenon", "Validate a phenomenon and test signal-locality");
    c_phen->add_option("input", sh.input, "phenomenon JSON (\"-\" for stdin)")->required();
    c_phen->add_option("--tol", sh.tol, "tolerance override");
    c_phen->add_option("--out", sh.out_path, "write the report here instead of stdout");

    std::string fl_mode = "strong";
    auto* c_th = app.add_subcommand("check-theory", "Validate a theory and classify its properties");
    c_th->add_option("input", sh.input, "theory JSON")->required();
    c_th->add_option("--tol", sh.tol, "tolerance override");
    c_th->add_option("--fl-mode", fl_mode, "fragile-locality reading: strong|weak")
        ->check(CLI::IsMember({"strong", "weak"}));
    c_th->add_option("--out", sh.out_path, "write the report here instead of stdout");

    long long cap = 0;
    bool parallel = false;
    auto* c_solve = app.add_subcommand("solve-lhv", "Find a local model or a separating certificate");
    c_solve->add_option("input", sh.input, "phenomenon JSON")->required();
    c_solve->add_option("--cap", cap, "strategy cap (0: BELL_STRATEGY_CAP or built-in)");
    c_solve->add_option("--tol", sh.tol, "tolerance override");
    c_solve->add_flag("--parallel", parallel, "parallel simplex pricing");
    c_solve->add_option("--out", sh.out_path, "write the result here instead of stdout");

    std::string phen_path;
    auto* c_verify = app.add_subcommand("verify", "Re-check a model or certificate against a phenomenon");
    c_verify->require_subcommand(1);
    auto* c_vm = c_verify->add_subcommand("model", "Re-sum a strategy mixture against the table");
    c_vm->add_option("model", sh.input, "model JSON")->required();
    c_vm->add_option("phenomenon", phen_path, "phenomenon JSON")->required();
    c_vm->add_option("--tol", sh.tol, "tolerance override");
    c_vm->add_option("--out", sh.out_path, "write the check here instead of stdout");
    auto* c_vc = c_verify->add_subcommand("certificate", "Re-derive bound and value of an inequality");
    c_vc->add_option("certificate", sh.input, "certificate JSON")->required();
    c_vc->add_option("phenomenon", phen_path, "phenomenon JSON")->required();
    c_vc->add_option("--cap", cap, "strategy cap for the bound recomputation");
    c_vc->add_option("--out", sh.out_path, "write the check here instead of stdout");

    std::string which, plane = "xz", encoding = "float64";
    std::vector<double> alice_deg, bob_deg;
    double visibility = 1.0;
    bool as_theory = false;
    auto* c_gen = app.add_subcommand("quantum-gen", "Generate singlet/werner/boxes instances");
    c_gen->add_option("which", which, "singlet | werner | boxes")
        ->required()
        ->check(CLI::IsMember({"singlet", "werner", "boxes"}));
    c_gen->add_option("--alice", alice_deg, "Alice angles in degrees (default: CHSH-optimal)");
    c_gen->add_option("--bob", bob_deg, "Bob angles in degrees");
    c_gen->add_option("--plane", plane, "measurement plane: xz|xy|yz")
        ->check(CLI::IsMember({"xz", "xy", "yz"}));
    c_gen->add_option("--visibility", visibility, "werner visibility v in [-1/3, 1]");
    c_gen->add_option("--encoding", encoding, "float64 | rational (2x2 geometries only)")
        ->check(CLI::IsMember({"float64", "rational"}));
    c_gen->add_flag("--theory", as_theory, "emit the operational quantum theory instead");
    c_gen->add_option("--out", sh.out_path, "write the artifact here instead of stdout");

    std::vector<int> quad;
    auto* c_chsh = app.add_subcommand("chsh", "Evaluate the CHSH combination on a phenomenon");
    c_chsh->add_option("input", sh.input, "phenomenon JSON")->required();
    c_chsh->add_option("--settings", quad, "a0 a1 b0 b1 (default 0 1 0 1)")->expected(4);
    c_chsh->add_option("--tol", sh.tol, "tolerance override");
    c_chsh->add_option("--out", sh.out_path, "write the report here instead of stdout");

    auto* c_epr = app.add_subcommand("epr-report", "Chase elements of reality into a theory");
    c_epr->add_option("theory", sh.input, "theory JSON")->required();
    c_epr->add_option("phenomenon", phen_path, "phenomenon JSON")->required();
    c_epr->add_option("--tol", sh.tol, "tolerance override");
    c_epr->add_option("--out", sh.out_path, "write the report here instead of stdout");

    bell::BatteryConfig bc;
    std::string fault, benc = "float64";
    auto* c_bat = app.add_subcommand("battery", "Run the full theorem battery");
    c_bat->add_option("--seed", bc.seed, "master seed");
    c_bat->add_option("--encoding", benc, "encoding for randomized items: float64|rational")
        ->check(CLI::IsMember({"float64", "rational"}));
    c_bat->add_flag("--parallel", bc.parallel, "run instances across threads");
    c_bat->add_option("--roundtrip", bc.roundtrip_instances, "determinize round-trip instances");
    c_bat->add_option("--equivalence", bc.equivalence_instances, "equivalence instances");
    c_bat->add_option("--determinism", bc.determinism_instances, "determinism-lemma instances");
    c_bat->add_option("--predictability", bc.predictability_instances,
                      "predictability-forces-determinism instances");
    c_bat->add_option("--propagation", bc.propagation_instances,
                      "certainty-propagation instances");
    c_bat->add_option("--inject-fault", fault,
                      "deliberately corrupt one item (value: roundtrip)")
        ->check(CLI::IsMember({"roundtrip", "none"}));
    c_bat->add_option("--out", sh.out_path, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c_phen) return run_check_phenomenon(sh);
        if (*c_th) return run_check_theory(sh, fl_mode);
        if (*c_solve) return run_solve(sh, cap, parallel);
        if (*c_vm) return run_verify_model(sh, phen_path);
        if (*c_vc) return run_verify_certificate(sh, phen_path, cap);
        if (*c_gen)
            return run_quantum_gen(which, sh, alice_deg, bob_deg, plane, visibility, encoding,
                                   as_theory);
        if (*c_chsh) return run_chsh(sh, quad);
        if (*c_epr) return run_epr_report(sh, phen_path);
        if (*c_bat) {
            bc.encoding = bell::encoding_from_name(benc);
            if (fault == "roundtrip") bc.fault = bell::BatteryFault::Roundtrip;
            return run_battery(sh, bc);
        }
    } catch (const bell::InternalInconsistency& e) {
        return fail_json("internal", e.what());
    } catch (const bell::PreconditionError& e) {
        return fail_json("precondition", e.what());
    } catch (const bell::CapError& e) {
        return fail_json("cap", e.what());
    } catch (const bell::InputError& e) {
        return fail_json("input", e.what());
    } catch (const std::exception& e) {
        return fail_json("input", e.what());
    }
    return 2;
}
