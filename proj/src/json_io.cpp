#include "bell/json_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace bell {

namespace {

// Fetch a required key, with the document's format tag in the complaint.
const Json& need(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field \"") + key + "\"");
    return *it;
}

void expect_format(const Json& j, const std::string& tag) {
    const std::string got = need(j, "format").get<std::string>();
    if (got != tag) throw InputError("expected format \"" + tag + "\", found \"" + got + "\"");
}

std::vector<double> doubles_of(const Json& j) { return j.get<std::vector<double>>(); }

std::vector<Rat> rats_of(const Json& j) {
    std::vector<Rat> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(rat_parse(e.get<std::string>()));
    return out;
}

Json rats_to_json(const std::vector<Rat>& v) {
    Json a = Json::array();
    for (const Rat& r : v) a.push_back(rat_format(r));
    return a;
}

Json witness_or_null(const std::optional<Witness>& w) {
    return w ? to_json(*w) : Json(nullptr);
}

}  // namespace

Json to_json(const Scenario& s) {
    return Json{{"m_a", s.m_a}, {"m_b", s.m_b},          {"k_a", s.k_a},
                {"k_b", s.k_b}, {"context", s.context}};
}

Scenario scenario_from_json(const Json& j) {
    Scenario s;
    s.m_a = need(j, "m_a").get<int>();
    s.m_b = need(j, "m_b").get<int>();
    s.k_a = need(j, "k_a").get<int>();
    s.k_b = need(j, "k_b").get<int>();
    s.context = j.value("context", std::string());
    s.check_valid();
    return s;
}

Json to_json(const OutcomeValues& v) {
    return Json{{"alice", v.alice}, {"bob", v.bob}};
}

OutcomeValues values_from_json(const Json& j) {
    OutcomeValues v;
    v.alice = need(j, "alice").get<std::vector<double>>();
    v.bob = need(j, "bob").get<std::vector<double>>();
    return v;
}

Json to_json(const Phenomenon& p) {
    Json j{{"format", "phenomenon/1"},
           {"scenario", to_json(p.scenario)},
           {"outcome_values", to_json(p.values)},
           {"encoding", encoding_name(p.encoding)},
           {"tolerance", p.tolerance},
           {"table", p.table}};
    if (p.exact()) j["rtable"] = rats_to_json(p.rtable);
    return j;
}

Phenomenon phenomenon_from_json(const Json& j) {
    expect_format(j, "phenomenon/1");
    const Scenario sc = scenario_from_json(need(j, "scenario"));
    const OutcomeValues vals = values_from_json(need(j, "outcome_values"));
    const Encoding enc = encoding_from_name(need(j, "encoding").get<std::string>());
    if (enc == Encoding::Rational) {
        Phenomenon p = Phenomenon::from_rational(sc, vals, rats_of(need(j, "rtable")));
        return p;
    }
    const double tol = j.value("tolerance", 1e-9);
    return Phenomenon::from_float(sc, vals, doubles_of(need(j, "table")), tol);
}

Json to_json(const Theory& t) {
    Json j{{"format", "theory/1"},
           {"scenario", to_json(t.scenario)},
           {"outcome_values", to_json(t.values)},
           {"encoding", encoding_name(t.encoding)},
           {"tolerance", t.tolerance},
           {"lambdas", t.lambdas},
           {"mu", t.mu},
           {"kernel", t.kernel}};
    if (t.exact()) {
        j["rmu"] = rats_to_json(t.rmu);
        j["rkernel"] = rats_to_json(t.rkernel);
    }
    return j;
}

Theory theory_from_json(const Json& j) {
    expect_format(j, "theory/1");
    const Scenario sc = scenario_from_json(need(j, "scenario"));
    const OutcomeValues vals = values_from_json(need(j, "outcome_values"));
    const Encoding enc = encoding_from_name(need(j, "encoding").get<std::string>());
    std::vector<std::string> lambdas = need(j, "lambdas").get<std::vector<std::string>>();
    if (enc == Encoding::Rational)
        return Theory::from_rational(sc, vals, std::move(lambdas), rats_of(need(j, "rmu")),
                                     rats_of(need(j, "rkernel")));
    const double tol = j.value("tolerance", 1e-9);
    return Theory::from_float(sc, vals, std::move(lambdas), doubles_of(need(j, "mu")),
                              doubles_of(need(j, "kernel")), tol);
}

Json to_json(const LhvModel& m) {
    Json support = Json::array();
    for (const WeightedStrategy& w : m.support) {
        Json e{{"alice", w.strategy.alpha}, {"bob", w.strategy.beta}, {"weight", w.weight}};
        if (m.encoding == Encoding::Rational) e["rweight"] = rat_format(w.rweight);
        support.push_back(std::move(e));
    }
    return Json{{"format", "lhv-model/1"},
                {"scenario", to_json(m.scenario)},
                {"encoding", encoding_name(m.encoding)},
                {"support", std::move(support)}};
}

LhvModel model_from_json(const Json& j) {
    expect_format(j, "lhv-model/1");
    LhvModel m;
    m.scenario = scenario_from_json(need(j, "scenario"));
    m.encoding = encoding_from_name(need(j, "encoding").get<std::string>());
    for (const auto& e : need(j, "support")) {
        WeightedStrategy w;
        w.strategy.alpha = need(e, "alice").get<std::vector<int>>();
        w.strategy.beta = need(e, "bob").get<std::vector<int>>();
        if (w.strategy.alpha.size() != static_cast<size_t>(m.scenario.m_a) ||
            w.strategy.beta.size() != static_cast<size_t>(m.scenario.m_b))
            throw InputError("strategy length does not match the scenario");
        for (int x : w.strategy.alpha)
            if (x < 0 || x >= m.scenario.k_a) throw InputError("strategy outcome out of range");
        for (int x : w.strategy.beta)
            if (x < 0 || x >= m.scenario.k_b) throw InputError("strategy outcome out of range");
        w.weight = need(e, "weight").get<double>();
        if (m.encoding == Encoding::Rational) w.rweight = rat_parse(need(e, "rweight").get<std::string>());
        m.support.push_back(std::move(w));
    }
    return m;
}

Json to_json(const BellCertificate& c) {
    Json j{{"format", "bell-certificate/1"},
           {"scenario", to_json(c.scenario)},
           {"encoding", encoding_name(c.encoding)},
           {"name", c.name},
           {"coeffs", c.coeffs},
           {"local_bound", c.local_bound},
           {"value", c.value},
           {"gap", c.gap}};
    if (c.encoding == Encoding::Rational) {
        j["rcoeffs"] = rats_to_json(c.rcoeffs);
        j["r_local_bound"] = rat_format(c.r_local_bound);
        j["r_value"] = rat_format(c.r_value);
        j["r_gap"] = rat_format(c.r_gap);
    }
    return j;
}

BellCertificate certificate_from_json(const Json& j) {
    expect_format(j, "bell-certificate/1");
    BellCertificate c;
    c.scenario = scenario_from_json(need(j, "scenario"));
    c.encoding = encoding_from_name(need(j, "encoding").get<std::string>());
    c.name = j.value("name", std::string());
    c.coeffs = doubles_of(need(j, "coeffs"));
    if (c.coeffs.size() != static_cast<size_t>(c.scenario.table_size()))
        throw InputError("coefficient tensor does not match the scenario");
    c.local_bound = need(j, "local_bound").get<double>();
    c.value = need(j, "value").get<double>();
    c.gap = need(j, "gap").get<double>();
    if (c.encoding == Encoding::Rational) {
        c.rcoeffs = rats_of(need(j, "rcoeffs"));
        if (c.rcoeffs.size() != static_cast<size_t>(c.scenario.table_size()))
            throw InputError("rational coefficient tensor does not match the scenario");
        c.r_local_bound = rat_parse(need(j, "r_local_bound").get<std::string>());
        c.r_value = rat_parse(need(j, "r_value").get<std::string>());
        c.r_gap = rat_parse(need(j, "r_gap").get<std::string>());
    }
    return c;
}

Json to_json(const LhvResult& r) {
    return Json{{"format", "lhv-result/1"},
                {"outcome", lhv_outcome_name(r.outcome)},
                {"strategies", r.strategies},
                {"iterations", r.iterations},
                {"note", r.note},
                {"model", r.model ? to_json(*r.model) : Json(nullptr)},
                {"certificate", r.certificate ? to_json(*r.certificate) : Json(nullptr)}};
}

Json to_json(const Witness& w) {
    return Json{{"note", w.note}, {"where", w.where}, {"deviation", w.deviation}};
}

Json to_json(const PropertyEntry& e) {
    return Json{{"status", status_name(e.status)},
                {"satisfied", e.satisfied()},
                {"comparisons", e.comparisons},
                {"max_deviation", e.max_deviation},
                {"witness", witness_or_null(e.witness)}};
}

Json to_json(const PropertyVector& pv) {
    return Json{{"format", "property-vector/1"},
                {"fl_mode", pv.fl_mode == FlMode::Strong ? "strong" : "weak"},
                {"tolerance", pv.tol},
                {"determinism", to_json(pv.determinism)},
                {"locality", to_json(pv.locality)},
                {"factorizability", to_json(pv.factorizability)},
                {"jarrett_completeness", to_json(pv.jarrett_completeness)},
                {"fragile_locality", to_json(pv.fragile_locality)}};
}

Json to_json(const ValidationReport& r) {
    Json issues = Json::array();
    for (const ValidationIssue& i : r.issues)
        issues.push_back(Json{{"kind", i.kind},
                              {"where", i.where},
                              {"magnitude", i.magnitude},
                              {"detail", i.detail}});
    return Json{{"ok", r.ok()}, {"issues", std::move(issues)}};
}

Json to_json(const SignalReport& r) {
    Json ws = Json::array();
    for (const MarginalDependence& d : r.witnesses)
        ws.push_back(Json{{"wing", std::string(1, d.wing)},
                          {"local_setting", d.local_setting},
                          {"outcome", d.outcome},
                          {"remote_1", d.remote_1},
                          {"remote_2", d.remote_2},
                          {"deviation", d.deviation}});
    return Json{{"signal_local", r.local}, {"max_deviation", r.max_deviation},
                {"witnesses", std::move(ws)}};
}

Json to_json(const EprReport& r) {
    Json pred = Json::array();
    for (const PredictFlag& f : r.predictability)
        pred.push_back(Json{{"a", f.a},
                            {"b", f.b},
                            {"alice_to_bob", f.alice_to_bob},
                            {"bob_to_alice", f.bob_to_alice}});
    Json chain = Json::array();
    for (const EprChainEntry& e : r.chain)
        chain.push_back(Json{{"wing", std::string(1, e.wing)},
                             {"setting", e.setting},
                             {"element", e.element},
                             {"witness_remote", e.witness_remote},
                             {"rep_checked", e.rep_checked},
                             {"rep_ok", e.rep_ok},
                             {"rep_witness", witness_or_null(e.rep_witness)}});
    return Json{{"format", "epr-report/1"},
                {"pass", r.pass},
                {"vacuous", r.vacuous},
                {"predictability", std::move(pred)},
                {"chain", std::move(chain)}};
}

Json to_json(const BatteryReport& r) {
    Json items = Json::array();
    // Wall-clock timings are deliberately left out: reports for the same
    // seed and flags must be byte-identical across runs.
    for (const BatteryItem& it : r.items)
        items.push_back(Json{{"name", it.name},
                             {"pass", it.pass},
                             {"instances", it.instances},
                             {"failures", it.failures},
                             {"seed", it.seed},
                             {"detail", it.detail}});
    return Json{{"format", "battery-report/1"},
                {"seed", r.seed},
                {"encoding", encoding_name(r.encoding)},
                {"parallel", r.parallel},
                {"fault_injected", r.fault_injected},
                {"all_pass", r.all_pass},
                {"items", std::move(items)}};
}

Json to_json(const ModelCheck& c) {
    return Json{{"format", "model-check/1"},
                {"ok", c.ok},
                {"max_deviation", c.max_deviation},
                {"where", c.where}};
}

Json to_json(const CertificateCheck& c) {
    return Json{{"format", "certificate-check/1"},
                {"ok", c.ok},
                {"separates", c.separates},
                {"local_bound", c.local_bound},
                {"value", c.value},
                {"note", c.note}};
}

Json load_json_file(const std::string& path) {
    try {
        if (path == "-") return Json::parse(std::cin);
        std::ifstream in(path);
        if (!in) throw InputError("cannot open " + path);
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace bell
