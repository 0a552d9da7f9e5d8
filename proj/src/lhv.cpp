#include "bell/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bell/simplex.hpp"

namespace bell {

namespace {

template <class T>
T contract(const std::vector<T>& c, const std::vector<T>& f) {
    T s(0);
    for (size_t i = 0; i < c.size(); ++i) s += c[i] * f[i];
    return s;
}

// Exact bound by odometer enumeration; cap must already be checked.
template <class T>
T bound_core(const Scenario& sc, const std::vector<T>& coeffs) {
    long long n = strategy_count(sc);
    DeterministicStrategy st;
    st.alpha.assign(sc.m_a, 0);
    st.beta.assign(sc.m_b, 0);
    T best(0);
    bool first = true;
    for (long long s = 0; s < n; ++s) {
        T v = strategy_value(sc, coeffs, st);
        if (first || v > best) {
            best = v;
            first = false;
        }
        int i = sc.m_b - 1;
        while (i >= 0 && ++st.beta[i] == sc.k_b) st.beta[i--] = 0;
        if (i < 0) {
            int j = sc.m_a - 1;
            while (j >= 0 && ++st.alpha[j] == sc.k_a) st.alpha[j--] = 0;
        }
    }
    return best;
}

void check_bound_cap(const Scenario& sc, long long cap) {
    if (cap <= 0) cap = strategy_cap();
    long long n = strategy_count(sc);
    if (n < 0 || n > cap)
        throw CapError("strategy enumeration for the local bound exceeds the cap");
}

// The eight CHSH sign patterns (odd number of minus signs) as coefficient
// tensors over a 2-setting/2-outcome scenario, outcome index 0 read as +1.
// Returns the best tensor and its contraction value against `table`.
template <class T>
std::pair<std::vector<T>, T> best_chsh_tensor(const Scenario& sc, const std::vector<T>& table) {
    std::pair<std::vector<T>, T> best;
    bool first = true;
    for (int mask = 0; mask < 16; ++mask) {
        int minus = __builtin_popcount(mask);
        if (minus % 2 == 0) continue;
        std::vector<T> c(sc.table_size());
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                int s = (mask >> (2 * a + b)) & 1 ? -1 : 1;
                for (int A = 0; A < 2; ++A)
                    for (int B = 0; B < 2; ++B) {
                        int sign = s * (A == 1 ? -1 : 1) * (B == 1 ? -1 : 1);
                        c[sc.index(a, b, A, B)] = T(sign);
                    }
            }
        T v = contract(c, table);
        if (first || v > best.second) {
            best = {std::move(c), v};
            first = false;
        }
    }
    return best;
}

bool chsh_applicable(const Scenario& sc) {
    return sc.m_a == 2 && sc.m_b == 2 && sc.k_a == 2 && sc.k_b == 2;
}

template <class T>
struct CoreResult {
    bool feasible = false;
    std::vector<T> weights;
    std::vector<T> dual;
    T objective{0};
    long iterations = 0;
};

template <class T>
CoreResult<T> solve_core(const Scenario& sc, const std::vector<T>& table, const T& eps,
                         const std::vector<DeterministicStrategy>& strategies, bool parallel) {
    const int R = sc.table_size();
    const int m = R + 1;
    std::vector<T> rhs(m);
    for (int i = 0; i < R; ++i) rhs[i] = table[i] < T(0) ? T(0) : table[i];
    rhs[R] = T(1);  // weights must sum to one; folded in as an ordinary row
    auto col_dot = [&](const std::vector<T>& y, long long j) {
        const DeterministicStrategy& st = strategies[static_cast<size_t>(j)];
        T s = y[R];
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b) s += y[sc.index(a, b, st.alpha[a], st.beta[b])];
        return s;
    };
    auto col_fill = [&](long long j, std::vector<T>& out) {
        std::fill(out.begin(), out.end(), T(0));
        const DeterministicStrategy& st = strategies[static_cast<size_t>(j)];
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b) out[sc.index(a, b, st.alpha[a], st.beta[b])] = T(1);
        out[R] = T(1);
    };
    auto r = phase1_simplex<T>(m, static_cast<long long>(strategies.size()), std::move(rhs),
                               col_dot, col_fill, eps, 0, parallel);
    CoreResult<T> out;
    out.feasible = r.feasible;
    out.weights = std::move(r.weights);
    out.dual = std::move(r.dual);
    out.objective = r.objective;
    out.iterations = r.iterations;
    return out;
}

BellCertificate make_named_chsh_float(const Scenario& sc, const std::vector<double>& tensor,
                                      double value) {
    BellCertificate c;
    c.scenario = sc;
    c.encoding = Encoding::Float64;
    c.coeffs = tensor;
    c.local_bound = bound_core<double>(sc, tensor);
    c.value = value;
    c.gap = value - c.local_bound;
    c.name = "chsh";
    if (c.local_bound != 2.0)
        throw InternalInconsistency("CHSH tensor local bound is not 2 under enumeration");
    return c;
}

BellCertificate make_named_chsh_exact(const Scenario& sc, const std::vector<Rat>& tensor,
                                      const Rat& value) {
    BellCertificate c;
    c.scenario = sc;
    c.encoding = Encoding::Rational;
    c.rcoeffs = tensor;
    c.r_local_bound = bound_core<Rat>(sc, tensor);
    if (c.r_local_bound != 2)
        throw InternalInconsistency("CHSH tensor local bound is not 2 under enumeration");
    c.r_value = value;
    c.r_gap = value - c.r_local_bound;
    c.coeffs.reserve(tensor.size());
    for (const Rat& x : tensor) c.coeffs.push_back(rat_to_double(x));
    c.local_bound = 2.0;
    c.value = rat_to_double(c.r_value);
    c.gap = rat_to_double(c.r_gap);
    c.name = "chsh";
    return c;
}

// Raw Farkas dual -> certificate: restrict y to the table rows, rescale so
// max |coefficient| = 1, recompute bound (enumeration) and value (direct
// contraction) from scratch rather than trusting simplex state.
BellCertificate make_raw_float(const Scenario& sc, const std::vector<double>& dual,
                               const std::vector<double>& table) {
    std::vector<double> c(table.size());
    double scale = 0;
    for (size_t i = 0; i < c.size(); ++i) scale = std::max(scale, std::fabs(dual[i]));
    if (scale == 0) throw InternalInconsistency("Farkas dual vanishes on every table row");
    for (size_t i = 0; i < c.size(); ++i) c[i] = dual[i] / scale;
    BellCertificate cert;
    cert.scenario = sc;
    cert.encoding = Encoding::Float64;
    cert.local_bound = bound_core<double>(sc, c);
    cert.value = contract(c, table);
    cert.gap = cert.value - cert.local_bound;
    cert.coeffs = std::move(c);
    return cert;
}

BellCertificate make_raw_exact(const Scenario& sc, const std::vector<Rat>& dual,
                               const std::vector<Rat>& table) {
    std::vector<Rat> c(table.size());
    Rat scale(0);
    for (size_t i = 0; i < c.size(); ++i) {
        Rat m = abs_of(dual[i]);
        if (m > scale) scale = m;
    }
    if (scale == 0) throw InternalInconsistency("Farkas dual vanishes on every table row");
    for (size_t i = 0; i < c.size(); ++i) c[i] = dual[i] / scale;
    BellCertificate cert;
    cert.scenario = sc;
    cert.encoding = Encoding::Rational;
    cert.r_local_bound = bound_core<Rat>(sc, c);
    cert.r_value = contract(c, table);
    cert.r_gap = cert.r_value - cert.r_local_bound;
    cert.coeffs.reserve(c.size());
    for (const Rat& x : c) cert.coeffs.push_back(rat_to_double(x));
    cert.local_bound = rat_to_double(cert.r_local_bound);
    cert.value = rat_to_double(cert.r_value);
    cert.gap = rat_to_double(cert.r_gap);
    cert.rcoeffs = std::move(c);
    return cert;
}

}  // namespace

double local_bound_of(const Scenario& sc, const std::vector<double>& coeffs, long long cap) {
    check_bound_cap(sc, cap);
    if (static_cast<int>(coeffs.size()) != sc.table_size())
        throw InputError("coefficient tensor has wrong length");
    return bound_core<double>(sc, coeffs);
}

Rat local_bound_of_exact(const Scenario& sc, const std::vector<Rat>& coeffs, long long cap) {
    check_bound_cap(sc, cap);
    if (static_cast<int>(coeffs.size()) != sc.table_size())
        throw InputError("coefficient tensor has wrong length");
    return bound_core<Rat>(sc, coeffs);
}

LhvResult solve_lhv(const Phenomenon& p, const SolveOptions& opt) {
    double tol = opt.tol >= 0 ? opt.tol : p.tolerance;
    ValidationReport v = validate_phenomenon(p, tol > 0 ? tol : 1e-9);
    if (!v.ok())
        throw InputError("phenomenon fails validation (" + v.issues.front().kind + ") — fix the table first");
    long long cap = opt.cap > 0 ? opt.cap : strategy_cap();
    std::vector<DeterministicStrategy> strategies = enumerate_strategies(p.scenario, cap);
    const Scenario& sc = p.scenario;

    LhvResult res;
    res.strategies = static_cast<long long>(strategies.size());

    if (p.exact() && tol == 0.0) {
        auto core = solve_core<Rat>(sc, p.rtable, Rat(0), strategies, opt.parallel);
        res.iterations = core.iterations;
        if (core.feasible) {
            LhvModel m;
            m.scenario = sc;
            m.encoding = Encoding::Rational;
            for (size_t j = 0; j < core.weights.size(); ++j)
                if (core.weights[j] > 0)
                    m.support.push_back(
                        {strategies[j], rat_to_double(core.weights[j]), core.weights[j]});
            res.outcome = LhvOutcome::Feasible;
            res.model = std::move(m);
            return res;
        }
        // Infeasible, exactly. Prefer a named CHSH witness when one separates.
        if (chsh_applicable(sc)) {
            auto [tensor, value] = best_chsh_tensor<Rat>(sc, p.rtable);
            if (value > 2) {
                res.outcome = LhvOutcome::Infeasible;
                res.certificate = make_named_chsh_exact(sc, tensor, value);
                return res;
            }
        }
        res.outcome = LhvOutcome::Infeasible;
        res.certificate = make_raw_exact(sc, core.dual, p.rtable);
        if (!(res.certificate->r_gap > 0))
            throw InternalInconsistency("exact infeasibility produced a non-separating dual");
        return res;
    }

    // Float path. Pivot tolerance is far below the decision tolerance so the
    // simplex itself is not the arbiter — the re-checks below are.
    const double pivot_eps = 1e-11;
    auto core = solve_core<double>(sc, p.table, pivot_eps, strategies, opt.parallel);
    res.iterations = core.iterations;
    if (core.feasible) {
        LhvModel m;
        m.scenario = sc;
        m.encoding = Encoding::Float64;
        for (size_t j = 0; j < core.weights.size(); ++j)
            if (core.weights[j] > 0) m.support.push_back({strategies[j], core.weights[j], Rat()});
        ModelCheck chk = verify_model(m, p, tol);
        res.model = std::move(m);
        if (chk.ok) {
            res.outcome = LhvOutcome::Feasible;
        } else {
            res.outcome = LhvOutcome::Ambiguous;
            res.note = "simplex found a basis but its re-summation misses the table by " +
                       std::to_string(chk.max_deviation) + "; retry with rational encoding";
        }
        return res;
    }
    if (chsh_applicable(sc)) {
        auto [tensor, value] = best_chsh_tensor<double>(sc, p.table);
        if (value - 2.0 > tol) {
            res.outcome = LhvOutcome::Infeasible;
            res.certificate = make_named_chsh_float(sc, tensor, value);
            return res;
        }
    }
    {
        BellCertificate cert = make_raw_float(sc, core.dual, p.table);
        if (cert.gap > tol) {
            res.outcome = LhvOutcome::Infeasible;
            res.certificate = std::move(cert);
        } else {
            res.outcome = LhvOutcome::Ambiguous;
            res.note = "phase-1 ended infeasible but the recomputed certificate gap " +
                       std::to_string(cert.gap) + " is within tolerance; retry with rational encoding";
            res.certificate = std::move(cert);
        }
    }
    return res;
}

ModelCheck verify_model(const LhvModel& m, const Phenomenon& p) {
    return verify_model(m, p, p.tolerance);
}

ModelCheck verify_model(const LhvModel& m, const Phenomenon& p, double tol) {
    if (!m.scenario.same_shape(p.scenario))
        throw InputError("model and phenomenon scenarios have different shapes");
    const Scenario& sc = p.scenario;
    ModelCheck chk;
    bool exact = m.encoding == Encoding::Rational && p.exact() && tol == 0.0;
    if (exact) {
        Rat worst(0);
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b)
                for (int A = 0; A < sc.k_a; ++A)
                    for (int B = 0; B < sc.k_b; ++B) {
                        Rat s(0);
                        for (const auto& ws : m.support)
                            if (ws.strategy.alpha[a] == A && ws.strategy.beta[b] == B)
                                s += ws.rweight;
                        Rat d = abs_of(Rat(s - p.rat_at(a, b, A, B)));
                        if (d > worst) {
                            worst = d;
                            chk.where = {a, b, A, B};
                        }
                    }
        chk.max_deviation = rat_to_double(worst);
        chk.ok = worst == 0;
        return chk;
    }
    double worst = 0;
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b)
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) {
                    double s = 0;
                    for (const auto& ws : m.support)
                        if (ws.strategy.alpha[a] == A && ws.strategy.beta[b] == B) s += ws.weight;
                    double d = std::fabs(s - p.at(a, b, A, B));
                    if (d > worst) {
                        worst = d;
                        chk.where = {a, b, A, B};
                    }
                }
    chk.max_deviation = worst;
    chk.ok = worst <= tol;
    return chk;
}

CertificateCheck verify_certificate(const BellCertificate& c, const Phenomenon& p, long long cap) {
    if (!c.scenario.same_shape(p.scenario))
        throw InputError("certificate and phenomenon scenarios have different shapes");
    CertificateCheck chk;
    if (c.encoding == Encoding::Rational && p.exact()) {
        Rat bound = local_bound_of_exact(c.scenario, c.rcoeffs, cap);
        Rat value = contract(c.rcoeffs, p.rtable);
        chk.local_bound = rat_to_double(bound);
        chk.value = rat_to_double(value);
        chk.separates = value > bound;
        bool stored_match = bound == c.r_local_bound && value == c.r_value &&
                            Rat(value - bound) == c.r_gap;
        chk.ok = stored_match && chk.separates;
        if (!stored_match) chk.note = "stored bound/value do not match recomputation";
        else if (!chk.separates) chk.note = "inequality does not separate this phenomenon";
        return chk;
    }
    const double tol = 1e-9;
    double bound = local_bound_of(c.scenario, c.coeffs, cap);
    double value = contract(c.coeffs, p.table);
    chk.local_bound = bound;
    chk.value = value;
    chk.separates = value - bound > tol;
    bool stored_match =
        std::fabs(bound - c.local_bound) <= tol && std::fabs(value - c.value) <= tol;
    chk.ok = stored_match && chk.separates;
    if (!stored_match) chk.note = "stored bound/value do not match recomputation";
    else if (!chk.separates) chk.note = "inequality does not separate this phenomenon";
    return chk;
}

namespace {

std::string strategy_label(const DeterministicStrategy& st) {
    std::string s = "a";
    for (int x : st.alpha) s += std::to_string(x);
    s += "b";
    for (int x : st.beta) s += std::to_string(x);
    return s;
}

template <class T>
std::vector<T> averaged_wing_marginals(const Scenario& sc, const T* K, bool alice) {
    // Pbar(X|x) = (1/m_other) sum_other P(X|x, other); for a factorizable
    // kernel all the averaged-over blocks agree, so this is just a stable
    // way of reading off the setting-local marginal.
    const int mx = alice ? sc.m_a : sc.m_b;
    const int kx = alice ? sc.k_a : sc.k_b;
    const int mo = alice ? sc.m_b : sc.m_a;
    std::vector<T> out(static_cast<size_t>(mx) * kx, T(0));
    for (int x = 0; x < mx; ++x)
        for (int o = 0; o < mo; ++o)
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) {
                    int a = alice ? x : o, b = alice ? o : x;
                    int X = alice ? A : B;
                    out[x * kx + X] += K[sc.index(a, b, A, B)];
                }
    T inv = T(1) / T(mo);
    for (T& v : out) v *= inv;
    return out;
}

template <class T>
void determinize_core(const Theory& t, const std::vector<T>& mu, const std::vector<T>& kernel,
                      const std::vector<DeterministicStrategy>& strategies, const T& tol,
                      std::vector<std::string>& labels, std::vector<T>& mu_out,
                      std::vector<T>& kernel_out) {
    const Scenario& sc = t.scenario;
    const int ts = sc.table_size();
    for (size_t l = 0; l < mu.size(); ++l) {
        if (!(mu[l] > tol)) continue;  // zero-mass hidden states never occur
        const T* K = kernel.data() + l * ts;
        auto pa = averaged_wing_marginals<T>(sc, K, true);
        auto pb = averaged_wing_marginals<T>(sc, K, false);
        for (const DeterministicStrategy& st : strategies) {
            T w = mu[l];
            for (int a = 0; a < sc.m_a; ++a) w *= pa[a * sc.k_a + st.alpha[a]];
            for (int b = 0; b < sc.m_b; ++b) w *= pb[b * sc.k_b + st.beta[b]];
            if (w == T(0)) continue;
            labels.push_back(t.lambdas[l] + "|" + strategy_label(st));
            mu_out.push_back(w);
            for (int a = 0; a < sc.m_a; ++a)
                for (int b = 0; b < sc.m_b; ++b)
                    for (int A = 0; A < sc.k_a; ++A)
                        for (int B = 0; B < sc.k_b; ++B)
                            kernel_out.push_back(
                                T(st.alpha[a] == A && st.beta[b] == B ? 1 : 0));
        }
    }
}

}  // namespace

Theory determinize(const Theory& t) { return determinize(t, t.tolerance, 0); }

Theory determinize(const Theory& t, double tol, long long cap) {
    if (!is_factorizable(t, tol).satisfied())
        throw PreconditionError("determinize requires a factorizable theory");
    if (cap <= 0) cap = strategy_cap();
    long long n = strategy_count(t.scenario);
    if (n < 0 || n > cap / std::max(1, t.n_lambda()))
        throw CapError("determinization output would exceed the strategy cap");
    std::vector<DeterministicStrategy> strategies = enumerate_strategies(t.scenario, cap);
    std::vector<std::string> labels;
    if (t.exact() && tol == 0.0) {
        std::vector<Rat> mu_out, kernel_out;
        determinize_core<Rat>(t, t.rmu, t.rkernel, strategies, Rat(0), labels, mu_out, kernel_out);
        return Theory::from_rational(t.scenario, t.values, std::move(labels), std::move(mu_out),
                                     std::move(kernel_out));
    }
    std::vector<double> mu_out, kernel_out;
    determinize_core<double>(t, t.mu, t.kernel, strategies, 0.0, labels, mu_out, kernel_out);
    return Theory::from_float(t.scenario, t.values, std::move(labels), std::move(mu_out),
                              std::move(kernel_out), t.tolerance);
}

Theory theory_from_model(const LhvModel& m, const OutcomeValues& vals,
                         const std::string& context) {
    Scenario sc = m.scenario;
    sc.context = context;
    std::vector<std::string> labels;
    if (m.encoding == Encoding::Rational) {
        std::vector<Rat> mu, kernel;
        for (const auto& ws : m.support) {
            labels.push_back(strategy_label(ws.strategy));
            mu.push_back(ws.rweight);
            for (int a = 0; a < sc.m_a; ++a)
                for (int b = 0; b < sc.m_b; ++b)
                    for (int A = 0; A < sc.k_a; ++A)
                        for (int B = 0; B < sc.k_b; ++B)
                            kernel.push_back(
                                Rat(ws.strategy.alpha[a] == A && ws.strategy.beta[b] == B ? 1 : 0));
        }
        return Theory::from_rational(sc, vals, std::move(labels), std::move(mu), std::move(kernel));
    }
    std::vector<double> mu, kernel;
    for (const auto& ws : m.support) {
        labels.push_back(strategy_label(ws.strategy));
        mu.push_back(ws.weight);
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b)
                for (int A = 0; A < sc.k_a; ++A)
                    for (int B = 0; B < sc.k_b; ++B)
                        kernel.push_back(
                            ws.strategy.alpha[a] == A && ws.strategy.beta[b] == B ? 1.0 : 0.0);
    }
    return Theory::from_float(sc, vals, std::move(labels), std::move(mu), std::move(kernel));
}

LhvModel model_from_deterministic(const Theory& t) {
    return model_from_deterministic(t, t.tolerance);
}

LhvModel model_from_deterministic(const Theory& t, double tol) {
    if (!is_deterministic(t, tol).satisfied() || !is_local(t, tol).satisfied())
        throw PreconditionError("strategy collapse requires a deterministic local theory");
    const Scenario& sc = t.scenario;
    LhvModel m;
    m.scenario = sc;
    m.encoding = t.encoding;
    std::map<long long, std::pair<double, Rat>> grouped;
    for (int l = 0; l < t.n_lambda(); ++l) {
        double w = t.mu[l];
        bool counts = t.exact() ? (t.rmu[l] > 0) : (w > tol);
        if (!counts) continue;
        DeterministicStrategy st;
        st.alpha.resize(sc.m_a);
        st.beta.resize(sc.m_b);
        // Read the response function off the kernel: the marginal at the
        // first co-wing setting identifies the selected outcome.
        for (int a = 0; a < sc.m_a; ++a) {
            int best = 0;
            double bestv = -1;
            for (int A = 0; A < sc.k_a; ++A) {
                double v = 0;
                for (int B = 0; B < sc.k_b; ++B) v += t.k_at(l, a, 0, A, B);
                if (v > bestv) {
                    bestv = v;
                    best = A;
                }
            }
            st.alpha[a] = best;
        }
        for (int b = 0; b < sc.m_b; ++b) {
            int best = 0;
            double bestv = -1;
            for (int B = 0; B < sc.k_b; ++B) {
                double v = 0;
                for (int A = 0; A < sc.k_a; ++A) v += t.k_at(l, 0, b, A, B);
                if (v > bestv) {
                    bestv = v;
                    best = B;
                }
            }
            st.beta[b] = best;
        }
        auto& slot = grouped[strategy_to_index(sc, st)];
        slot.first += w;
        if (t.exact()) slot.second += t.rmu[l];
    }
    for (auto& [idx, ws] : grouped)
        m.support.push_back({strategy_from_index(sc, idx), ws.first, ws.second});
    return m;
}

}  // namespace bell
