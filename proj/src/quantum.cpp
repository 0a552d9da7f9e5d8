#include "bell/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace bell {

namespace {

constexpr double kPsdFloor = -1e-10;

Cx m2(const Mat2& m, int i, int j) { return m[i * 2 + j]; }
Cx& m4(Mat4& m, int i, int j) { return m[i * 4 + j]; }
Cx m4c(const Mat4& m, int i, int j) { return m[i * 4 + j]; }

}  // namespace

MeasurementSetting MeasurementSetting::in_plane(double t, const std::string& plane) {
    if (plane == "xz") return {std::sin(t), 0.0, std::cos(t)};
    if (plane == "xy") return {std::cos(t), std::sin(t), 0.0};
    if (plane == "yz") return {0.0, std::sin(t), std::cos(t)};
    throw InputError("unknown plane '" + plane + "' (use xz, xy or yz)");
}

void MeasurementSetting::check_unit(double tol) const {
    double n2 = nx * nx + ny * ny + nz * nz;
    if (std::fabs(n2 - 1.0) > tol)
        throw InputError("measurement direction is not a unit vector");
}

void TwoQubitState::check_valid() const {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Cx d = m4c(rho, i, j) - std::conj(m4c(rho, j, i));
            if (std::abs(d) > 1e-12) throw InputError("density matrix is not Hermitian");
        }
    Cx tr = 0;
    for (int i = 0; i < 4; ++i) tr += m4c(rho, i, i);
    if (std::abs(tr - Cx(1.0)) > 1e-12) throw InputError("density matrix trace is not 1");
    auto ev = hermitian_eigenvalues(rho);
    if (ev[0] < kPsdFloor) throw InputError("density matrix has a negative eigenvalue");
}

TwoQubitState singlet() {
    // (|01> - |10>)/sqrt(2), basis order |00>,|01>,|10>,|11>.
    TwoQubitState s;
    s.rho.fill(Cx(0));
    m4(s.rho, 1, 1) = 0.5;
    m4(s.rho, 2, 2) = 0.5;
    m4(s.rho, 1, 2) = -0.5;
    m4(s.rho, 2, 1) = -0.5;
    return s;
}

TwoQubitState werner(double v) {
    TwoQubitState s = singlet();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Cx x = m4(s.rho, i, j) * v;
            if (i == j) x += (1.0 - v) / 4.0;
            m4(s.rho, i, j) = x;
        }
    s.check_valid();
    return s;
}

Mat2 projector(const MeasurementSetting& n, int outcome) {
    if (outcome != 0 && outcome != 1) throw InputError("projective outcome index must be 0 or 1");
    n.check_unit();
    double sgn = outcome == 0 ? 1.0 : -1.0;
    // (I + sgn * n.sigma)/2 with sigma the Pauli triple.
    Mat2 p;
    p[0] = 0.5 * (1.0 + sgn * n.nz);
    p[1] = 0.5 * sgn * Cx(n.nx, -n.ny);
    p[2] = 0.5 * sgn * Cx(n.nx, n.ny);
    p[3] = 0.5 * (1.0 - sgn * n.nz);
    return p;
}

Mat4 kron(const Mat2& x, const Mat2& y) {
    Mat4 k;
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int j2 = 0; j2 < 2; ++j2)
                    m4(k, i1 * 2 + i2, j1 * 2 + j2) = m2(x, i1, j1) * m2(y, i2, j2);
    return k;
}

double born_probability(const TwoQubitState& s, const MeasurementSetting& a,
                        const MeasurementSetting& b, int A, int B) {
    Mat4 op = kron(projector(a, A), projector(b, B));
    Cx tr = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) tr += m4c(s.rho, i, j) * m4c(op, j, i);
    return tr.real();
}

std::array<double, 4> hermitian_eigenvalues(const Mat4& m) {
    Mat4 a = m;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += std::norm(m4c(a, p, q));
        if (off < 1e-28) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                Cx apq = m4c(a, p, q);
                double g = std::abs(apq);
                if (g < 1e-18) continue;
                Cx z = apq / g;  // e^{i phi}
                double alpha = m4c(a, p, p).real(), beta = m4c(a, q, q).real();
                double tau = (alpha - beta) / (2.0 * g);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double sv = t * c;
                // Columns, then rows, with U(p,p)=c, U(p,q)=-s z, U(q,p)=s z*, U(q,q)=c.
                for (int k = 0; k < 4; ++k) {
                    Cx kp = m4c(a, k, p), kq = m4c(a, k, q);
                    m4(a, k, p) = c * kp + sv * std::conj(z) * kq;
                    m4(a, k, q) = -sv * z * kp + c * kq;
                }
                for (int k = 0; k < 4; ++k) {
                    Cx pk = m4c(a, p, k), qk = m4c(a, q, k);
                    m4(a, p, k) = c * pk + sv * z * qk;
                    m4(a, q, k) = -sv * std::conj(z) * pk + c * qk;
                }
            }
    }
    std::array<double, 4> ev{m4c(a, 0, 0).real(), m4c(a, 1, 1).real(), m4c(a, 2, 2).real(),
                             m4c(a, 3, 3).real()};
    std::sort(ev.begin(), ev.end());
    return ev;
}

namespace {

std::vector<double> born_table(const TwoQubitState& s, const std::vector<MeasurementSetting>& al,
                               const std::vector<MeasurementSetting>& bo, const Scenario& sc) {
    std::vector<double> t(sc.table_size());
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B)
                    t[sc.index(a, b, A, B)] = born_probability(s, al[a], bo[b], A, B);
    return t;
}

}  // namespace

Phenomenon born_phenomenon(const TwoQubitState& s, const std::vector<MeasurementSetting>& alice,
                           const std::vector<MeasurementSetting>& bob,
                           const std::string& context) {
    if (alice.empty() || bob.empty()) throw InputError("need at least one setting per wing");
    s.check_valid();
    Scenario sc{static_cast<int>(alice.size()), static_cast<int>(bob.size()), 2, 2, context};
    Phenomenon p = Phenomenon::from_float(sc, OutcomeValues::pm_one(2, 2),
                                          born_table(s, alice, bob, sc));
    SignalReport sig = is_signal_local(p, 1e-9);
    if (!sig.local)
        throw InternalInconsistency("trace-rule table shows signalling beyond tolerance");
    return p;
}

Theory oqm_theory(const TwoQubitState& s, const std::vector<OqmComponent>& components,
                  const std::vector<MeasurementSetting>& alice,
                  const std::vector<MeasurementSetting>& bob, const std::string& context) {
    if (components.empty()) throw InputError("decomposition needs at least one component");
    if (alice.empty() || bob.empty()) throw InputError("need at least one setting per wing");
    s.check_valid();
    double wsum = 0;
    for (const auto& c : components) {
        if (c.weight < 0) throw InputError("decomposition weights must be nonnegative");
        c.state.check_valid();
        wsum += c.weight;
    }
    if (std::fabs(wsum - 1.0) > 1e-12) throw InputError("decomposition weights must sum to 1");
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Cx acc = 0;
            for (const auto& c : components) acc += c.weight * c.state.rho[i * 4 + j];
            if (std::abs(acc - s.rho[i * 4 + j]) > 1e-10)
                throw InputError("decomposition does not reconstruct the state");
        }
    Scenario sc{static_cast<int>(alice.size()), static_cast<int>(bob.size()), 2, 2, context};
    std::vector<std::string> labels;
    std::vector<double> mu, kernel;
    kernel.reserve(components.size() * sc.table_size());
    for (size_t i = 0; i < components.size(); ++i) {
        labels.push_back("psi" + std::to_string(i));
        mu.push_back(components[i].weight);
        auto t = born_table(components[i].state, alice, bob, sc);
        kernel.insert(kernel.end(), t.begin(), t.end());
    }
    return Theory::from_float(sc, OutcomeValues::pm_one(2, 2), std::move(labels), std::move(mu),
                              std::move(kernel));
}

Phenomenon boxes_phenomenon() {
    Scenario sc{1, 1, 2, 2, "boxes"};
    // outcome 0 = found, 1 = empty; exactly one wing finds the particle.
    std::vector<Rat> t = {Rat(0), Rat(1, 2), Rat(1, 2), Rat(0)};
    return Phenomenon::from_rational(sc, OutcomeValues::pm_one(2, 2), std::move(t));
}

Theory boxes_oqm_theory() {
    Scenario sc{1, 1, 2, 2, "boxes"};
    std::vector<Rat> mu = {Rat(1)};
    std::vector<Rat> kernel = {Rat(0), Rat(1, 2), Rat(1, 2), Rat(0)};
    return Theory::from_rational(sc, OutcomeValues::pm_one(2, 2), {"psi"}, std::move(mu),
                                 std::move(kernel));
}

ChshGeometry chsh_optimal_geometry() {
    const double pi = std::acos(-1.0);
    ChshGeometry g;
    g.alice = {MeasurementSetting::in_plane(pi / 2, "xz"), MeasurementSetting::in_plane(0.0, "xz")};
    g.bob = {MeasurementSetting::in_plane(pi / 4, "xz"),
             MeasurementSetting::in_plane(3 * pi / 4, "xz")};
    g.settings = {0, 1, 0, 1};
    return g;
}

}  // namespace bell
