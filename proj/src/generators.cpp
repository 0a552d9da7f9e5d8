#include "bell/generators.hpp"

#include <cmath>

namespace bell {

namespace {

// A distribution on the integer grid: numerators in [lo, hi] over their sum.
// Every probability is at least lo/(hi*k) — far from 0 and 1 for the sizes
// used here, so float property checks never sit near a tolerance boundary.
std::vector<Rat> grid_dist(Rng& rng, int k, int lo = 5, int hi = 40) {
    std::vector<long> num(k);
    long total = 0;
    for (int i = 0; i < k; ++i) {
        num[i] = rng.range(lo, hi);
        total += num[i];
    }
    std::vector<Rat> p(k);
    for (int i = 0; i < k; ++i) p[i] = Rat(num[i], total);
    return p;
}

std::vector<Rat> point_mass(int k, int at) {
    std::vector<Rat> p(k, Rat(0));
    p[at] = 1;
    return p;
}

// Injective outcome map Alice -> Bob used by the planted constructions.
int planted_map(const Scenario& sc, int A) {
    if (sc.k_a > sc.k_b)
        throw PreconditionError("planted constructions need k_a <= k_b");
    return sc.k_a == sc.k_b ? (A + 1) % sc.k_b : A;
}

using Block = std::vector<Rat>;  // k_a * k_b joint block

Block outer(const Scenario& sc, const std::vector<Rat>& pa, const std::vector<Rat>& pb) {
    Block blk(static_cast<size_t>(sc.k_a) * sc.k_b);
    for (int A = 0; A < sc.k_a; ++A)
        for (int B = 0; B < sc.k_b; ++B) blk[A * sc.k_b + B] = pa[A] * pb[B];
    return blk;
}

// Kernel assembly: one Block per (a,b), λ-major output.
void push_blocks(std::vector<Rat>& kernel, const Scenario& sc,
                 const std::vector<Block>& blocks) {
    for (int a = 0; a < sc.m_a; ++a)
        for (int b = 0; b < sc.m_b; ++b) {
            const Block& blk = blocks[a * sc.m_b + b];
            for (int A = 0; A < sc.k_a; ++A)
                for (int B = 0; B < sc.k_b; ++B) kernel.push_back(blk[A * sc.k_b + B]);
        }
}

std::vector<Block> lambda_blocks(const Scenario& sc, TheoryKind kind, Rng& rng) {
    const int ka = sc.k_a, kb = sc.k_b;
    std::vector<Block> blocks(static_cast<size_t>(sc.m_a) * sc.m_b);
    switch (kind) {
        case TheoryKind::Generic: {
            for (auto& blk : blocks) blk = grid_dist(rng, ka * kb);
            break;
        }
        case TheoryKind::Deterministic: {
            // A fixed outcome pair per setting pair; response may depend on
            // the remote setting, so locality generally fails.
            for (auto& blk : blocks) {
                blk.assign(static_cast<size_t>(ka) * kb, Rat(0));
                blk[rng.range(0, ka - 1) * kb + rng.range(0, kb - 1)] = 1;
            }
            break;
        }
        case TheoryKind::Factorizable: {
            std::vector<std::vector<Rat>> pa(sc.m_a), pb(sc.m_b);
            for (auto& p : pa) p = grid_dist(rng, ka);
            for (auto& p : pb) p = grid_dist(rng, kb);
            for (int a = 0; a < sc.m_a; ++a)
                for (int b = 0; b < sc.m_b; ++b) blocks[a * sc.m_b + b] = outer(sc, pa[a], pb[b]);
            break;
        }
        case TheoryKind::LocalNotJc: {
            // Setting-local marginals, then a marginal-preserving correlation
            // twist: +d on two diagonal cells, -d on the off-diagonal ones.
            std::vector<std::vector<Rat>> pa(sc.m_a), pb(sc.m_b);
            for (auto& p : pa) p = grid_dist(rng, ka);
            for (auto& p : pb) p = grid_dist(rng, kb);
            for (int a = 0; a < sc.m_a; ++a)
                for (int b = 0; b < sc.m_b; ++b) {
                    Block blk = outer(sc, pa[a], pb[b]);
                    int A1 = rng.range(0, ka - 1), A2 = (A1 + 1 + rng.range(0, ka - 2)) % ka;
                    int B1 = rng.range(0, kb - 1), B2 = (B1 + 1 + rng.range(0, kb - 2)) % kb;
                    Rat corner = blk[A1 * kb + B1];
                    for (Rat c : {blk[A2 * kb + B2], blk[A1 * kb + B2], blk[A2 * kb + B1]})
                        if (c < corner) corner = c;
                    Rat d = corner / 2;
                    blk[A1 * kb + B1] += d;
                    blk[A2 * kb + B2] += d;
                    blk[A1 * kb + B2] -= d;
                    blk[A2 * kb + B1] -= d;
                    blocks[a * sc.m_b + b] = std::move(blk);
                }
            break;
        }
        case TheoryKind::JcNotLocal: {
            // A product inside every block, but the factors follow both
            // settings: conditioning is inert, the marginals signal.
            for (auto& blk : blocks) blk = outer(sc, grid_dist(rng, ka), grid_dist(rng, kb));
            break;
        }
        case TheoryKind::JcFl: {
            // Blockwise products again, with the only extreme marginals at
            // the planted pair: Alice answers deterministically whenever
            // a=0 (same outcome for every b), Bob mirrors it through the
            // planted map whenever b=0. Everything else is bounded noise.
            int alpha = rng.range(0, sc.k_a - 1);
            int beta = planted_map(sc, alpha);
            for (int a = 0; a < sc.m_a; ++a)
                for (int b = 0; b < sc.m_b; ++b) {
                    std::vector<Rat> g =
                        a == 0 ? point_mass(ka, alpha) : grid_dist(rng, ka);
                    std::vector<Rat> h =
                        b == 0 ? point_mass(kb, beta) : grid_dist(rng, kb);
                    blocks[a * sc.m_b + b] = outer(sc, g, h);
                }
            break;
        }
    }
    return blocks;
}

Theory emit(const Scenario& sc, std::vector<Rat> mu, std::vector<Rat> kernel, Encoding enc) {
    OutcomeValues vals = OutcomeValues::pm_one(sc.k_a, sc.k_b);
    if (enc == Encoding::Rational)
        return Theory::from_rational(sc, vals, {}, std::move(mu), std::move(kernel));
    std::vector<double> fmu, fker;
    fmu.reserve(mu.size());
    fker.reserve(kernel.size());
    for (const Rat& r : mu) fmu.push_back(rat_to_double(r));
    for (const Rat& r : kernel) fker.push_back(rat_to_double(r));
    return Theory::from_float(sc, vals, {}, std::move(fmu), std::move(fker));
}

}  // namespace

Theory random_theory(const Scenario& sc, int n_lambda, TheoryKind kind, Encoding enc, Rng& rng) {
    sc.check_valid();
    if (n_lambda < 1) throw InputError("need at least one hidden state");
    if (kind == TheoryKind::LocalNotJc && (sc.k_a < 2 || sc.k_b < 2))
        throw PreconditionError("correlation twist needs two outcomes per wing");
    std::vector<Rat> mu = grid_dist(rng, n_lambda);
    std::vector<Rat> kernel;
    kernel.reserve(static_cast<size_t>(n_lambda) * sc.table_size());
    for (int l = 0; l < n_lambda; ++l) push_blocks(kernel, sc, lambda_blocks(sc, kind, rng));
    return emit(sc, std::move(mu), std::move(kernel), enc);
}

Theory random_factorizable_with_planted_pair(const Scenario& sc, int n_lambda, Encoding enc,
                                             Rng& rng) {
    sc.check_valid();
    if (n_lambda < 1) throw InputError("need at least one hidden state");
    std::vector<Rat> mu = grid_dist(rng, n_lambda);
    std::vector<Rat> kernel;
    kernel.reserve(static_cast<size_t>(n_lambda) * sc.table_size());
    for (int l = 0; l < n_lambda; ++l) {
        int alpha = rng.range(0, sc.k_a - 1);
        int beta = planted_map(sc, alpha);
        // Setting-local single-wing marginals (factorizable by construction);
        // deterministic exactly at a=0 and b=0.
        std::vector<std::vector<Rat>> pa(sc.m_a), pb(sc.m_b);
        for (int a = 0; a < sc.m_a; ++a)
            pa[a] = a == 0 ? point_mass(sc.k_a, alpha) : grid_dist(rng, sc.k_a);
        for (int b = 0; b < sc.m_b; ++b)
            pb[b] = b == 0 ? point_mass(sc.k_b, beta) : grid_dist(rng, sc.k_b);
        std::vector<Block> blocks(static_cast<size_t>(sc.m_a) * sc.m_b);
        for (int a = 0; a < sc.m_a; ++a)
            for (int b = 0; b < sc.m_b; ++b) blocks[a * sc.m_b + b] = outer(sc, pa[a], pb[b]);
        push_blocks(kernel, sc, blocks);
    }
    return emit(sc, std::move(mu), std::move(kernel), enc);
}

Phenomenon random_phenomenon(const Scenario& sc, Encoding enc, Rng& rng) {
    sc.check_valid();
    std::vector<Rat> t;
    t.reserve(sc.table_size());
    for (int blk = 0; blk < sc.block_count(); ++blk) {
        auto d = grid_dist(rng, sc.block_size());
        t.insert(t.end(), d.begin(), d.end());
    }
    OutcomeValues vals = OutcomeValues::pm_one(sc.k_a, sc.k_b);
    if (enc == Encoding::Rational) return Phenomenon::from_rational(sc, vals, std::move(t));
    std::vector<double> ft;
    ft.reserve(t.size());
    for (const Rat& r : t) ft.push_back(rat_to_double(r));
    return Phenomenon::from_float(sc, vals, std::move(ft));
}

MeasurementSetting random_setting(Rng& rng) {
    double x, y, z, n;
    do {
        x = rng.gaussian();
        y = rng.gaussian();
        z = rng.gaussian();
        n = std::sqrt(x * x + y * y + z * z);
    } while (n < 1e-6);
    return {x / n, y / n, z / n};
}

TwoQubitState random_state(Rng& rng) {
    Mat4 g;
    for (auto& e : g) e = Cx(rng.gaussian(), rng.gaussian());
    // rho = G G† / tr(G G†): Hermitian, positive, unit trace by construction.
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Cx s = 0;
            for (int k = 0; k < 4; ++k) s += g[i * 4 + k] * std::conj(g[j * 4 + k]);
            r[i * 4 + j] = s;
        }
    double tr = 0;
    for (int i = 0; i < 4; ++i) tr += r[i * 4 + i].real();
    for (auto& e : r) e /= tr;
    TwoQubitState s;
    s.rho = r;
    // Symmetrize away the last bits of roundoff so check_valid is happy.
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            Cx m = 0.5 * (s.rho[i * 4 + j] + std::conj(s.rho[j * 4 + i]));
            s.rho[i * 4 + j] = m;
            s.rho[j * 4 + i] = std::conj(m);
        }
    return s;
}

namespace {

const std::array<int, 4> kSign = {1, -1, -1, 1};  // val(A)*val(B) for (A,B) in row-major 2x2

}  // namespace

Phenomenon correlation_phenomenon(const std::array<double, 4>& E, const std::string& context) {
    for (double e : E)
        if (std::fabs(e) > 1.0) throw InputError("correlator magnitude exceeds 1");
    Scenario sc{2, 2, 2, 2, context};
    std::vector<double> t(16);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B)
                    t[sc.index(a, b, A, B)] = (1.0 + kSign[A * 2 + B] * E[a * 2 + b]) / 4.0;
    return Phenomenon::from_float(sc, OutcomeValues::pm_one(2, 2), std::move(t));
}

Phenomenon correlation_phenomenon_exact(const std::array<Rat, 4>& E, const std::string& context) {
    for (const Rat& e : E)
        if (abs_of(e) > 1) throw InputError("correlator magnitude exceeds 1");
    Scenario sc{2, 2, 2, 2, context};
    std::vector<Rat> t(16);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B)
                    t[sc.index(a, b, A, B)] = (Rat(1) + Rat(kSign[A * 2 + B]) * E[a * 2 + b]) / 4;
    return Phenomenon::from_rational(sc, OutcomeValues::pm_one(2, 2), std::move(t));
}

}  // namespace bell
