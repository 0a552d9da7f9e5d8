// Times the OpenMP kernels against their serial reference implementations
// and verifies, on the same inputs, that the two produce identical results.
// Run it directly; it prints one row per kernel.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "bell/generators.hpp"
#include "bell/json_io.hpp"
#include "bell/lhv.hpp"
#include "bell/par.hpp"
#include "bell/theory.hpp"

#ifdef BELL_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

template <typename F>
double best_ms(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

void row(const char* name, double serial_ms, double par_ms, bool equal) {
    std::printf("%-16s %10.2f ms %10.2f ms   x%.2f   results %s\n", name, serial_ms, par_ms,
                par_ms > 0 ? serial_ms / par_ms : 0.0, equal ? "identical" : "DIFFER");
}

}  // namespace

int main() {
#ifdef BELL_HAVE_OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP not enabled; parallel calls fall back to serial)\n");
#endif

    bell::Rng rng(7);
    const bell::Scenario sc{3, 3, 4, 4, "bench"};
    const bell::Theory big =
        bell::random_theory(sc, 4000, bell::TheoryKind::Generic, bell::Encoding::Float64, rng);

    {
        bell::Phenomenon ps = bell::predict(big), pp = bell::par::predict(big);
        const bool eq = ps.table == pp.table;
        const double s = best_ms([&] { ps = bell::predict(big); }, 5);
        const double p = best_ms([&] { pp = bell::par::predict(big); }, 5);
        row("predict", s, p, eq);
    }

    {
        const bell::PropertyVector vs = bell::classify(big, 1e-9);
        const bell::PropertyVector vp = bell::par::classify(big, 1e-9);
        const bool eq = bell::render_json(bell::to_json(vs)) == bell::render_json(bell::to_json(vp));
        const double s = best_ms([&] { bell::classify(big, 1e-9); }, 5);
        const double p = best_ms([&] { bell::par::classify(big, 1e-9); }, 5);
        row("classify", s, p, eq);
    }

    {
        const bell::Scenario sb{5, 5, 4, 4, "bench"};
        std::vector<double> coeffs(static_cast<size_t>(sb.table_size()));
        for (double& c : coeffs) c = rng.gaussian();
        const long long cap = 3'000'000;
        const double bs = bell::local_bound_of(sb, coeffs, cap);
        const double bp = bell::par::local_bound(sb, coeffs, cap);
        const double s = best_ms([&] { bell::local_bound_of(sb, coeffs, cap); }, 3);
        const double p = best_ms([&] { bell::par::local_bound(sb, coeffs, cap); }, 3);
        row("local_bound", s, p, bs == bp);
    }

    {
        const bell::Scenario sm{4, 4, 4, 4, "bench"};
        bell::LhvModel m;
        m.scenario = sm;
        const long long n = bell::strategy_count(sm);
        for (int i = 0; i < 2000; ++i) {
            bell::WeightedStrategy w;
            w.strategy = bell::strategy_from_index(sm, rng.below(n));
            w.weight = 1.0 / 2000;
            m.support.push_back(w);
        }
        const bell::Phenomenon p0 =
            bell::predict(bell::theory_from_model(m, bell::OutcomeValues::pm_one(4, 4), "bench"));
        const bell::ModelCheck cs = bell::verify_model(m, p0, 1e-9);
        const bell::ModelCheck cp = bell::par::verify_model(m, p0, 1e-9);
        const bool eq = cs.ok == cp.ok && cs.max_deviation == cp.max_deviation &&
                        cs.where == cp.where;
        const double s = best_ms([&] { bell::verify_model(m, p0, 1e-9); }, 5);
        const double p = best_ms([&] { bell::par::verify_model(m, p0, 1e-9); }, 5);
        row("verify_model", s, p, eq);
    }

    return 0;
}
