#pragma once

// Dense phase-1 primal simplex for the feasibility question
//     find w >= 0 with A w = rhs,   rhs >= 0,
// where A's columns are supplied implicitly (they are 0/1 strategy incidence
// vectors here, but the solver does not care). Bland's smallest-index rule
// throughout, so the method terminates without anti-cycling heuristics.
// Instantiated with T = double (tolerance eps) and T = Rat (eps = 0: every
// comparison is exact and the verdict is a proof).

#include <functional>
#include <vector>

#include "bell/rational.hpp"

#ifdef BELL_HAVE_OPENMP
#include <omp.h>
#endif

namespace bell {

template <class T>
struct SimplexResult {
    bool feasible = false;
    // Feasible: weights w (size n), nonnegative, A w = rhs up to roundoff.
    std::vector<T> weights;
    // Infeasible: Farkas vector y (size m) with yᵀA_j <= 0 for every column
    // and yᵀ rhs = objective > 0.
    std::vector<T> dual;
    T objective{0};
    long iterations = 0;
};

// col_dot(y, j) must return yᵀA_j; col_fill(j, out) must write A_j into out
// (dense, size m). `parallel_pricing` switches the per-iteration column scan
// to OpenMP; the entering choice (smallest qualifying index) is identical
// either way.
template <class T, class ColDot, class ColFill>
SimplexResult<T> phase1_simplex(int m, long long n, std::vector<T> rhs, ColDot col_dot,
                                ColFill col_fill, const T& eps, long long max_iterations = 0,
                                bool parallel_pricing = false) {
    if (max_iterations <= 0) max_iterations = 10000 + 50 * (m + n);
    // Basis starts as the artificial identity; artificial i is variable n+i.
    std::vector<long long> basis(m);
    std::vector<char> artificial_retired(m, 0);  // once out, never back in
    std::vector<char> structural_in_basis;
    structural_in_basis.assign(static_cast<size_t>(n), 0);
    std::vector<std::vector<T>> Binv(m, std::vector<T>(m, T(0)));
    for (int i = 0; i < m; ++i) {
        Binv[i][i] = T(1);
        basis[i] = n + i;
    }
    std::vector<T> xB = rhs;

    std::vector<T> y(m), dir(m), col(m);
    SimplexResult<T> res;

    auto compute_y = [&]() {
        // y = cBᵀ B⁻¹ with cB[k] = 1 iff basis[k] is artificial.
        for (int i = 0; i < m; ++i) {
            T s(0);
            for (int k = 0; k < m; ++k)
                if (basis[k] >= n) s += Binv[k][i];
            y[i] = s;
        }
    };

    for (long iter = 0;; ++iter) {
        if (iter >= max_iterations) throw Error("simplex iteration limit exceeded");
        res.iterations = iter;
        compute_y();

        // Pricing: smallest structural j with reduced cost -yᵀA_j < -eps,
        // i.e. yᵀA_j > eps. Artificials have reduced cost 1 - y_i and may
        // re-enter only if never retired; in practice structural columns
        // suffice and retired ones are skipped wholesale.
        long long enter = -1;
        if (!parallel_pricing) {
            for (long long j = 0; j < n; ++j) {
                if (structural_in_basis[j]) continue;
                if (col_dot(y, j) > eps) {
                    enter = j;
                    break;  // Bland: first qualifying index
                }
            }
        } else {
#ifdef BELL_HAVE_OPENMP
            long long best = n;
#pragma omp parallel
            {
                long long local = n;
#pragma omp for schedule(static)
                for (long long j = 0; j < n; ++j) {
                    if (local != n)  // this thread already found one earlier in its chunk
                        continue;
                    if (!structural_in_basis[j] && col_dot(y, j) > eps) local = j;
                }
#pragma omp critical
                if (local < best) best = local;
            }
            if (best < n) enter = best;
#else
            for (long long j = 0; j < n; ++j) {
                if (structural_in_basis[j]) continue;
                if (col_dot(y, j) > eps) {
                    enter = j;
                    break;
                }
            }
#endif
        }

        if (enter < 0) {
            // Optimal. Objective = total artificial mass still in the basis.
            T z(0);
            for (int k = 0; k < m; ++k)
                if (basis[k] >= n) z += xB[k];
            res.objective = z;
            if (z > eps) {
                res.feasible = false;
                res.dual = y;
            } else {
                res.feasible = true;
                res.weights.assign(static_cast<size_t>(n), T(0));
                for (int k = 0; k < m; ++k)
                    if (basis[k] < n) {
                        T w = xB[k];
                        if (w < T(0)) w = T(0);  // roundoff guard; exact mode never hits it
                        res.weights[static_cast<size_t>(basis[k])] = w;
                    }
            }
            return res;
        }

        // Direction d = B⁻¹ A_enter.
        col_fill(enter, col);
        for (int i = 0; i < m; ++i) {
            T s(0);
            for (int k = 0; k < m; ++k) {
                if (col[k] != T(0)) s += Binv[i][k] * col[k];
            }
            dir[i] = s;
        }

        // Ratio test over dir > eps; ties by smallest basis variable index
        // (Bland). No positive entry would mean an unbounded phase-1, which
        // cannot happen (objective bounded below by 0) — guard anyway.
        int leave = -1;
        T best_ratio(0);
        for (int i = 0; i < m; ++i) {
            if (!(dir[i] > eps)) continue;
            T ratio = xB[i] / dir[i];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave]))
                leave = i, best_ratio = ratio;
        }
        if (leave < 0) throw Error("phase-1 simplex claims unboundedness; invalid input");

        // Pivot: update basis bookkeeping, B⁻¹ and xB.
        if (basis[leave] >= n)
            artificial_retired[basis[leave] - n] = 1;
        else
            structural_in_basis[basis[leave]] = 0;
        structural_in_basis[enter] = 1;
        basis[leave] = enter;

        T piv = dir[leave];
        for (int k = 0; k < m; ++k) Binv[leave][k] /= piv;
        T t = xB[leave] / piv;
        xB[leave] = t;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            if (dir[i] != T(0)) {
                for (int k = 0; k < m; ++k) Binv[i][k] -= dir[i] * Binv[leave][k];
                xB[i] -= dir[i] * t;
                // Exact mode cannot go negative (the ratio test forbids it);
                // float mode picks up harmless -1e-17 drift worth squashing.
                if (eps > T(0) && xB[i] < T(0)) xB[i] = T(0);
            }
        }
    }
}

}  // namespace bell
