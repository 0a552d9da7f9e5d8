#pragma once

// OpenMP twins of the scan-heavy kernels. Each one is required to return
// bit-identical results to its serial counterpart: work is split so that
// every floating-point sum keeps its serial operation order, and
// worst-witness reductions merge partial scans in index order with
// earliest-maximiser tie-breaking. The serial versions stay the reference
// implementations; the test suite holds the pairs equal and the bench
// target times them against each other. Without OpenMP these forward to
// the serial code.

#include "bell/lhv.hpp"
#include "bell/phenomenon.hpp"
#include "bell/theory.hpp"

namespace bell::par {

Phenomenon predict(const Theory& t);

PropertyVector classify(const Theory& t);
PropertyVector classify(const Theory& t, double tol, FlMode mode = FlMode::Strong);

ModelCheck verify_model(const LhvModel& m, const Phenomenon& p);
ModelCheck verify_model(const LhvModel& m, const Phenomenon& p, double tol);

double local_bound(const Scenario& sc, const std::vector<double>& coeffs, long long cap = 0);

}  // namespace bell::par
