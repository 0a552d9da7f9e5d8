#pragma once

// One-shot machine verification of the whole result chain: the singlet has
// no local model (with a certificate), determinization round-trips the
// local polytope, factorizability coincides with locality plus Jarrett
// completeness, determinism implies completeness, two-way predictability
// forces deterministic kernels, conditional certainty pins hidden states,
// the boxes argument, and the completeness verdicts at perfect correlation.
// Every item reports pass/fail with its seed; failures are entries in the
// report, never exceptions.

#include <cstdint>
#include <string>
#include <vector>

#include "bell/rational.hpp"

namespace bell {

// Deliberate corruption for exercising the harness itself: `Roundtrip`
// perturbs one determinized weight so exactly the round-trip item fails.
enum class BatteryFault { None, Roundtrip };

struct BatteryConfig {
    std::uint64_t seed = 20260822;
    Encoding encoding = Encoding::Float64;  // encoding for the randomized items
    int roundtrip_instances = 100;
    int equivalence_instances = 1000;
    int determinism_instances = 1000;
    int predictability_instances = 100;
    int propagation_instances = 1000;
    bool parallel = false;
    BatteryFault fault = BatteryFault::None;
};

struct BatteryItem {
    std::string name;
    bool pass = false;
    long instances = 0;
    long failures = 0;
    std::uint64_t seed = 0;  // the seed this item derived its draws from
    double seconds = 0;
    std::string detail;  // summary, or the first failure's description
};

struct BatteryReport {
    std::uint64_t seed = 0;
    Encoding encoding = Encoding::Float64;
    bool parallel = false;
    bool fault_injected = false;
    std::vector<BatteryItem> items;
    bool all_pass = false;
};

BatteryReport run_theorem_battery(const BatteryConfig& cfg = {});

}  // namespace bell
