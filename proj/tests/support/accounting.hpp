#pragma once

#include <string>
#include <vector>

#include "lemmas.hpp"
#include "npsim/extension.hpp"

namespace npsim::testing {

struct Accounting {
    SimulationResult result;
    // Halting edges of the final footmarks graph whose head rejects.
    std::size_t rejecting_edges = 0;
    std::size_t halting_edges = 0;
    std::vector<std::string> failures;
};

// Runs the simulator on `inst` and replays every witness it reports through
// the machine directly.
Accounting account_witnesses(Variant v, const ProblemInstance& inst, bool sanitize = false);

}  // namespace npsim::testing
