#pragma once

#include "lemmas.hpp"

namespace npsim::testing {

// Simulator decision against exhaustive_tm_decide and the analytic oracle on
// random tiny instances; SAT instances run through both SAT machines.
SuiteReport tri_oracle_suite(unsigned seed, int per_problem);

}  // namespace npsim::testing
