#pragma once

#include <string>

#include "lemmas.hpp"

namespace npsim::testing {

// Row-matches the transcribed tables under `tables_dir` against dump-tm
// output, and checks every fully concrete row against the resolved machine.
SuiteReport table_fidelity(const std::string& tables_dir);

}  // namespace npsim::testing
