#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "npsim/tm.hpp"

namespace npsim {

enum ExitCode { exit_accept = 0, exit_reject = 1, exit_error = 2, exit_mismatch = 3 };

struct RunConfig {
    Variant machine = Variant::sat_fixed;
    std::string input;
    bool sanitize = false;
    bool oracle = false;
    std::optional<std::size_t> max_steps;
    std::string metrics_path;
    std::string metrics_json_path;
    std::string witness_path;
    std::string trace_path;
    std::string graph_dump_path;
};

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct BatchConfig {
    Variant machine = Variant::sat_fixed;
    std::string dir;
    bool sanitize = false;
    bool with_elapsed = true;
    std::optional<std::size_t> max_steps;
};

// One tab-separated row per instance file, files in name order.
int batch_command(const BatchConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line entry point; argv[0] is the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace npsim
