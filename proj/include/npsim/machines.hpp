#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "npsim/tm.hpp"

namespace npsim {

enum class Problem { sat, subset_sum };

Problem problem_of(Variant v);

struct ProblemInstance {
    Problem kind = Problem::sat;
    std::vector<std::vector<int>> clauses;
    int var_count = 0;
    std::uint64_t target = 0;
    std::vector<std::uint64_t> elements;
    // Whether a "_" sits directly before the "#" end marker.
    bool trailing_delim = false;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ProblemInstance parse_instance(Problem kind, std::string_view text);
std::string render_instance(const ProblemInstance& inst);

// Splits a raw tape string into one token per character.
std::vector<std::string> tokenize(std::string_view text);

struct CertificateSchema {
    Problem kind = Problem::sat;
    long region_start = 0;
    std::size_t max_length = 0;
    std::optional<std::string> terminator;

    bool in_region(long cell) const {
        return cell >= region_start && cell < region_start + static_cast<long>(max_length);
    }
};

CertificateSchema certificate_schema(const ProblemInstance& inst);

// Symbols admissible at certificate position `pos`. Without a prefix the
// result is the union over every prefix that could precede `pos`.
std::vector<std::string> certificate_alphabet(const CertificateSchema& schema, std::size_t pos,
                                              std::optional<std::string_view> prefix = std::nullopt);

bool certificate_well_formed(const CertificateSchema& schema, std::string_view cert);

struct EncodedTape {
    std::vector<std::string> tokens;
    std::size_t instance_len = 0;
    std::size_t cert_len = 0;
};

EncodedTape encode_instance(const ProblemInstance& inst, const std::optional<std::string>& certificate = {});

std::string assignment_certificate(const std::vector<bool>& values);
std::string subset_certificate(const std::vector<std::uint64_t>& picked);

// Inverse of subset_certificate; nullopt for a malformed string.
std::optional<std::vector<std::uint64_t>> parse_subset_certificate(std::string_view cert);

MachineSpec build_machine(Variant variant, const ProblemInstance& inst, bool sanitize);

// Symbolic rule table, one row per line: state read next write move.
std::string dump_rules(const MachineSpec& spec);
// Every resolved (state, symbol) pair of the reachable state set.
std::string dump_instantiated(const Machine& m);

}  // namespace npsim
