#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npsim/machines.hpp"

namespace npsim {

struct OracleResult {
    bool yes = false;
    // Certificate string in tape format ("TFT..." or "3_5_;").
    std::optional<std::string> witness;
    // Set when exhaustive_tm_decide ran out of budget before deciding.
    bool budget_exceeded = false;
};

bool eval_cnf(const std::vector<std::vector<int>>& clauses, const std::vector<bool>& assignment);

// Assignments are enumerated in lexicographic order with T before F.
OracleResult brute_force_sat(const std::vector<std::vector<int>>& clauses, int k);

OracleResult subset_sum_solve(std::uint64_t target, const std::vector<std::uint64_t>& elements);

// True when `picked` is a sub-multiset of `elements` summing to `target`.
bool is_subset_witness(std::uint64_t target, const std::vector<std::uint64_t>& elements,
                       const std::vector<std::uint64_t>& picked);

OracleResult analytic_oracle(const ProblemInstance& inst);

// Checks a tape-format certificate against the instance semantics.
bool witness_valid(const ProblemInstance& inst, const std::string& certificate);

// Every schema-valid certificate, in lexicographic order.
std::vector<std::string> enumerate_certificates(const CertificateSchema& schema, std::size_t limit);

OracleResult exhaustive_tm_decide(Variant variant, const ProblemInstance& inst, std::size_t cert_bound = 1u << 20,
                                  bool sanitize = false);

}  // namespace npsim
