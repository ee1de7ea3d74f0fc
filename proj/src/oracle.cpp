#include "npsim/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace npsim {

bool eval_cnf(const std::vector<std::vector<int>>& clauses, const std::vector<bool>& assignment) {
    for (const auto& clause : clauses) {
        bool sat = false;
        for (int lit : clause) {
            std::size_t var = static_cast<std::size_t>(std::abs(lit));
            if (var == 0 || var > assignment.size()) throw std::out_of_range("literal outside the assignment");
            if (assignment[var - 1] == (lit > 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

OracleResult brute_force_sat(const std::vector<std::vector<int>>& clauses, int k) {
    if (k < 0 || k > 24) throw std::invalid_argument("brute_force_sat supports 0..24 variables");
    std::vector<bool> a(static_cast<std::size_t>(k));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        // Bit i of the counter set means variable i+1 is F, so T comes first.
        for (int i = 0; i < k; ++i) a[static_cast<std::size_t>(i)] = !((mask >> (k - 1 - i)) & 1);
        if (eval_cnf(clauses, a)) return {true, assignment_certificate(a), false};
    }
    return {};
}

OracleResult subset_sum_solve(std::uint64_t target, const std::vector<std::uint64_t>& elements) {
    if (target > 50'000'000) throw std::invalid_argument("target too large for the table oracle");
    std::size_t t = static_cast<std::size_t>(target);
    // from[s] = index of the element that first reached sum s, n = unreached.
    const std::size_t n = elements.size();
    std::vector<std::size_t> from(t + 1, n + 1);
    from[0] = n;
    for (std::size_t i = 0; i < n; ++i) {
        auto e = elements[i];
        if (e > target) continue;
        for (std::size_t s = t; s + 1 > e; --s) {
            if (from[s] == n + 1 && from[s - e] != n + 1 && (s - e == 0 || from[s - e] < i)) from[s] = i;
            if (s == 0) break;
        }
    }
    if (from[t] == n + 1) return {};
    std::vector<std::uint64_t> picked;
    std::vector<std::size_t> idx;
    for (std::size_t s = t; s != 0;) {
        idx.push_back(from[s]);
        s -= elements[from[s]];
    }
    std::sort(idx.begin(), idx.end());
    for (auto i : idx) picked.push_back(elements[i]);
    return {true, subset_certificate(picked), false};
}

bool is_subset_witness(std::uint64_t target, const std::vector<std::uint64_t>& elements,
                       const std::vector<std::uint64_t>& picked) {
    std::vector<std::uint64_t> pool = elements;
    std::uint64_t sum = 0;
    for (auto v : picked) {
        auto it = std::find(pool.begin(), pool.end(), v);
        if (it == pool.end()) return false;
        pool.erase(it);
        sum += v;
    }
    return sum == target;
}

OracleResult analytic_oracle(const ProblemInstance& inst) {
    if (inst.kind == Problem::sat) return brute_force_sat(inst.clauses, inst.var_count);
    return subset_sum_solve(inst.target, inst.elements);
}

bool witness_valid(const ProblemInstance& inst, const std::string& certificate) {
    if (inst.kind == Problem::sat) {
        if (certificate.size() != static_cast<std::size_t>(inst.var_count)) return false;
        std::vector<bool> a;
        for (char c : certificate) {
            if (c != 'T' && c != 'F') return false;
            a.push_back(c == 'T');
        }
        return eval_cnf(inst.clauses, a);
    }
    auto picked = parse_subset_certificate(certificate);
    return picked && is_subset_witness(inst.target, inst.elements, *picked);
}

std::vector<std::string> enumerate_certificates(const CertificateSchema& schema, std::size_t limit) {
    std::vector<std::string> out;
    std::string cur;
    std::function<bool()> rec = [&]() -> bool {
        if (schema.kind == Problem::sat ? cur.size() == schema.max_length : (!cur.empty() && cur.back() == ';')) {
            out.push_back(cur);
            return out.size() <= limit;
        }
        for (const auto& s : certificate_alphabet(schema, cur.size(), cur)) {
            cur += s;
            bool ok = rec();
            cur.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    rec();
    return out;
}

OracleResult exhaustive_tm_decide(Variant variant, const ProblemInstance& inst, std::size_t cert_bound,
                                  bool sanitize) {
    auto schema = certificate_schema(inst);
    auto certs = enumerate_certificates(schema, cert_bound);
    if (certs.size() > cert_bound) return {false, std::nullopt, true};
    Machine m(build_machine(variant, inst, sanitize));
    for (const auto& c : certs) {
        auto tape = encode_instance(inst, c);
        auto res = run_direct(m, tape.tokens, default_max_steps(tape.tokens.size()), false);
        if (res.decision == Decision::step_limit) return {false, std::nullopt, true};
        if (res.decision == Decision::accept) return {true, c, false};
    }
    return {};
}

}  // namespace npsim
