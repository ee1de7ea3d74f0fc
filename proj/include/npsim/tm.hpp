#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace npsim {

enum class Variant { sat_id, sat_fixed, subset_sum };

const char* variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string& s);

inline const std::string kBlank = "eps";

bool is_digit_token(const std::string& s);
bool is_circled_token(const std::string& s);
int circled_value(const std::string& s);
std::string circled(int d);

// One row of a symbolic transition table. `read` and `write` may be symbol
// classes ("M", "D", "(M)", "(D)", "B", "*") or write templates ("(D)-(M)",
// "D-1"); `next` may carry a parameter template such as ".N", ".(N-1)".
struct Rule {
    std::string state;
    std::string read;
    std::string next;
    std::string write;
    int move = 1;
};

struct Transition {
    std::string next;
    std::string write;
    int move = 1;
    bool operator==(const Transition&) const = default;
};

struct MachineSpec {
    Variant variant = Variant::sat_fixed;
    std::vector<Rule> rules;
    std::string q_init;
    std::string q_acc = "Accept";
    std::string q_rej = "Reject";
    int k = 0;
    bool sanitized = false;
    std::vector<std::string> alphabet;
    // Declared state set for sat-id; next states outside it are rejected.
    std::set<std::string> declared_states;

    void add(const Rule& r);
    const Rule* find(const std::string& state, const std::string& read) const;

private:
    std::map<std::pair<std::string, std::string>, std::size_t> index_;
};

Transition resolve_transition(const MachineSpec& spec, const std::string& state,
                              const std::string& symbol);

// Interned, fully resolved machine. State and symbol ids follow the
// lexicographic order of their names, so comparing ids compares names.
class Machine {
public:
    struct Step {
        std::uint16_t next = 0;
        std::uint16_t write = 0;
        std::int8_t move = 1;
    };

    explicit Machine(MachineSpec spec);

    const MachineSpec& spec() const { return spec_; }
    std::size_t num_states() const { return states_.size(); }
    std::size_t num_symbols() const { return symbols_.size(); }

    std::optional<std::uint16_t> find_state(const std::string& name) const;
    std::optional<std::uint16_t> find_symbol(const std::string& name) const;
    std::uint16_t state_id(const std::string& name) const;
    std::uint16_t symbol_id(const std::string& name) const;
    const std::string& state_name(std::uint16_t id) const { return states_[id]; }
    const std::string& symbol_name(std::uint16_t id) const { return symbols_[id]; }

    const Step& step(std::uint16_t state, std::uint16_t symbol) const {
        return table_[static_cast<std::size_t>(state) * symbols_.size() + symbol];
    }
    bool halting(std::uint16_t state) const { return state == acc || state == rej; }

    std::uint16_t init = 0;
    std::uint16_t acc = 0;
    std::uint16_t rej = 0;
    std::uint16_t blank = 0;

private:
    MachineSpec spec_;
    std::vector<std::string> states_;
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, std::uint16_t> state_ids_;
    std::unordered_map<std::string, std::uint16_t> symbol_ids_;
    std::vector<Step> table_;
};

struct Configuration {
    std::uint16_t state = 0;
    std::unordered_map<long, std::uint16_t> tape;
    long head = 0;
    std::size_t steps = 0;

    std::uint16_t read(long cell, std::uint16_t blank) const;
};

void step(const Machine& m, Configuration& c);

enum class Decision { accept, reject, step_limit };
const char* decision_name(Decision d);

struct TraceStep {
    std::uint16_t state;
    long head;
    std::uint16_t read;
    std::uint16_t write;
    int move;
};

struct RunResult {
    Decision decision = Decision::step_limit;
    std::vector<TraceStep> trace;
    Configuration final_config;
};

std::size_t default_max_steps(std::size_t tape_len);

RunResult run_direct(const Machine& m, const std::vector<std::string>& tape,
                     std::size_t max_steps, bool keep_trace = true);

}  // namespace npsim
