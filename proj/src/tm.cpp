#include "npsim/tm.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace npsim {

const char* variant_name(Variant v) {
    switch (v) {
    case Variant::sat_id: return "sat-id";
    case Variant::sat_fixed: return "sat-fixed";
    case Variant::subset_sum: return "subset-sum";
    }
    return "?";
}

std::optional<Variant> parse_variant(const std::string& s) {
    if (s == "sat-id") return Variant::sat_id;
    if (s == "sat-fixed") return Variant::sat_fixed;
    if (s == "subset-sum") return Variant::subset_sum;
    return std::nullopt;
}

bool is_digit_token(const std::string& s) { return s.size() == 1 && s[0] >= '0' && s[0] <= '9'; }

bool is_circled_token(const std::string& s) {
    return s.size() == 3 && s[0] == '(' && s[1] >= '0' && s[1] <= '9' && s[2] == ')';
}

int circled_value(const std::string& s) { return s[1] - '0'; }

std::string circled(int d) { return std::string("(") + char('0' + d) + ")"; }

void MachineSpec::add(const Rule& r) {
    auto key = std::make_pair(r.state, r.read);
    if (index_.count(key)) throw std::logic_error("duplicate rule " + r.state + " / " + r.read);
    index_[key] = rules.size();
    rules.push_back(r);
}

const Rule* MachineSpec::find(const std::string& state, const std::string& read) const {
    auto it = index_.find({state, read});
    return it == index_.end() ? nullptr : &rules[it->second];
}

namespace {

std::pair<std::string, std::optional<std::string>> split_state(const std::string& state) {
    auto dot = state.find('.');
    if (dot == std::string::npos) return {state, std::nullopt};
    return {state.substr(0, dot), state.substr(dot + 1)};
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string replace_suffix(const std::string& s, const std::string& suffix, const std::string& with) {
    return s.substr(0, s.size() - suffix.size()) + with;
}

bool is_truth(const std::string& s) { return s == "T" || s == "F"; }

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

Transition reject_triple(const MachineSpec& spec, int move) { return {spec.q_rej, "_", move}; }

Transition resolve_subset_sum(const MachineSpec& spec, const std::string& state, const std::string& symbol) {
    auto [action, addr] = split_state(state);
    std::optional<std::string> altstate;
    if (addr && is_digit_token(*addr)) altstate = action + ".M";

    std::vector<std::string> classes{symbol};
    if (is_digit_token(symbol)) {
        classes.push_back("M");
        classes.push_back("D");
    } else if (is_circled_token(symbol)) {
        classes.push_back("(M)");
        classes.push_back("(D)");
    }
    classes.push_back("*");

    for (const auto& s : classes) {
        std::optional<int> m, d;
        const Rule* r = spec.find(state, s);
        if (!r && altstate) {
            r = spec.find(*altstate, s);
            if (!r) continue;
            if (s == "M" && *addr != symbol) continue;
            m = (*addr)[0] - '0';
        }
        if (!r) continue;

        if (s == "M" && is_digit_token(symbol)) m = symbol[0] - '0';
        else if (s == "(M)" && is_circled_token(symbol)) m = circled_value(symbol);
        else if (s == "D" && is_digit_token(symbol)) d = symbol[0] - '0';
        else if (s == "(D)" && is_circled_token(symbol)) d = circled_value(symbol);

        std::string next = r->next;
        std::string out = r->write;
        if (ends_with(next, ".M") && m) next = replace_suffix(next, "M", std::to_string(*m));
        if (ends_with(next, ".B") && out == "(D)-(M)" && d && m) {
            int n = (10 + *d - *m) % 10;
            int borrow = *d - *m < 0 ? 1 : 0;
            return {replace_suffix(next, "B", std::to_string(borrow)), circled(n), r->move};
        }
        if (out == "(M)" && m) out = circled(*m);
        else if (out == "D" && d) out = std::to_string(*d);
        else if (out == "D-1" && d) out = std::to_string(*d - 1);
        else if (out == "(D)" && d) out = circled(*d);
        else if (out == "*") out = symbol;
        return {next, out, r->move};
    }
    return reject_triple(spec, -1);
}

Transition resolve_sat_fixed(const MachineSpec& spec, const std::string& state, const std::string& symbol) {
    auto [action, sub] = split_state(state);
    std::optional<std::string> altstate;
    if (sub) {
        if (is_digit_token(*sub)) altstate = action + ".D";
        else if (is_truth(*sub)) altstate = action + ".B";
        else altstate = action + ".S";
    }

    std::vector<std::string> classes{symbol};
    if (is_digit_token(symbol)) classes.push_back("D");
    else if (is_truth(symbol)) classes.push_back("B");
    classes.push_back("*");

    for (const auto& s : classes) {
        const Rule* r = spec.find(state, s);
        std::string next, out;
        if (r) {
            next = r->next;
            out = r->write;
        } else if (altstate && (r = spec.find(*altstate, s))) {
            next = r->next;
            out = r->write;
            if (ends_with(next, ".S")) next = replace_suffix(next, "S", *sub);
            if (ends_with(next, ".B") && out == "B" && is_truth(*sub)) out = *sub;
        } else {
            continue;
        }
        // The truth parameter travels with the state once bound; it is taken
        // from the read symbol only when the current state carries none.
        if (ends_with(next, ".B")) {
            if (sub && is_truth(*sub)) next = replace_suffix(next, "B", *sub);
            else if (is_truth(symbol)) next = replace_suffix(next, "B", symbol);
        }
        if (out == "D" && is_digit_token(symbol)) out = symbol;
        else if (out == "D-1" && is_digit_token(symbol)) out = std::to_string(symbol[0] - '0' - 1);
        else if (out == "*") out = symbol;
        return {next, out, r->move};
    }
    return reject_triple(spec, -1);
}

Transition resolve_sat_id(const MachineSpec& spec, const std::string& state, const std::string& symbol) {
    auto [action, addr] = split_state(state);
    std::optional<std::string> altstate;
    if (addr) altstate = action + ".N";

    std::vector<std::string> classes{symbol};
    if (is_digit_token(symbol)) classes.push_back("D");
    classes.push_back("*");

    for (const auto& s : classes) {
        const Rule* r = spec.find(state, s);
        if (!r && altstate) r = spec.find(*altstate, s);
        if (!r) continue;

        std::string next = r->next;
        if (ends_with(next, ".D") && is_digit_token(symbol)) next = replace_suffix(next, "D", symbol);
        bool numeric = addr && is_integer(*addr);
        if (ends_with(next, ".N") && addr) {
            next = replace_suffix(next, "N", *addr);
        } else if (ends_with(next, ".(N-1)") && numeric) {
            next = replace_suffix(next, "(N-1)", std::to_string(std::stol(*addr) - 1));
        } else if (ends_with(next, ".(10N+D)") && numeric && is_digit_token(symbol)) {
            next = replace_suffix(next, "(10N+D)", std::to_string(std::stol(*addr) * 10 + (symbol[0] - '0')));
        }
        if (!spec.declared_states.count(next)) return reject_triple(spec, +1);

        std::string out = r->write == "*" ? symbol : r->write;
        return {next, out, r->move};
    }
    return reject_triple(spec, -1);
}

}  // namespace

Transition resolve_transition(const MachineSpec& spec, const std::string& state, const std::string& symbol) {
    switch (spec.variant) {
    case Variant::sat_id: return resolve_sat_id(spec, state, symbol);
    case Variant::sat_fixed: return resolve_sat_fixed(spec, state, symbol);
    case Variant::subset_sum: return resolve_subset_sum(spec, state, symbol);
    }
    return reject_triple(spec, -1);
}

Machine::Machine(MachineSpec spec) : spec_(std::move(spec)) {
    symbols_ = spec_.alphabet;
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
    for (std::size_t i = 0; i < symbols_.size(); ++i) symbol_ids_[symbols_[i]] = static_cast<std::uint16_t>(i);
    if (!symbol_ids_.count(kBlank)) throw std::logic_error("alphabet lacks the blank symbol");

    // Discover reachable states by closing over every (state, symbol) pair.
    std::set<std::string> seen{spec_.q_init, spec_.q_acc, spec_.q_rej};
    std::deque<std::string> queue{spec_.q_init};
    std::map<std::pair<std::string, std::string>, Transition> resolved;
    while (!queue.empty()) {
        std::string q = queue.front();
        queue.pop_front();
        if (q == spec_.q_acc || q == spec_.q_rej) continue;
        for (const auto& a : symbols_) {
            Transition t = resolve_transition(spec_, q, a);
            if (!symbol_ids_.count(t.write))
                throw std::logic_error("transition " + q + "/" + a + " writes unknown symbol " + t.write);
            if (seen.insert(t.next).second) queue.push_back(t.next);
            resolved[{q, a}] = t;
        }
    }
    states_.assign(seen.begin(), seen.end());
    if (states_.size() > 0xffff) throw std::logic_error("too many states");
    for (std::size_t i = 0; i < states_.size(); ++i) state_ids_[states_[i]] = static_cast<std::uint16_t>(i);

    init = state_ids_.at(spec_.q_init);
    acc = state_ids_.at(spec_.q_acc);
    rej = state_ids_.at(spec_.q_rej);
    blank = symbol_ids_.at(kBlank);

    table_.assign(states_.size() * symbols_.size(), Step{rej, blank, -1});
    for (const auto& [key, t] : resolved) {
        auto& s = table_[state_ids_.at(key.first) * symbols_.size() + symbol_ids_.at(key.second)];
        s.next = state_ids_.at(t.next);
        s.write = symbol_ids_.at(t.write);
        s.move = static_cast<std::int8_t>(t.move);
    }
}

std::optional<std::uint16_t> Machine::find_state(const std::string& name) const {
    auto it = state_ids_.find(name);
    if (it == state_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint16_t> Machine::find_symbol(const std::string& name) const {
    auto it = symbol_ids_.find(name);
    if (it == symbol_ids_.end()) return std::nullopt;
    return it->second;
}

std::uint16_t Machine::state_id(const std::string& name) const {
    auto id = find_state(name);
    if (!id) throw std::invalid_argument("unknown state " + name);
    return *id;
}

std::uint16_t Machine::symbol_id(const std::string& name) const {
    auto id = find_symbol(name);
    if (!id) throw std::invalid_argument("unknown symbol " + name);
    return *id;
}

std::uint16_t Configuration::read(long cell, std::uint16_t blank_id) const {
    auto it = tape.find(cell);
    return it == tape.end() ? blank_id : it->second;
}

void step(const Machine& m, Configuration& c) {
    std::uint16_t a = c.read(c.head, m.blank);
    const auto& s = m.step(c.state, a);
    if (s.write == m.blank) c.tape.erase(c.head);
    else c.tape[c.head] = s.write;
    c.head += s.move;
    c.state = s.next;
    ++c.steps;
}

const char* decision_name(Decision d) {
    switch (d) {
    case Decision::accept: return "accept";
    case Decision::reject: return "reject";
    case Decision::step_limit: return "step-limit";
    }
    return "?";
}

std::size_t default_max_steps(std::size_t tape_len) {
    std::size_t n = std::max<std::size_t>(tape_len, 1);
    return 64 * n * n;
}

RunResult run_direct(const Machine& m, const std::vector<std::string>& tape, std::size_t max_steps,
                     bool keep_trace) {
    RunResult res;
    Configuration& c = res.final_config;
    c.state = m.init;
    for (std::size_t i = 0; i < tape.size(); ++i) {
        std::uint16_t id = m.symbol_id(tape[i]);
        if (id != m.blank) c.tape[static_cast<long>(i)] = id;
    }
    while (!m.halting(c.state)) {
        if (c.steps >= max_steps) {
            res.decision = Decision::step_limit;
            return res;
        }
        if (keep_trace) {
            std::uint16_t a = c.read(c.head, m.blank);
            const auto& s = m.step(c.state, a);
            res.trace.push_back({c.state, c.head, a, s.write, s.move});
        }
        step(m, c);
    }
    res.decision = c.state == m.acc ? Decision::accept : Decision::reject;
    return res;
}

}  // namespace npsim
