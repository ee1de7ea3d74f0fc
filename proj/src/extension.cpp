#include "npsim/extension.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <unordered_map>

namespace npsim {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::accept: return "accept";
        case Outcome::reject: return "reject";
        case Outcome::budget: return "budget";
    }
    return "?";
}

std::string format_metrics(const RunMetrics& m, bool with_elapsed) {
    char avg[64];
    std::snprintf(avg, sizeof avg, "%.2f", m.avg_walk_len);
    std::string s;
    auto kv = [&](const char* k, const std::string& v) { s += std::string(k) + "=" + v + "\n"; };
    kv("tape_len", std::to_string(m.tape_len));
    kv("cert_len", std::to_string(m.cert_len));
    kv("total_edges", std::to_string(m.total_edges));
    kv("direct_ext", std::to_string(m.direct_ext));
    kv("verified_ext", std::to_string(m.verified_ext));
    kv("candidates_verified", std::to_string(m.candidates_verified));
    kv("disjoint_edges", std::to_string(m.disjoint_edges));
    kv("pruned_walks", std::to_string(m.pruned_walks));
    kv("halting_edges", std::to_string(m.halting_edges));
    kv("max_walks", std::to_string(m.max_walks));
    kv("avg_walk_len", avg);
    kv("decision", outcome_name(m.decision));
    kv("witness", m.witness);
    if (with_elapsed) {
        char el[64];
        std::snprintf(el, sizeof el, "%.3f", m.elapsed);
        kv("elapsed", el);
    }
    return s;
}

void ExtensionQueue::add(const ExtensionPair& p) {
    std::array<std::uint32_t, 5> k{p.ep ? 1u : 0u, p.ep ? p.ep->tail : 0u, p.ep ? p.ep->head : 0u, p.e.tail,
                                   p.e.head};
    if (seen_.insert(k).second) items_.push_back(p);
}

Walk take_arbitrary_walk(const DynamicGraph& g, const std::vector<NodeId>& v0) {
    const NodeTable& t = g.table();
    Walk w;
    std::optional<Edge> e;
    for (NodeId v : v0) {
        const auto& out = g.out(v);
        if (!out.empty()) {
            e = Edge{v, out.front()};
            break;
        }
    }
    std::unordered_map<long, CaseKey> surface;
    while (e) {
        surface[t.index(e->tail)] = t.case_of(e->tail);
        w.edges.push_back(*e);
        std::optional<Edge> nx;
        for (NodeId x : g.out(e->head)) {
            auto it = surface.find(t.index(x));
            bool ok = t.tier(x) == 0 ? it == surface.end()
                                     : it != surface.end() && t.ipred_case(x) == it->second;
            if (ok) {
                nx = Edge{e->head, x};
                break;
            }
        }
        e = nx;
    }
    return w;
}

std::pair<std::optional<Edge>, Walk> find_feasible_or_disjoint_edge(const DynamicGraph& gu,
                                                                    const std::vector<NodeId>& v0,
                                                                    const Edge& ef, Counters* counters) {
    DynamicGraph g = copy_graph(gu);
    const std::vector<Edge> efs{ef};
    EdgeSet r;
    while (!g.empty()) {
        Walk w = take_arbitrary_walk(g, v0);
        if (w.empty()) break;
        if (w.contains(ef)) return {ef, w};
        if (!r.empty()) {
            for (const auto& e : w.edges)
                if (!r.count(e)) return {e, w};
            return {std::nullopt, w};
        }
        DynamicGraph h = prune_walk(gu, g, v0, efs, w, false);
        if (counters) ++counters->pruned_walks;
        if (h.empty()) {
            r.insert(w.edges.begin(), w.edges.end());
            g = prune_walk(gu, g, v0, efs, w, true);
            if (counters) ++counters->pruned_walks;
        } else {
            g = std::move(h);
        }
    }
    return {std::nullopt, Walk{}};
}

std::optional<Walk> verify_existence_of_walk(const DynamicGraph& g, const std::vector<NodeId>& v0, const Edge& ef,
                                             Counters* counters) {
    const std::vector<Edge> efs{ef};
    DynamicGraph cur = compute_feasible_graph(g, v0, efs).graph;
    while (cur.has_edge(ef)) {
        auto [e, w] = find_feasible_or_disjoint_edge(cur, v0, ef, counters);
        if (!e) return std::nullopt;
        if (*e == ef) return w;
        cur.remove_edge(*e);
        if (counters) ++counters->disjoint_edges;
        cur = compute_feasible_graph(cur, v0, efs).graph;
    }
    return std::nullopt;
}

void add_extendable_edge_on_ceiling_edges(const DynamicGraph& h, const Surface& s, ExtensionQueue& ev) {
    const NodeTable& t = h.table();
    for (const auto& [idx, e] : s) {
        if (!h.has_edge(e)) continue;
        if (!(h.merging(e) || h.combining(e) || h.pseudo_combining(e))) continue;
        std::unordered_set<NodeId> visited;
        std::deque<NodeId> q;
        for (NodeId w : h.isucc_nodes(e.head)) q.push_back(w);
        while (!q.empty()) {
            NodeId w = q.front();
            q.pop_front();
            if (!visited.insert(w).second) continue;
            if (h.folding(w)) {
                for (NodeId x : h.isucc_nodes(w)) q.push_back(x);
            } else if (t.next_index(w) == t.index(e.tail)) {
                std::vector<MaybeEdge> cands;
                for (const auto& f : h.incoming(w)) cands.push_back(f);
                for (const auto& c : filter_with_path(h, e, cands, PathDirection::forward)) ev.add({e, *c});
            }
        }
    }
}

std::vector<Edge> collect_restricted_boundary_edges(NodeTable& g, const DynamicGraph& h, const ExtensionQueue& ev) {
    std::vector<Edge> q;
    EdgeSet seen;
    for (const auto& [ep, e] : ev.items()) {
        const NodeId u = e.tail, v = e.head;
        if (g.halting(v) || g.index(u) == g.next_index(v)) continue;
        std::vector<MaybeEdge> eps;
        if (!ep) {
            auto cands = filter_with_path(h, e, get_forward_weak_ceiling_adjacent_edges(h, e),
                                          PathDirection::backward);
            for (const auto& c : cands)
                if (!c || g.index(c->tail) == g.next_index(v)) eps.push_back(c);
        } else {
            eps.push_back(ep);
        }
        for (const auto& x : get_next_edges_above_ipreds(g, v, eps))
            if (!h.has_edge(x) && seen.insert(x).second) q.push_back(x);
    }
    return q;
}

std::string witness_string(const NodeTable& t, const WitnessArray& r) {
    const auto& schema = t.schema();
    const Machine& m = t.machine();
    std::string s;
    for (std::size_t pos = 0; pos < schema.max_length; ++pos) {
        auto it = r.find(schema.region_start + static_cast<long>(pos));
        if (schema.kind == Problem::sat) {
            s += it == r.end() ? "T" : m.symbol_name(it->second);
            continue;
        }
        if (it == r.end() || it->second == m.blank) break;
        const std::string& name = m.symbol_name(it->second);
        s += name;
        if (schema.terminator && name == *schema.terminator) break;
    }
    return s;
}

Simulator::Simulator(const Machine& m, EncodedTape tape, CertificateSchema schema, Limits limits)
    : table_(m, std::move(tape), std::move(schema)), h_(&table_), limits_(limits) {}

void Simulator::record(WitnessArray& r, const Edge& e) const {
    if (table_.tier(e.head) == 0 && table_.schema().in_region(table_.index(e.head)))
        r[table_.index(e.head)] = table_.symbol(e.head);
}

std::optional<WitnessArray> Simulator::extend_edge_directly_with_walk(const Walk& w, ExtensionQueue& ev) {
    if (w.empty()) return std::nullopt;
    struct Frame {
        Edge e;
        Surface s;
        WitnessArray r;
        std::size_t depth;
        bool verified;
    };
    Surface s;
    WitnessArray r;
    std::size_t k = 0;
    for (; k < w.edges.size(); ++k) {
        const Edge& e = w.edges[k];
        if (!h_.has_edge(e)) break;
        s[table_.edge_index(e)] = e;
        record(r, e);
    }
    const std::size_t at = std::min(k, w.edges.size() - 1);
    std::vector<Frame> stack;
    stack.push_back({w.edges[at], std::move(s), std::move(r), 1, true});

    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (h_.has_edge(f.e)) continue;
        Edge e = f.e;
        bool first = f.verified;
        bool dead = false;
        NodeId v = e.head;
        while (true) {
            const bool is_new = h_.add_edge(e);
            if (is_new) {
                ++(first ? verified_ext_ : direct_ext_);
                if (limits_.max_edges && h_.edge_count() > limits_.max_edges)
                    throw BudgetExceeded{"edge budget exceeded"};
            }
            first = false;
            f.s[table_.edge_index(e)] = e;
            record(f.r, e);
            if (is_new && h_.merging(e)) add_extendable_edge_on_ceiling_edges(h_, f.s, ev);

            v = e.head;
            if (table_.halting(v)) {
                if (is_new) {
                    ++halting_edges_;
                    walk_lengths_.push_back(f.depth);
                    if (table_.rejecting(v)) rejected_.push_back(witness_string(table_, f.r));
                }
                break;
            }

            MaybeEdge ep;
            auto it = f.s.find(std::min(table_.index(v), table_.next_index(v)));
            if (it != f.s.end()) ep = it->second;
            if (is_new && ep && (h_.merging(*ep) || h_.combining(*ep) || h_.pseudo_combining(*ep)))
                ev.add({std::nullopt, e});

            auto en = get_next_edges_above_ipreds(table_, v, {ep});
            if (en.empty()) {
                dead = true;
                break;
            }
            e = en.front();
            for (std::size_t i = 1; i < en.size(); ++i)
                if (!h_.has_edge(en[i])) stack.push_back({en[i], f.s, f.r, 1, false});
            ++f.depth;
            if (limits_.max_steps && f.depth > limits_.max_steps) throw BudgetExceeded{"step budget exceeded"};
        }
        if (!dead && table_.accepting(v)) return f.r;
    }
    return std::nullopt;
}

std::optional<WitnessArray> Simulator::extend_by_verifiable_edges(const std::vector<Edge>& q, ExtensionQueue& ev) {
    for (const auto& e : q) {
        if (h_.has_edge(e)) continue;
        ++counters_.candidates_verified;
        DynamicGraph g = copy_graph(h_);
        g.add_edge(e);
        auto w = verify_existence_of_walk(g, v0_, e, &counters_);
        if (!w) continue;
        if (auto r = extend_edge_directly_with_walk(*w, ev)) return r;
    }
    return std::nullopt;
}

SimulationResult Simulator::run() {
    auto t0 = std::chrono::steady_clock::now();
    SimulationResult res;
    v0_ = {table_.initial_node()};
    std::vector<Edge> q;
    for (NodeId v : v0_)
        for (const auto& e : get_floor_next_edges(table_, v)) q.push_back(e);

    ExtensionQueue ev;
    res.outcome = Outcome::reject;
    try {
        while (!q.empty()) {
            ev.clear();
            if (auto r = extend_by_verifiable_edges(q, ev)) {
                res.outcome = Outcome::accept;
                res.witness = witness_string(table_, *r);
                break;
            }
            if (ev.empty()) break;
            q = collect_restricted_boundary_edges(table_, h_, ev);
        }
    } catch (const BudgetExceeded& b) {
        res.outcome = Outcome::budget;
        res.budget_reason = b.reason;
    }

    RunMetrics& m = res.metrics;
    m.tape_len = table_.tape().instance_len;
    m.cert_len = table_.schema().max_length;
    m.total_edges = h_.edge_count();
    m.direct_ext = direct_ext_;
    m.verified_ext = verified_ext_;
    m.candidates_verified = counters_.candidates_verified;
    m.disjoint_edges = counters_.disjoint_edges;
    m.pruned_walks = counters_.pruned_walks;
    m.halting_edges = halting_edges_;
    m.max_walks = walk_lengths_.size();
    if (!walk_lengths_.empty()) {
        double sum = 0;
        for (auto l : walk_lengths_) sum += static_cast<double>(l);
        m.avg_walk_len = sum / static_cast<double>(walk_lengths_.size());
    }
    m.decision = res.outcome;
    if (res.witness) m.witness = *res.witness;
    res.rejected_witnesses = rejected_;
    m.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

SimulationResult simulate(Variant variant, const ProblemInstance& inst, const SimulationOptions& opts) {
    Machine m(build_machine(variant, inst, opts.sanitize));
    EncodedTape tape = encode_instance(inst);
    CertificateSchema schema = certificate_schema(inst);
    const std::size_t n = tape.instance_len + tape.cert_len;
    Limits limits;
    limits.max_steps = opts.max_steps.value_or(default_max_steps(n));
    limits.max_edges = 16 * n * n * n;
    Simulator sim(m, std::move(tape), std::move(schema), limits);
    SimulationResult r = sim.run();
    if (opts.keep_graph) r.graph_dump = sim.footmarks().dump();
    return r;
}

const std::vector<std::string>& collect_rejected_witnesses(const SimulationResult& r) { return r.rejected_witnesses; }

}  // namespace npsim
