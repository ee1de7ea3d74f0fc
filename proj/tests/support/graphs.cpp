#include "graphs.hpp"

#include <deque>
#include <map>

#include "npsim/oracle.hpp"

namespace npsim::testing {

std::vector<Edge> TraceGraph::accepting_finals() const {
    std::vector<Edge> out;
    for (const auto& tr : traces)
        if (tr.decision == Decision::accept && !tr.edges.empty()) out.push_back(tr.edges.back());
    return out;
}

EmbeddedTrace embed_trace(TraceGraph& tg, const ProblemInstance& inst, const std::string& cert) {
    const Machine& m = *tg.machine;
    NodeTable& t = *tg.table;
    EncodedTape tape = encode_instance(inst, cert);
    RunResult rr = run_direct(m, tape.tokens, default_max_steps(tape.tokens.size()));

    EmbeddedTrace tr;
    tr.cert = cert;
    tr.decision = rr.decision;
    std::map<long, std::vector<CaseKey>> visits;
    auto visit = [&](long cell, std::uint16_t state, std::uint16_t symbol) {
        auto& seen = visits[cell];
        std::optional<CaseKey> ipred;
        if (!seen.empty()) ipred = seen.back();
        const int tier = static_cast<int>(seen.size());
        NodeId n = *t.materialize(cell, tier, state, symbol, ipred);
        seen.push_back(CaseKey{cell, tier, state, symbol});
        if (!tr.nodes.empty()) tr.edges.push_back(Edge{tr.nodes.back(), n});
        tr.nodes.push_back(n);
    };
    for (const auto& s : rr.trace) visit(s.head, s.state, s.read);
    visit(rr.final_config.head, rr.final_config.state, rr.final_config.read(rr.final_config.head, m.blank));
    return tr;
}

std::unique_ptr<TraceGraph> embed_traces(Variant v, const ProblemInstance& inst, const std::vector<std::string>& certs,
                                         bool sanitize) {
    auto tg = std::make_unique<TraceGraph>();
    tg->name = std::string(variant_name(v)) + " " + render_instance(inst);
    tg->machine = std::make_unique<Machine>(build_machine(v, inst, sanitize));
    tg->table = std::make_unique<NodeTable>(*tg->machine, encode_instance(inst), certificate_schema(inst));
    tg->graph = std::make_unique<DynamicGraph>(tg->table.get());
    tg->v0 = {tg->table->initial_node()};
    for (const auto& c : certs) {
        EmbeddedTrace tr = embed_trace(*tg, inst, c);
        for (const auto& e : tr.edges) tg->graph->add_edge(e);
        tg->traces.push_back(std::move(tr));
    }
    return tg;
}

namespace {

std::unique_ptr<TraceGraph> bounded_union(Variant v, const ProblemInstance& inst, const std::vector<std::string>& certs,
                                          std::size_t max_edges) {
    auto tg = embed_traces(v, inst, {});
    for (const auto& c : certs) {
        EmbeddedTrace tr = embed_trace(*tg, inst, c);
        std::size_t fresh = 0;
        for (const auto& e : tr.edges) fresh += !tg->graph->has_edge(e);
        if (tg->graph->edge_count() + fresh > max_edges) continue;
        for (const auto& e : tr.edges) tg->graph->add_edge(e);
        tg->traces.push_back(std::move(tr));
    }
    if (tg->traces.empty()) return nullptr;
    return tg;
}

}  // namespace

std::vector<std::unique_ptr<TraceGraph>> trace_fixtures(std::size_t max_edges) {
    std::vector<std::unique_ptr<TraceGraph>> out;
    const char* sat[] = {"1_#", "-1_#", "1&-1_#", "1_2&-1_#", "1_-2&2_#", "-1_-2&1_#", "2&1_-2_#"};
    for (const char* text : sat) {
        ProblemInstance inst = parse_instance(Problem::sat, text);
        auto certs = enumerate_certificates(certificate_schema(inst), 64);
        for (auto v : {Variant::sat_id, Variant::sat_fixed})
            if (auto tg = bounded_union(v, inst, certs, max_edges)) out.push_back(std::move(tg));
    }
    const char* ss[] = {"3_@_3#", "2_@_1#", "0_@_5#", "4_@_1_3#", "5_@_2_3#"};
    for (const char* text : ss) {
        ProblemInstance inst = parse_instance(Problem::subset_sum, text);
        std::vector<std::string> certs;
        if (auto w = analytic_oracle(inst).witness) certs.push_back(*w);
        for (auto& c : enumerate_certificates(certificate_schema(inst), 40)) certs.push_back(std::move(c));
        if (auto tg = bounded_union(Variant::subset_sum, inst, certs, max_edges)) out.push_back(std::move(tg));
    }
    return out;
}

bool step_pendant(const DynamicGraph& h, const Edge& e, const CoverIndexMap& c, const std::vector<NodeId>& v0,
                  const EdgeSet& ef) {
    const NodeTable& t = h.table();
    if (h.isucc(e).empty() && !c.contains(e)) return true;
    if (t.tier(e.head) > 0 && h.iprec(e).empty()) return true;
    if (h.next(e).empty() && !ef.count(e)) return true;
    bool initial = false;
    for (NodeId v : v0) initial |= v == e.tail;
    return h.prev(e).empty() && !initial;
}

EdgeSet msec_fixpoint(const DynamicGraph& g, const CoverIndexMap& c, const std::vector<NodeId>& v0,
                      const EdgeSet& ef, const EdgeSet& seed) {
    std::unordered_map<Edge, std::vector<Edge>, EdgeHash> adjacent;
    for (const auto& e : g.edges()) {
        auto& a = adjacent[e];
        for (auto rel : {g.prev(e), g.next(e), g.isucc(e), g.iprec(e)}) a.insert(a.end(), rel.begin(), rel.end());
    }
    EdgeSet comp;
    DynamicGraph rest = copy_graph(g);
    for (const auto& e : seed)
        if (g.has_edge(e)) {
            comp.insert(e);
            rest.remove_edge(e);
        }
    for (;;) {
        std::vector<Edge> grow;
        for (const auto& e : rest.edges()) {
            bool touches = false;
            for (const auto& f : adjacent[e]) touches |= comp.count(f) != 0;
            if (touches && step_pendant(rest, e, c, v0, ef)) grow.push_back(e);
        }
        if (grow.empty()) break;
        for (const auto& e : grow) {
            comp.insert(e);
            rest.remove_edge(e);
        }
    }
    return comp;
}

namespace {

DynamicGraph reachable(const DynamicGraph& g, const std::vector<NodeId>& v0) {
    DynamicGraph r(&g.table());
    std::deque<Edge> q;
    for (NodeId v : v0)
        if (g.has_node(v))
            for (const auto& e : g.outgoing(v)) q.push_back(e);
    while (!q.empty()) {
        Edge e = q.front();
        q.pop_front();
        if (!r.add_edge(e)) continue;
        for (const auto& f : g.next(e)) q.push_back(f);
        for (const auto& f : g.prev(e)) q.push_back(f);
    }
    return r;
}

std::string edge_list(const NodeTable& t, const std::vector<Edge>& es) {
    std::string s;
    for (std::size_t i = 0; i < es.size() && i < 4; ++i) s += " [" + t.describe(es[i]) + "]";
    if (es.size() > 4) s += " ...";
    return s;
}

void check_case(const std::string& label, const DynamicGraph& g, const std::vector<NodeId>& v0,
                const std::vector<Edge>& ef, const std::vector<Edge>& seed, SuiteReport& rep) {
    const NodeTable& t = g.table();
    ++rep.cases;
    FeasibleGraph fg = compute_feasible_graph(g, v0, ef, seed);
    EdgeSet efs(ef.begin(), ef.end());

    // (a) nothing step-pendant survives outside the exemptions
    std::vector<Edge> residual;
    for (const auto& e : fg.graph.edges())
        if (step_pendant(fg.graph, e, fg.cover, v0, efs)) residual.push_back(e);
    if (!residual.empty())
        rep.failures.push_back(label + ": step-pendant edges survive:" + edge_list(t, residual));

    // (c) removed set against the recursive closure on the reachable part
    DynamicGraph reach = reachable(g, v0);
    EdgeSet er;
    for (const auto& e : reach.edges())
        if (step_pendant(reach, e, fg.cover, v0, efs)) er.insert(e);
    for (const auto& e : seed)
        if (reach.has_edge(e)) er.insert(e);
    EdgeSet msec = msec_fixpoint(reach, fg.cover, v0, efs, er);
    bool ef_survives = false;
    for (const auto& e : ef) ef_survives |= reach.has_edge(e) && !msec.count(e);

    if (!ef_survives) {
        if (!fg.empty()) rep.failures.push_back(label + ": expected the empty graph");
        return;
    }
    std::vector<Edge> missing, extra;
    for (const auto& e : reach.edges()) {
        const bool kept = fg.graph.has_edge(e);
        if (msec.count(e) && kept) extra.push_back(e);
        if (!msec.count(e) && !kept) missing.push_back(e);
    }
    for (const auto& e : fg.graph.edges())
        if (!reach.has_edge(e)) extra.push_back(e);
    if (!missing.empty()) rep.failures.push_back(label + ": removed outside the closure:" + edge_list(t, missing));
    if (!extra.empty()) rep.failures.push_back(label + ": closure edges kept:" + edge_list(t, extra));
    EdgeSet removed(fg.removed.begin(), fg.removed.end());
    if (removed != msec) rep.failures.push_back(label + ": removed list differs from the closure");
}

void check_graph(const std::string& name, const DynamicGraph& g, const TraceGraph& tg, SuiteReport& rep) {
    const auto finals = tg.accepting_finals();

    // (d)
    ++rep.cases;
    if (!compute_feasible_graph(g, tg.v0, {}).empty()) rep.failures.push_back(name + ": Ef empty but graph kept");

    // (b) every accepting walk survives toward its own final edge
    for (const auto& tr : tg.traces) {
        if (tr.decision != Decision::accept) continue;
        bool present = true;
        for (const auto& e : tr.edges) present &= g.has_edge(e);
        if (!present) continue;
        ++rep.cases;
        FeasibleGraph fg = compute_feasible_graph(g, tg.v0, {tr.edges.back()});
        std::vector<Edge> lost;
        for (const auto& e : tr.edges)
            if (!fg.graph.has_edge(e)) lost.push_back(e);
        if (!lost.empty())
            rep.failures.push_back(name + " cert " + tr.cert + ": walk edges lost:" + edge_list(g.table(), lost));
    }

    std::vector<std::vector<Edge>> ef_choices;
    if (!finals.empty()) ef_choices.push_back(finals);
    for (const auto& f : finals) ef_choices.push_back({f});
    std::vector<Edge> halting;
    for (const auto& tr : tg.traces)
        if (!tr.edges.empty()) halting.push_back(tr.edges.back());
    ef_choices.push_back(halting);

    const auto edges = g.edges();
    for (std::size_t k = 0; k < ef_choices.size(); ++k) {
        std::vector<Edge> ef;
        for (const auto& e : ef_choices[k])
            if (g.has_edge(e) && std::find(ef.begin(), ef.end(), e) == ef.end()) ef.push_back(e);
        if (ef.empty()) continue;
        const std::string label = name + " ef#" + std::to_string(k);
        check_case(label, g, tg.v0, ef, {}, rep);
        for (std::size_t j = 1; j < 4 && !edges.empty(); ++j)
            check_case(label + " seed#" + std::to_string(j), g, tg.v0, ef, {edges[j * edges.size() / 4]}, rep);
    }
}

}  // namespace

SuiteReport feasible_invariant_suite(std::size_t max_edges) {
    SuiteReport rep;
    for (const auto& tg : trace_fixtures(max_edges)) {
        check_graph(tg->name, *tg->graph, *tg, rep);
        const auto edges = tg->graph->edges();
        for (std::size_t j = 1; j < 3; ++j) {
            DynamicGraph cut = copy_graph(*tg->graph);
            cut.remove_edge(edges[j * edges.size() / 3]);
            check_graph(tg->name + " cut#" + std::to_string(j), cut, *tg, rep);
        }
    }
    return rep;
}

}  // namespace npsim::testing
