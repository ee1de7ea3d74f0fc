#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lemmas.hpp"
#include "npsim/feasible.hpp"

namespace npsim::testing {

struct EmbeddedTrace {
    std::string cert;
    Decision decision = Decision::step_limit;
    // Configuration nodes in run order; edges[i] = (nodes[i], nodes[i+1]).
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
};

// Union of the direct runs of one machine on one instance, one run per
// certificate, laid over a shared node table.
struct TraceGraph {
    std::string name;
    std::unique_ptr<Machine> machine;
    std::unique_ptr<NodeTable> table;
    std::unique_ptr<DynamicGraph> graph;
    std::vector<NodeId> v0;
    std::vector<EmbeddedTrace> traces;

    std::vector<Edge> accepting_finals() const;
};

std::unique_ptr<TraceGraph> embed_traces(Variant v, const ProblemInstance& inst, const std::vector<std::string>& certs,
                                         bool sanitize = false);

// Adds one trace to an existing trace graph.
EmbeddedTrace embed_trace(TraceGraph& tg, const ProblemInstance& inst, const std::string& cert);

// Deterministic fixture family: trace unions of tiny instances for every
// machine, each at most `max_edges` edges.
std::vector<std::unique_ptr<TraceGraph>> trace_fixtures(std::size_t max_edges = 300);

// Step-pendant test straight from the definition, against graph h.
bool step_pendant(const DynamicGraph& h, const Edge& e, const CoverIndexMap& c, const std::vector<NodeId>& v0,
                  const EdgeSet& ef);

// Maximal step-extended component of `seed` inside `g`, by the recursive
// closure of its definition.
EdgeSet msec_fixpoint(const DynamicGraph& g, const CoverIndexMap& c, const std::vector<NodeId>& v0,
                      const EdgeSet& ef, const EdgeSet& seed);

// The four feasible-graph invariants over every fixture graph; hand-built
// variants drop single edges from each trace union.
SuiteReport feasible_invariant_suite(std::size_t max_edges = 300);

}  // namespace npsim::testing
