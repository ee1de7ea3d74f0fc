#pragma once

#include <map>
#include <vector>

#include "npsim/graph.hpp"

namespace npsim {

struct CoverIndexMap {
    std::map<long, std::vector<Edge>> by_index;
    EdgeSet all;

    bool contains(const Edge& e) const { return all.count(e) != 0; }
    bool insert(const NodeTable& t, const Edge& e) {
        if (!all.insert(e).second) return false;
        by_index[t.edge_index(e)].push_back(e);
        return true;
    }
    std::size_t size() const { return all.size(); }
};

struct Walk {
    std::vector<Edge> edges;
    bool empty() const { return edges.empty(); }
    bool contains(const Edge& e) const;
};

// Edges f that are weakly ceiling-adjacent to e toward `ef`.
std::vector<Edge> weak_ceiling_adjacent_edges(const DynamicGraph& g, const Edge& e, const EdgeSet& ef);

CoverIndexMap compute_cover_edges(const DynamicGraph& g, const std::vector<Edge>& ef);

struct PendantScan {
    std::vector<Edge> er;
    DynamicGraph h;
};

PendantScan step_pendant_edges_with_reachable_graph(const DynamicGraph& g, const CoverIndexMap& c,
                                                    const std::vector<NodeId>& v0, const std::vector<Edge>& ef);

struct FeasibleGraph {
    DynamicGraph graph;
    std::vector<NodeId> v0;
    std::vector<Edge> ef;
    CoverIndexMap cover;
    // Edges of the reachable subgraph removed by the elimination, in order.
    std::vector<Edge> removed;

    bool empty() const { return graph.empty(); }
};

FeasibleGraph compute_feasible_graph(const DynamicGraph& g, const std::vector<NodeId>& v0,
                                     const std::vector<Edge>& ef, const std::vector<Edge>& removal_seed = {});

Edge find_first_merging_edge_or_final_edge(const DynamicGraph& g, const Walk& w);

// Adds to g the first out-of-g edge of every walk of gu that leaves g above
// a precedent present in g; returns the added edges.
std::vector<Edge> add_final_edges_of_obsolete_walks(const DynamicGraph& gu, DynamicGraph& g,
                                                    const std::vector<NodeId>& v0);

DynamicGraph prune_walk(const DynamicGraph& gu, const DynamicGraph& g, const std::vector<NodeId>& v0,
                        const std::vector<Edge>& ef, const Walk& w, bool preserve_obsolete);

}  // namespace npsim
