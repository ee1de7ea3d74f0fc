#include "npsim/feasible.hpp"

#include <algorithm>
#include <deque>

namespace npsim {

bool Walk::contains(const Edge& e) const { return std::find(edges.begin(), edges.end(), e) != edges.end(); }

std::vector<Edge> weak_ceiling_adjacent_edges(const DynamicGraph& g, const Edge& e, const EdgeSet& ef) {
    const NodeTable& t = g.table();
    std::vector<Edge> out;
    EdgeSet seen;
    auto add = [&](const Edge& f) {
        if (!(f == e) && seen.insert(f).second) out.push_back(f);
    };

    const long want = t.edge_index(e) - t.dir(e);
    for (const auto& f : g.prev(e))
        if (t.edge_index(f) == want) add(f);

    std::vector<NodeId> starts;
    if (g.folding(e.tail)) starts.push_back(e.tail);
    if (ef.count(e)) starts.push_back(e.head);
    for (NodeId s : starts) {
        std::unordered_set<NodeId> visited;
        std::deque<NodeId> q;
        for (NodeId p : g.iprec_nodes(s)) q.push_back(p);
        while (!q.empty()) {
            NodeId x = q.front();
            q.pop_front();
            if (!visited.insert(x).second) continue;
            if (g.folding(x)) {
                for (NodeId p : g.iprec_nodes(x)) q.push_back(p);
            } else {
                for (const auto& f : g.incoming(x)) add(f);
            }
        }
    }
    return out;
}

namespace {

CoverIndexMap collect_edges_with_path(const DynamicGraph& g, const CoverIndexMap& c0, const std::vector<Edge>& ef) {
    const NodeTable& t = g.table();
    CoverIndexMap c;
    EdgeSet visited;
    std::deque<Edge> q(ef.begin(), ef.end());
    while (!q.empty()) {
        Edge e = q.front();
        q.pop_front();
        if (!visited.insert(e).second) continue;
        if (c0.contains(e)) c.insert(t, e);
        for (const auto& p : g.prev(e)) q.push_back(p);
    }
    return c;
}

}  // namespace

CoverIndexMap compute_cover_edges(const DynamicGraph& g, const std::vector<Edge>& ef) {
    const NodeTable& t = g.table();
    CoverIndexMap c;
    EdgeSet efs(ef.begin(), ef.end());
    std::deque<Edge> q;
    for (const auto& e : ef) {
        c.insert(t, e);
        q.push_back(e);
    }
    while (!q.empty()) {
        Edge f = q.front();
        q.pop_front();
        for (const auto& e : weak_ceiling_adjacent_edges(g, f, efs))
            if (c.insert(t, e)) q.push_back(e);
    }
    return collect_edges_with_path(g, c, ef);
}

PendantScan step_pendant_edges_with_reachable_graph(const DynamicGraph& g, const CoverIndexMap& c,
                                                    const std::vector<NodeId>& v0, const std::vector<Edge>& ef) {
    const NodeTable& t = g.table();
    PendantScan r{{}, DynamicGraph(&t)};
    EdgeSet efs(ef.begin(), ef.end());
    EdgeSet in_er;
    std::unordered_set<NodeId> starts(v0.begin(), v0.end());
    auto mark = [&](const Edge& e) {
        if (in_er.insert(e).second) r.er.push_back(e);
    };
    std::deque<Edge> q;
    for (NodeId v : v0)
        for (const auto& e : g.outgoing(v)) q.push_back(e);
    std::vector<Edge> order;
    while (!q.empty()) {
        Edge e = q.front();
        q.pop_front();
        if (r.h.has_edge(e)) continue;
        r.h.add_edge(e);
        order.push_back(e);
        if (!efs.count(e)) {
            auto nx = g.next(e);
            if (nx.empty())
                mark(e);
            else
                q.insert(q.end(), nx.begin(), nx.end());
        }
        if (!starts.count(e.tail)) {
            auto pv = g.prev(e);
            if (pv.empty())
                mark(e);
            else
                q.insert(q.end(), pv.begin(), pv.end());
        }
    }
    // Precedents and succedents only count inside the reachable part.
    for (const auto& e : order) {
        if (!c.contains(e) && r.h.isucc(e).empty()) mark(e);
        if (t.tier(e.head) > 0 && r.h.iprec(e).empty()) mark(e);
    }
    return r;
}

FeasibleGraph compute_feasible_graph(const DynamicGraph& g, const std::vector<NodeId>& v0,
                                     const std::vector<Edge>& ef, const std::vector<Edge>& removal_seed) {
    const NodeTable& t = g.table();
    FeasibleGraph fg{DynamicGraph(&t), v0, {}, {}, {}};
    if (ef.empty()) return fg;

    fg.cover = compute_cover_edges(g, ef);
    PendantScan scan = step_pendant_edges_with_reachable_graph(g, fg.cover, v0, ef);
    DynamicGraph h = std::move(scan.h);

    EdgeSet live;
    for (const auto& e : ef)
        if (h.has_edge(e) && live.insert(e).second) fg.ef.push_back(e);
    if (live.empty()) return fg;

    std::deque<Edge> q(scan.er.begin(), scan.er.end());
    q.insert(q.end(), removal_seed.begin(), removal_seed.end());
    while (!q.empty()) {
        Edge e = q.front();
        q.pop_front();
        if (!h.has_edge(e)) continue;

        if (!h.merging(e))
            for (const auto& f : h.next(e)) q.push_back(f);
        for (const auto& f : h.isucc(e))
            if (h.iprec(f).size() == 1) q.push_back(f);
        for (const auto& f : h.iprec(e))
            if (!fg.cover.contains(f) && h.isucc(f).size() == 1) q.push_back(f);
        if (!h.splitting(e))
            for (const auto& f : h.prev(e))
                if (!live.count(f)) q.push_back(f);

        h.remove_edge(e);
        fg.removed.push_back(e);
        if (live.erase(e)) {
            fg.ef.erase(std::find(fg.ef.begin(), fg.ef.end(), e));
            if (live.empty()) return FeasibleGraph{DynamicGraph(&t), v0, {}, std::move(fg.cover), std::move(fg.removed)};
        }
    }
    fg.graph = std::move(h);
    return fg;
}

Edge find_first_merging_edge_or_final_edge(const DynamicGraph& g, const Walk& w) {
    for (std::size_t i = 0; i + 1 < w.edges.size(); ++i)
        if (g.merging(w.edges[i])) return w.edges[i];
    return w.edges.back();
}

std::vector<Edge> add_final_edges_of_obsolete_walks(const DynamicGraph& gu, DynamicGraph& g,
                                                    const std::vector<NodeId>& v0) {
    const NodeTable& t = g.table();
    std::vector<Edge> eo;
    EdgeSet visited;
    std::deque<Edge> q;
    for (NodeId v : v0)
        for (const auto& e : gu.outgoing(v)) q.push_back(e);
    while (!q.empty()) {
        Edge e = q.front();
        q.pop_front();
        if (!visited.insert(e).second) continue;
        if (g.has_edge(e)) {
            for (const auto& f : gu.next(e)) q.push_back(f);
        } else if (t.tier(e.head) > 0 && !g.iprec_nodes(e.head).empty()) {
            g.add_edge(e);
            eo.push_back(e);
        }
    }
    return eo;
}

DynamicGraph prune_walk(const DynamicGraph& gu, const DynamicGraph& g, const std::vector<NodeId>& v0,
                        const std::vector<Edge>& ef, const Walk& w, bool preserve_obsolete) {
    DynamicGraph work = copy_graph(g);
    const Edge cut = find_first_merging_edge_or_final_edge(work, w);
    std::vector<Edge> eo;
    if (preserve_obsolete) eo = add_final_edges_of_obsolete_walks(gu, work, v0);
    work.remove_edge(cut);
    std::vector<Edge> finals = ef;
    finals.insert(finals.end(), eo.begin(), eo.end());
    FeasibleGraph fg = compute_feasible_graph(work, v0, finals);
    for (const auto& e : eo) fg.graph.remove_edge(e);
    return std::move(fg.graph);
}

}  // namespace npsim
