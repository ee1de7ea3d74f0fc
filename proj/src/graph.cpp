#include "npsim/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace npsim {

namespace {

const std::vector<NodeId> kNoNodes;

std::uint32_t pack(std::uint16_t state, std::uint16_t symbol) {
    return (static_cast<std::uint32_t>(state) << 16) | symbol;
}

}  // namespace

NodeTable::NodeTable(const Machine& m, EncodedTape tape, CertificateSchema schema)
    : m_(&m), tape_(std::move(tape)), schema_(std::move(schema)) {}

std::optional<NodeId> NodeTable::materialize(long index, int tier, std::uint16_t state, std::uint16_t symbol,
                                             std::optional<CaseKey> ipred_case) {
    if (symbol >= m_->num_symbols() || state >= m_->num_states()) return std::nullopt;
    if ((tier == 0) != !ipred_case.has_value())
        throw std::logic_error("tier-0 nodes carry no precedent and others must");
    NodeKey key{{index, tier, state, symbol}, std::nullopt};
    if (ipred_case) {
        if (ipred_case->index != index || ipred_case->tier != tier - 1)
            throw std::logic_error("precedent case must sit one tier below on the same cell");
        key.ipred = std::make_pair(ipred_case->state, ipred_case->symbol);
    }
    auto& tiers = cells_.at(index);
    if (tiers.size() <= static_cast<std::size_t>(tier)) tiers.resize(static_cast<std::size_t>(tier) + 1);
    auto& bucket = tiers[static_cast<std::size_t>(tier)][pack(state, symbol)];
    for (NodeId n : bucket)
        if (nodes_[n].key == key) return n;

    NodeId id = static_cast<NodeId>(nodes_.size());
    NodeInfo info;
    info.key = key;
    if (!m_->halting(state)) {
        const auto& s = m_->step(state, symbol);
        info.next = s.next;
        info.write = s.write;
        info.move = s.move;
    }
    nodes_.push_back(info);
    bucket.push_back(id);
    if (ipred_case) by_ipred_[*ipred_case].push_back(id);
    return id;
}

std::optional<NodeId> NodeTable::find(const NodeKey& key) const {
    const auto* tiers = cells_.find(key.c.index);
    if (!tiers || tiers->size() <= static_cast<std::size_t>(key.c.tier)) return std::nullopt;
    const auto& slot = (*tiers)[static_cast<std::size_t>(key.c.tier)];
    auto it = slot.find(pack(key.c.state, key.c.symbol));
    if (it == slot.end()) return std::nullopt;
    for (NodeId n : it->second)
        if (nodes_[n].key == key) return n;
    return std::nullopt;
}

NodeId NodeTable::initial_node() {
    if (!initial_) {
        std::uint16_t sym = m_->blank;
        if (!tape_.tokens.empty()) sym = m_->symbol_id(tape_.tokens[0]);
        initial_ = materialize(0, 0, m_->init, sym, std::nullopt);
    }
    return *initial_;
}

std::optional<CaseKey> NodeTable::ipred_case(NodeId n) const {
    const auto& k = nodes_[n].key;
    if (!k.ipred) return std::nullopt;
    return CaseKey{k.c.index, k.c.tier - 1, k.ipred->first, k.ipred->second};
}

const std::vector<NodeId>& NodeTable::in_case(const CaseKey& c) const {
    const auto* tiers = cells_.find(c.index);
    if (!tiers || c.tier < 0 || tiers->size() <= static_cast<std::size_t>(c.tier)) return kNoNodes;
    const auto& slot = (*tiers)[static_cast<std::size_t>(c.tier)];
    auto it = slot.find(pack(c.state, c.symbol));
    return it == slot.end() ? kNoNodes : it->second;
}

const std::vector<NodeId>& NodeTable::with_ipred(const CaseKey& c) const {
    auto it = by_ipred_.find(c);
    return it == by_ipred_.end() ? kNoNodes : it->second;
}

std::vector<std::uint16_t> NodeTable::tier0_symbols_below(NodeId n) const {
    std::set<std::uint16_t> out;
    std::vector<NodeId> stack{n};
    std::set<NodeId> seen;
    while (!stack.empty()) {
        NodeId x = stack.back();
        stack.pop_back();
        if (!seen.insert(x).second) continue;
        auto p = ipred_case(x);
        if (!p) {
            out.insert(symbol(x));
            continue;
        }
        for (NodeId y : in_case(*p)) stack.push_back(y);
    }
    return {out.begin(), out.end()};
}

std::vector<std::uint16_t> NodeTable::floor_symbols(NodeId from, long cell) const {
    std::set<std::uint16_t> out;
    if (cell >= 0 && cell < static_cast<long>(tape_.instance_len)) {
        out.insert(m_->symbol_id(tape_.tokens[static_cast<std::size_t>(cell)]));
    } else if (schema_.in_region(cell)) {
        auto pos = static_cast<std::size_t>(cell - schema_.region_start);
        auto add = [&](const std::vector<std::string>& syms) {
            for (const auto& s : syms)
                if (auto id = m_->find_symbol(s)) out.insert(*id);
        };
        if (pos == 0 || schema_.kind == Problem::sat || index(from) != cell - 1) {
            add(certificate_alphabet(schema_, pos, pos == 0 ? std::optional<std::string_view>("")
                                                            : std::optional<std::string_view>()));
        } else {
            // The previous certificate cell holds whatever its first visit read;
            // every first visit reachable below `from` is a candidate.
            for (std::uint16_t prev : tier0_symbols_below(from)) {
                const std::string& name = m_->symbol_name(prev);
                if (schema_.terminator && (name == *schema_.terminator || prev == m_->blank)) {
                    out.insert(m_->blank);
                    continue;
                }
                add(certificate_alphabet(schema_, pos, std::string_view(name)));
            }
        }
    } else {
        out.insert(m_->blank);
    }
    return {out.begin(), out.end()};
}

bool NodeTable::edge_less(const Edge& a, const Edge& b) const {
    if (a.tail != b.tail) return less(a.tail, b.tail);
    if (a.head != b.head) return less(a.head, b.head);
    return false;
}

std::string NodeTable::describe(NodeId n) const {
    const auto& k = nodes_[n].key;
    std::ostringstream os;
    os << '(' << k.c.index << ',' << k.c.tier << ',' << m_->state_name(k.c.state) << ','
       << m_->symbol_name(k.c.symbol) << '|';
    if (k.ipred)
        os << m_->state_name(k.ipred->first) << ',' << m_->symbol_name(k.ipred->second);
    else
        os << '-';
    os << ')';
    return os.str();
}

std::string NodeTable::describe(const Edge& e) const { return describe(e.tail) + " -> " + describe(e.head); }

// ---------------------------------------------------------------------------

void DynamicGraph::insert_sorted(std::vector<NodeId>& v, NodeId n) const {
    auto it = std::lower_bound(v.begin(), v.end(), n, [this](NodeId a, NodeId b) { return t_->less(a, b); });
    v.insert(it, n);
}

bool DynamicGraph::has_edge(const Edge& e) const {
    auto it = adj_.find(e.tail);
    if (it == adj_.end()) return false;
    const auto& out = it->second.out;
    return std::find(out.begin(), out.end(), e.head) != out.end();
}

bool DynamicGraph::add_edge(const Edge& e) {
    if (has_edge(e)) return false;
    insert_sorted(adj_[e.tail].out, e.head);
    insert_sorted(adj_[e.head].in, e.tail);
    ++edges_;
    return true;
}

bool DynamicGraph::remove_edge(const Edge& e) {
    auto it = adj_.find(e.tail);
    if (it == adj_.end()) return false;
    auto& out = it->second.out;
    auto pos = std::find(out.begin(), out.end(), e.head);
    if (pos == out.end()) return false;
    out.erase(pos);
    if (out.empty() && it->second.in.empty()) adj_.erase(it);
    auto hit = adj_.find(e.head);
    auto& in = hit->second.in;
    in.erase(std::find(in.begin(), in.end(), e.tail));
    if (in.empty() && hit->second.out.empty()) adj_.erase(hit);
    --edges_;
    return true;
}

const std::vector<NodeId>& DynamicGraph::in(NodeId n) const {
    auto it = adj_.find(n);
    return it == adj_.end() ? kNoNodes : it->second.in;
}

const std::vector<NodeId>& DynamicGraph::out(NodeId n) const {
    auto it = adj_.find(n);
    return it == adj_.end() ? kNoNodes : it->second.out;
}

std::vector<NodeId> DynamicGraph::nodes() const {
    std::vector<NodeId> v;
    v.reserve(adj_.size());
    for (const auto& [n, a] : adj_) v.push_back(n);
    std::sort(v.begin(), v.end(), [this](NodeId a, NodeId b) { return t_->less(a, b); });
    return v;
}

std::vector<Edge> DynamicGraph::edges() const {
    std::vector<Edge> v;
    v.reserve(edges_);
    for (NodeId n : nodes())
        for (NodeId h : out(n)) v.push_back({n, h});
    return v;
}

std::vector<Edge> DynamicGraph::incoming(NodeId n) const {
    std::vector<Edge> v;
    for (NodeId p : in(n)) v.push_back({p, n});
    return v;
}

std::vector<Edge> DynamicGraph::outgoing(NodeId n) const {
    std::vector<Edge> v;
    for (NodeId s : out(n)) v.push_back({n, s});
    return v;
}

std::vector<NodeId> DynamicGraph::iprec_nodes(NodeId v) const {
    std::vector<NodeId> r;
    auto p = t_->ipred_case(v);
    if (!p) return r;
    for (NodeId n : t_->in_case(*p))
        if (has_node(n)) r.push_back(n);
    std::sort(r.begin(), r.end(), [this](NodeId a, NodeId b) { return t_->less(a, b); });
    return r;
}

std::vector<NodeId> DynamicGraph::isucc_nodes(NodeId v) const {
    std::vector<NodeId> r;
    if (t_->halting(v)) return r;
    for (NodeId n : t_->with_ipred(t_->case_of(v)))
        if (has_node(n) && t_->symbol(n) == t_->output(v)) r.push_back(n);
    std::sort(r.begin(), r.end(), [this](NodeId a, NodeId b) { return t_->less(a, b); });
    return r;
}

std::vector<Edge> DynamicGraph::iprec(const Edge& e) const {
    std::vector<Edge> r;
    const NodeId u = e.tail;
    auto u_ipred = t_->ipred_case(u);
    for (NodeId vp : iprec_nodes(e.head)) {
        for (NodeId up : out(vp)) {
            if (t_->index(up) != t_->index(u)) continue;
            bool ok = up == u || (u_ipred && t_->case_of(up) == *u_ipred) || t_->tier(u) > t_->tier(up) + 1;
            if (ok) r.push_back({vp, up});
        }
    }
    return r;
}

std::vector<Edge> DynamicGraph::isucc(const Edge& e) const {
    std::vector<Edge> r;
    const NodeId v = e.head;
    const CaseKey vc = t_->case_of(v);
    for (NodeId up : isucc_nodes(e.tail)) {
        for (NodeId vp : in(up)) {
            if (t_->index(vp) != t_->index(v)) continue;
            auto vp_ipred = t_->ipred_case(vp);
            bool ok = vp == v || (vp_ipred && *vp_ipred == vc && t_->symbol(vp) == t_->output(v)) ||
                      t_->tier(vp) > t_->tier(v) + 1;
            if (ok) r.push_back({vp, up});
        }
    }
    return r;
}

std::size_t DynamicGraph::count_precedents(const Edge& e) const {
    const long slice = t_->edge_index(e);
    std::size_t count = 0;
    for (NodeId p : iprec_nodes(e.head))
        for (NodeId s : out(p))
            if (std::min(t_->index(p), t_->index(s)) == slice) ++count;
    return count;
}

std::size_t DynamicGraph::count_succedents(const Edge& e) const {
    const long slice = t_->edge_index(e);
    std::size_t count = 0;
    for (NodeId s : isucc_nodes(e.tail))
        for (NodeId p : in(s))
            if (std::min(t_->index(p), t_->index(s)) == slice) ++count;
    return count;
}

bool DynamicGraph::folding(NodeId v) const {
    const auto& o = out(v);
    if (o.empty()) return false;
    for (NodeId p : in(v))
        for (NodeId s : o)
            if (t_->index(p) == t_->index(s)) return true;
    return false;
}

bool DynamicGraph::combined_merging(const Edge& e) const {
    const CaseKey uc = t_->case_of(e.tail);
    for (NodeId p : in(e.head))
        if (p != e.tail && t_->case_of(p) == uc) return true;
    return false;
}

bool DynamicGraph::combining(const Edge& e) const {
    const CaseKey uc = t_->case_of(e.tail);
    const CaseKey vc = t_->case_of(e.head);
    const bool asym = folding(e.tail) != folding(e.head);
    for (NodeId w : t_->in_case(vc)) {
        if (w == e.head || !has_node(w)) continue;
        if (asym) return true;
        for (NodeId p : in(w))
            if (t_->case_of(p) != uc) return true;
    }
    return false;
}

bool DynamicGraph::pseudo_combining(const Edge& e) const {
    if (folding(e.head)) return false;
    for (NodeId s : isucc_nodes(e.head))
        if (folding(s)) return true;
    return false;
}

EdgeFlags DynamicGraph::classify(const Edge& e) const {
    EdgeFlags f;
    f.floor = floor(e);
    f.merging = merging(e);
    f.splitting = splitting(e);
    f.combined_merging = combined_merging(e);
    f.combining = combining(e);
    f.pseudo_combining = pseudo_combining(e);
    f.folding_tail = folding(e.tail);
    f.folding_head = folding(e.head);
    return f;
}

std::string DynamicGraph::dump() const {
    std::string s;
    for (const auto& e : edges()) s += t_->describe(e) + "\n";
    return s;
}

DynamicGraph copy_graph(const DynamicGraph& g) {
    DynamicGraph c(&g.table());
    for (const auto& e : g.edges()) c.add_edge(e);
    return c;
}

// ---------------------------------------------------------------------------

std::vector<Edge> get_floor_next_edges(NodeTable& t, NodeId v) {
    std::vector<Edge> r;
    if (t.halting(v)) return r;
    const long cell = t.next_index(v);
    for (std::uint16_t sym : t.floor_symbols(v, cell)) {
        if (auto z = t.materialize(cell, 0, t.next_state(v), sym, std::nullopt)) r.push_back({v, *z});
    }
    return r;
}

std::vector<Edge> get_next_edges_above_ipreds(NodeTable& t, NodeId u, const std::vector<MaybeEdge>& ep) {
    std::vector<Edge> r;
    if (t.halting(u)) return r;
    auto push = [&](const Edge& e) {
        for (const auto& x : r)
            if (x == e) return;
        r.push_back(e);
    };
    for (const auto& e : ep) {
        if (!e) {
            for (const auto& f : get_floor_next_edges(t, u)) push(f);
            continue;
        }
        const NodeId v = e->tail;
        auto z = t.materialize(t.index(v), t.tier(v) + 1, t.next_state(u), t.output(v), t.case_of(v));
        if (!z) continue;
        long d = t.index(u) - t.index(*z);
        if (d != 1 && d != -1) throw std::logic_error("continuation edge must step to an adjacent cell");
        push({u, *z});
    }
    return r;
}

std::vector<MaybeEdge> get_forward_weak_ceiling_adjacent_edges(const DynamicGraph& g, const Edge& e0) {
    std::vector<MaybeEdge> c;
    const NodeTable& t = g.table();
    const NodeId v0 = e0.head;
    if (t.halting(v0)) return c;
    bool marker = false;
    std::unordered_set<Edge, EdgeHash> seen_edges;
    std::unordered_set<NodeId> visited;
    std::deque<NodeId> q{v0};
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop_front();
        if (!visited.insert(u).second) continue;
        if (u == v0 || g.folding(u)) {
            auto p = g.iprec_nodes(u);
            if (p.empty()) marker = true;
            for (NodeId v : p)
                if (!visited.count(v)) q.push_back(v);
        } else {
            for (const auto& e : g.incoming(u))
                if (seen_edges.insert(e).second) c.push_back(e);
        }
    }
    if (marker) c.push_back(std::nullopt);
    return c;
}

std::vector<MaybeEdge> filter_with_path(const DynamicGraph& g, const Edge& anchor,
                                        const std::vector<MaybeEdge>& candidates, PathDirection dir) {
    std::vector<MaybeEdge> out;
    if (candidates.empty()) return out;
    const NodeTable& t = g.table();
    EdgeSet wanted;
    bool marker = false;
    for (const auto& c : candidates) {
        if (c)
            wanted.insert(*c);
        else
            marker = true;
    }
    long i0 = dir == PathDirection::backward
                  ? std::min(t.index(anchor.head), t.next_index(anchor.head))
                  : t.edge_index(anchor);
    EdgeSet visited, kept;
    std::deque<Edge> q{anchor};
    while (!q.empty()) {
        Edge e = q.front();
        q.pop_front();
        if (!visited.insert(e).second) continue;
        if (wanted.count(e)) kept.insert(e);
        if (dir == PathDirection::backward) {
            if (t.edge_index(e) == i0) continue;
            for (NodeId p : g.in(e.tail)) q.push_back({p, e.tail});
        } else {
            if (!(e == anchor) && t.edge_index(e) == i0) continue;
            for (NodeId s : g.out(e.head)) q.push_back({e.head, s});
        }
    }
    for (const auto& c : candidates) {
        if (c && kept.count(*c)) out.push_back(c);
    }
    if (marker && dir == PathDirection::backward) out.push_back(std::nullopt);
    return out;
}

}  // namespace npsim
