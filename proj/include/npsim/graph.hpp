#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "npsim/machines.hpp"
#include "npsim/tm.hpp"

namespace npsim {

// Array addressable by any integer index. Touching an index outside the
// current range grows the storage in that direction; stored cells keep
// their logical index.
template <class T>
class DynamicArray {
public:
    T& at(long i) {
        if (data_.empty()) {
            base_ = i;
            data_.emplace_back();
        }
        while (i < base_) {
            data_.emplace_front();
            --base_;
        }
        while (i >= base_ + static_cast<long>(data_.size())) data_.emplace_back();
        return data_[static_cast<std::size_t>(i - base_)];
    }
    const T* find(long i) const {
        if (i < base_ || i >= base_ + static_cast<long>(data_.size())) return nullptr;
        return &data_[static_cast<std::size_t>(i - base_)];
    }
    long base() const { return base_; }
    std::size_t size() const { return data_.size(); }

private:
    std::deque<T> data_;
    long base_ = 0;
};

struct CaseKey {
    long index = 0;
    int tier = 0;
    std::uint16_t state = 0;
    std::uint16_t symbol = 0;
    auto operator<=>(const CaseKey&) const = default;
};

struct CaseKeyHash {
    std::size_t operator()(const CaseKey& c) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(c.index) * 0x9E3779B97F4A7C15ull;
        h ^= (static_cast<std::uint64_t>(c.tier) << 32) | (static_cast<std::uint64_t>(c.state) << 16) | c.symbol;
        h *= 0xBF58476D1CE4E5B9ull;
        return static_cast<std::size_t>(h ^ (h >> 31));
    }
};

struct NodeKey {
    CaseKey c;
    // (state, symbol) of the index-precedent case; absent exactly at tier 0.
    std::optional<std::pair<std::uint16_t, std::uint16_t>> ipred;
    auto operator<=>(const NodeKey&) const = default;
};

using NodeId = std::uint32_t;

struct Edge {
    NodeId tail = 0;
    NodeId head = 0;
    bool operator==(const Edge&) const = default;
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept {
        std::uint64_t h = (static_cast<std::uint64_t>(e.tail) << 32) | e.head;
        h *= 0x9E3779B97F4A7C15ull;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

using EdgeSet = std::unordered_set<Edge, EdgeHash>;
// A precedent slot: an edge, or the floor/boundary marker when empty.
using MaybeEdge = std::optional<Edge>;

// Every node materialized for one (machine, tape) pair. Graphs share a table
// and refer to nodes by id.
class NodeTable {
public:
    NodeTable(const Machine& m, EncodedTape tape, CertificateSchema schema);

    const Machine& machine() const { return *m_; }
    const EncodedTape& tape() const { return tape_; }
    const CertificateSchema& schema() const { return schema_; }

    // Returns the unique node with this key, creating it on first use.
    // nullopt when the symbol is not part of the machine's alphabet.
    std::optional<NodeId> materialize(long index, int tier, std::uint16_t state, std::uint16_t symbol,
                                      std::optional<CaseKey> ipred_case);
    std::optional<NodeId> find(const NodeKey& key) const;
    NodeId initial_node();

    std::size_t size() const { return nodes_.size(); }
    const DynamicArray<std::vector<std::unordered_map<std::uint32_t, std::vector<NodeId>>>>& cells() const {
        return cells_;
    }

    const NodeKey& key(NodeId n) const { return nodes_[n].key; }
    const CaseKey& case_of(NodeId n) const { return nodes_[n].key.c; }
    std::optional<CaseKey> ipred_case(NodeId n) const;
    long index(NodeId n) const { return nodes_[n].key.c.index; }
    int tier(NodeId n) const { return nodes_[n].key.c.tier; }
    std::uint16_t state(NodeId n) const { return nodes_[n].key.c.state; }
    std::uint16_t symbol(NodeId n) const { return nodes_[n].key.c.symbol; }
    std::uint16_t next_state(NodeId n) const { return nodes_[n].next; }
    std::uint16_t output(NodeId n) const { return nodes_[n].write; }
    int move(NodeId n) const { return nodes_[n].move; }
    long next_index(NodeId n) const { return index(n) + move(n); }
    bool halting(NodeId n) const { return m_->halting(state(n)); }
    bool accepting(NodeId n) const { return state(n) == m_->acc; }
    bool rejecting(NodeId n) const { return state(n) == m_->rej; }

    // Materialized nodes in a transition case / whose index-precedent is it.
    const std::vector<NodeId>& in_case(const CaseKey& c) const;
    const std::vector<NodeId>& with_ipred(const CaseKey& c) const;

    // Tier-0 symbols admissible at `cell` when it is entered from node `from`.
    std::vector<std::uint16_t> floor_symbols(NodeId from, long cell) const;

    bool less(NodeId a, NodeId b) const { return nodes_[a].key < nodes_[b].key; }
    bool edge_less(const Edge& a, const Edge& b) const;
    long edge_index(const Edge& e) const { return std::min(index(e.tail), index(e.head)); }
    int dir(const Edge& e) const { return index(e.head) > index(e.tail) ? 1 : -1; }

    std::string describe(NodeId n) const;
    std::string describe(const Edge& e) const;

private:
    struct NodeInfo {
        NodeKey key;
        std::uint16_t next = 0;
        std::uint16_t write = 0;
        std::int8_t move = 1;
    };

    const Machine* m_;
    EncodedTape tape_;
    CertificateSchema schema_;
    std::vector<NodeInfo> nodes_;
    // cell -> tier -> (state << 16 | symbol) -> nodes of that case
    DynamicArray<std::vector<std::unordered_map<std::uint32_t, std::vector<NodeId>>>> cells_;
    std::unordered_map<CaseKey, std::vector<NodeId>, CaseKeyHash> by_ipred_;
    std::optional<NodeId> initial_;

    std::vector<std::uint16_t> tier0_symbols_below(NodeId n) const;
};

struct EdgeFlags {
    bool floor = false;
    bool merging = false;
    bool splitting = false;
    bool combined_merging = false;
    bool combining = false;
    bool pseudo_combining = false;
    bool folding_tail = false;
    bool folding_head = false;
};

// A set of edges over a shared NodeTable with per-node adjacency kept in
// canonical order. Copies are independent.
class DynamicGraph {
public:
    explicit DynamicGraph(const NodeTable* table) : t_(table) {}

    const NodeTable& table() const { return *t_; }

    bool add_edge(const Edge& e);
    bool remove_edge(const Edge& e);
    bool has_edge(const Edge& e) const;
    bool has_node(NodeId n) const { return adj_.count(n) != 0; }
    std::size_t edge_count() const { return edges_; }
    std::size_t node_count() const { return adj_.size(); }
    bool empty() const { return edges_ == 0; }

    const std::vector<NodeId>& in(NodeId n) const;
    const std::vector<NodeId>& out(NodeId n) const;

    // Canonically ordered views.
    std::vector<NodeId> nodes() const;
    std::vector<Edge> edges() const;
    std::vector<Edge> incoming(NodeId n) const;
    std::vector<Edge> outgoing(NodeId n) const;
    std::vector<Edge> prev(const Edge& e) const { return incoming(e.tail); }
    std::vector<Edge> next(const Edge& e) const { return outgoing(e.head); }

    std::vector<NodeId> iprec_nodes(NodeId v) const;
    std::vector<NodeId> isucc_nodes(NodeId v) const;
    std::vector<Edge> iprec(const Edge& e) const;
    std::vector<Edge> isucc(const Edge& e) const;
    std::size_t count_precedents(const Edge& e) const;
    std::size_t count_succedents(const Edge& e) const;

    bool folding(NodeId v) const;
    bool merging(const Edge& e) const { return in(e.head).size() >= 2; }
    bool splitting(const Edge& e) const { return out(e.tail).size() >= 2; }
    bool floor(const Edge& e) const { return t_->tier(e.head) == 0; }
    bool combined_merging(const Edge& e) const;
    bool combining(const Edge& e) const;
    bool pseudo_combining(const Edge& e) const;
    EdgeFlags classify(const Edge& e) const;

    // One line per edge, canonical order.
    std::string dump() const;

private:
    struct Adj {
        std::vector<NodeId> in;
        std::vector<NodeId> out;
    };
    const NodeTable* t_;
    std::unordered_map<NodeId, Adj> adj_;
    std::size_t edges_ = 0;

    void insert_sorted(std::vector<NodeId>& v, NodeId n) const;
};

// Outgoing edges of v into the tier-0 node(s) of its next cell.
std::vector<Edge> get_floor_next_edges(NodeTable& t, NodeId v);

// Continuation edges of u above each precedent edge; an empty slot yields
// the floor edges of u.
std::vector<Edge> get_next_edges_above_ipreds(NodeTable& t, NodeId u, const std::vector<MaybeEdge>& ep);

std::vector<MaybeEdge> get_forward_weak_ceiling_adjacent_edges(const DynamicGraph& g, const Edge& e0);

enum class PathDirection { backward, forward };

std::vector<MaybeEdge> filter_with_path(const DynamicGraph& g, const Edge& anchor,
                                        const std::vector<MaybeEdge>& candidates, PathDirection dir);

DynamicGraph copy_graph(const DynamicGraph& g);

}  // namespace npsim
