#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "npsim/feasible.hpp"
#include "npsim/graph.hpp"
#include "npsim/machines.hpp"

namespace npsim {

// Ceiling edge per edge index along one walk.
using Surface = std::map<long, Edge>;
// Tier-0 certificate symbols read along one walk, by cell.
using WitnessArray = std::map<long, std::uint16_t>;

enum class Outcome { accept, reject, budget };
const char* outcome_name(Outcome o);

struct RunMetrics {
    std::size_t tape_len = 0;
    std::size_t cert_len = 0;
    std::size_t total_edges = 0;
    std::size_t direct_ext = 0;
    std::size_t verified_ext = 0;
    std::size_t candidates_verified = 0;
    std::size_t disjoint_edges = 0;
    std::size_t pruned_walks = 0;
    std::size_t halting_edges = 0;
    std::size_t max_walks = 0;
    double avg_walk_len = 0.0;
    Outcome decision = Outcome::reject;
    std::string witness;
    double elapsed = 0.0;
};

// key=value lines; `with_elapsed` false gives a run-independent document.
std::string format_metrics(const RunMetrics& m, bool with_elapsed = true);

struct ExtensionPair {
    MaybeEdge ep;
    Edge e;
    bool operator==(const ExtensionPair&) const = default;
};

class ExtensionQueue {
public:
    void add(const ExtensionPair& p);
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    void clear() {
        items_.clear();
        seen_.clear();
    }
    const std::vector<ExtensionPair>& items() const { return items_; }

private:
    std::vector<ExtensionPair> items_;
    std::set<std::array<std::uint32_t, 5>> seen_;
};

struct Limits {
    std::size_t max_steps = 0;
    std::size_t max_edges = 0;
};

struct Counters {
    std::size_t candidates_verified = 0;
    std::size_t disjoint_edges = 0;
    std::size_t pruned_walks = 0;
};

Walk take_arbitrary_walk(const DynamicGraph& g, const std::vector<NodeId>& v0);

std::pair<std::optional<Edge>, Walk> find_feasible_or_disjoint_edge(const DynamicGraph& gu,
                                                                    const std::vector<NodeId>& v0,
                                                                    const Edge& ef, Counters* counters = nullptr);

std::optional<Walk> verify_existence_of_walk(const DynamicGraph& g, const std::vector<NodeId>& v0, const Edge& ef,
                                             Counters* counters = nullptr);

void add_extendable_edge_on_ceiling_edges(const DynamicGraph& h, const Surface& s, ExtensionQueue& ev);

std::vector<Edge> collect_restricted_boundary_edges(NodeTable& g, const DynamicGraph& h, const ExtensionQueue& ev);

// Certificate text of a witness array: SAT cells never read default to "T";
// Subset-Sum stops after the terminator or at the first unread cell.
std::string witness_string(const NodeTable& t, const WitnessArray& r);

struct SimulationResult {
    Outcome outcome = Outcome::reject;
    std::optional<std::string> witness;
    std::vector<std::string> rejected_witnesses;
    RunMetrics metrics;
    std::string budget_reason;
    // Footmarks graph dump, filled when requested.
    std::string graph_dump;
};

// Footmarks simulation state for one instance.
class Simulator {
public:
    Simulator(const Machine& m, EncodedTape tape, CertificateSchema schema, Limits limits);
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    SimulationResult run();

    NodeTable& table() { return table_; }
    const DynamicGraph& footmarks() const { return h_; }
    const std::vector<NodeId>& initial_nodes() const { return v0_; }

    // One direct extension along a verified walk; the accepting witness, if any.
    std::optional<WitnessArray> extend_edge_directly_with_walk(const Walk& w, ExtensionQueue& ev);

private:
    struct BudgetExceeded {
        std::string reason;
    };

    NodeTable table_;
    DynamicGraph h_;
    std::vector<NodeId> v0_;
    Limits limits_;
    Counters counters_;
    std::size_t direct_ext_ = 0;
    std::size_t verified_ext_ = 0;
    std::size_t halting_edges_ = 0;
    std::vector<std::size_t> walk_lengths_;
    std::vector<std::string> rejected_;

    std::optional<WitnessArray> extend_by_verifiable_edges(const std::vector<Edge>& q, ExtensionQueue& ev);
    void record(WitnessArray& r, const Edge& e) const;
};

struct SimulationOptions {
    bool sanitize = false;
    std::optional<std::size_t> max_steps;
    bool keep_graph = false;
};

// Builds the machine and tape for `inst` and runs the footmarks simulation.
SimulationResult simulate(Variant variant, const ProblemInstance& inst, const SimulationOptions& opts = {});

// One witness per rejecting halting edge of a completed run.
const std::vector<std::string>& collect_rejected_witnesses(const SimulationResult& r);

}  // namespace npsim
