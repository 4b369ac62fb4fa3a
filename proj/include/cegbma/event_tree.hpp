#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cegbma {

// Index of a vertex in breadth-first order. Vertex k is printed as "s<k>".
using VertexId = std::size_t;

// Edge labels from the root toward a leaf.
using PathRecord = std::vector<std::string>;

struct Edge {
    VertexId head = 0;
    std::string label;
    std::uint64_t count = 0;
};

// Depth-1 subtree rooted at a situation.
struct Floret {
    VertexId situation = 0;
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;
};

// Declared structure plus leaf-path counts. Every edge is named by the full
// label path from the root to its head vertex.
struct TreeSpec {
    std::vector<PathRecord> edges;
    std::vector<std::pair<PathRecord, std::uint64_t>> counts;
};

// Rooted event tree with per-edge observation counts. Vertices, situations
// and leaves alike, are numbered breadth-first with children visited in
// sorted-label order, so the numbering depends only on the set of paths.
// Immutable after construction.
class EventTree {
public:
    static EventTree from_records(std::span<const PathRecord> records);
    static EventTree from_spec(const TreeSpec& spec);

    std::size_t vertex_count() const noexcept { return parent_.size(); }
    VertexId root() const noexcept { return 0; }
    bool is_leaf(VertexId v) const { return edges_.at(v).empty(); }
    bool is_situation(VertexId v) const { return v < vertex_count() && !edges_[v].empty(); }

    // Situations in breadth-first order, root first.
    const std::vector<VertexId>& situations() const noexcept { return situations_; }
    const std::vector<VertexId>& leaves() const noexcept { return leaves_; }

    // Outgoing edges sorted by label.
    std::span<const Edge> out_edges(VertexId v) const { return edges_.at(v); }
    std::size_t out_degree(VertexId v) const { return edges_.at(v).size(); }
    std::optional<VertexId> parent(VertexId v) const { return parent_.at(v); }
    std::vector<std::string> labels(VertexId v) const;

    // Observations reaching v: the incoming edge count, or the total at the root.
    std::uint64_t arriving_count(VertexId v) const;
    std::uint64_t total_count() const { return arriving_count(root()); }

    static std::string name(VertexId v) { return "s" + std::to_string(v); }
    std::optional<VertexId> find(std::string_view name) const;
    // Like find() but throws InvalidInput for unknown names.
    VertexId lookup(std::string_view name) const;

    std::optional<VertexId> follow(std::span<const std::string> path) const;
    PathRecord path_to(VertexId v) const;

    Floret floret(VertexId situation) const;

    // Empty when every non-root situation passes on exactly what it receives.
    std::vector<std::string> flow_violations() const;
    // Out-degree-1 situations carry no staging information.
    std::vector<std::string> warnings() const;

    // Round-trips through from_spec.
    TreeSpec to_spec() const;

private:
    struct Node;
    static EventTree from_trie(const Node& root);

    std::vector<std::optional<VertexId>> parent_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<VertexId> situations_;
    std::vector<VertexId> leaves_;
};

inline EventTree build_tree(std::span<const PathRecord> records) { return EventTree::from_records(records); }
inline EventTree load_tree_spec(const TreeSpec& spec) { return EventTree::from_spec(spec); }

enum class EdgeAlignment { SortedLabel, Explicit };

struct Hyperset {
    std::vector<VertexId> members;  // sorted
    EdgeAlignment alignment = EdgeAlignment::SortedLabel;
};

// Partition of the situations into blocks inside which co-staging is allowed.
// Under explicit alignment, edge_order gives each member's labels in the
// order that lines up across the block.
class Hyperstage {
public:
    Hyperstage() = default;
    explicit Hyperstage(std::vector<Hyperset> blocks,
                        std::map<VertexId, std::vector<std::string>> edge_order = {});

    const std::vector<Hyperset>& blocks() const noexcept { return blocks_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    const Hyperset& block(std::size_t i) const { return blocks_.at(i); }
    const std::map<VertexId, std::vector<std::string>>& edge_order() const noexcept { return edge_order_; }
    std::optional<std::size_t> block_of(VertexId s) const;

    // Indices into tree.out_edges(s), listed in the block's aligned order.
    std::vector<std::size_t> aligned_edges(const EventTree& tree, VertexId s) const;

private:
    std::vector<Hyperset> blocks_;
    std::map<VertexId, std::vector<std::string>> edge_order_;
    std::map<VertexId, std::size_t> block_index_;
};

// Groups situations by identical outgoing label sets; blocks ordered by smallest member.
Hyperstage default_hyperstage(const EventTree& tree);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_hyperstage(const EventTree& tree, const Hyperstage& hyperstage);

}  // namespace cegbma
