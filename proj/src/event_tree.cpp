#include "cegbma/event_tree.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <set>

#include "cegbma/error.hpp"

namespace cegbma {

namespace {

std::string join_path(std::span<const std::string> path) {
    std::string out = "[";
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += ", ";
        out += '"' + path[i] + '"';
    }
    return out + "]";
}

}  // namespace

struct EventTree::Node {
    std::map<std::string, std::unique_ptr<Node>> children;  // sorted by label
    std::uint64_t ending = 0;                               // records ending here
    bool has_record_ending = false;

    Node& child(const std::string& label) {
        auto& slot = children[label];
        if (!slot) slot = std::make_unique<Node>();
        return *slot;
    }
    const Node* find(std::span<const std::string> path) const {
        const Node* node = this;
        for (const auto& label : path) {
            auto it = node->children.find(label);
            if (it == node->children.end()) return nullptr;
            node = it->second.get();
        }
        return node;
    }
};

EventTree EventTree::from_records(std::span<const PathRecord> records) {
    if (records.empty()) fail(ErrorKind::InvalidInput, "empty record list");
    Node root;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& record = records[r];
        if (record.empty()) fail(ErrorKind::InvalidInput, "record " + std::to_string(r) + " is empty");
        Node* node = &root;
        for (const auto& label : record) {
            if (label.empty()) fail(ErrorKind::InvalidInput, "record " + std::to_string(r) + " has an empty label");
            node = &node->child(label);
        }
        node->ending += 1;
        node->has_record_ending = true;
    }
    // A record that stops at an internal vertex leaves its leaf ambiguous.
    std::deque<std::pair<const Node*, PathRecord>> queue{{&root, {}}};
    while (!queue.empty()) {
        auto [node, path] = std::move(queue.front());
        queue.pop_front();
        if (node->has_record_ending && !node->children.empty())
            fail(ErrorKind::InvalidInput, "record " + join_path(path) + " is a strict prefix of another record");
        for (const auto& [label, child] : node->children) {
            auto next = path;
            next.push_back(label);
            queue.emplace_back(child.get(), std::move(next));
        }
    }
    return from_trie(root);
}

EventTree EventTree::from_spec(const TreeSpec& spec) {
    Node root;
    if (spec.edges.empty()) fail(ErrorKind::InvalidInput, "tree spec declares no edges");
    // Shorter paths first so every parent is declared before its children.
    std::vector<const PathRecord*> ordered;
    for (const auto& e : spec.edges) ordered.push_back(&e);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const PathRecord* a, const PathRecord* b) { return a->size() < b->size(); });
    std::set<PathRecord> declared;
    for (const PathRecord* edge : ordered) {
        if (edge->empty()) fail(ErrorKind::InvalidInput, "edge with empty path");
        if (!declared.insert(*edge).second)
            fail(ErrorKind::InvalidInput, "edge " + join_path(*edge) + " declared twice");
        std::span<const std::string> parent_path(edge->data(), edge->size() - 1);
        Node* node = &root;
        for (const auto& label : parent_path) {
            auto it = node->children.find(label);
            if (it == node->children.end())
                fail(ErrorKind::InvalidInput, "edge " + join_path(*edge) + " is disconnected from the root");
            node = it->second.get();
        }
        if (edge->back().empty()) fail(ErrorKind::InvalidInput, "edge " + join_path(*edge) + " has an empty label");
        node->child(edge->back());
    }
    for (const auto& [path, n] : spec.counts) {
        Node* node = &root;
        for (const auto& label : path) {
            auto it = node->children.find(label);
            if (it == node->children.end())
                fail(ErrorKind::InvalidInput, "counted path " + join_path(path) + " is not in the structure");
            node = it->second.get();
        }
        if (path.empty() || !node->children.empty())
            fail(ErrorKind::InvalidInput, "counted path " + join_path(path) + " does not end at a leaf");
        node->ending += n;
    }
    return from_trie(root);
}

EventTree EventTree::from_trie(const Node& root) {
    EventTree tree;
    std::vector<const Node*> order{&root};
    tree.parent_.push_back(std::nullopt);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& [label, child] : order[i]->children) {
            tree.parent_.push_back(i);
            order.push_back(child.get());
        }
    }
    tree.edges_.resize(order.size());
    VertexId next = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& [label, child] : order[i]->children) tree.edges_[i].push_back(Edge{next++, label, 0});
    }
    // Counts flow upward from the leaves.
    std::vector<std::uint64_t> through(order.size(), 0);
    for (std::size_t i = order.size(); i-- > 0;) {
        if (order[i]->children.empty()) {
            through[i] = order[i]->ending;
        } else {
            for (auto& e : tree.edges_[i]) {
                e.count = through[e.head];
                through[i] += e.count;
            }
        }
    }
    for (VertexId v = 0; v < order.size(); ++v) (tree.edges_[v].empty() ? tree.leaves_ : tree.situations_).push_back(v);
    if (tree.situations_.empty()) fail(ErrorKind::InvalidInput, "tree has no situations");
    return tree;
}

std::vector<std::string> EventTree::labels(VertexId v) const {
    std::vector<std::string> out;
    for (const auto& e : out_edges(v)) out.push_back(e.label);
    return out;
}

std::uint64_t EventTree::arriving_count(VertexId v) const {
    if (auto p = parent_.at(v)) {
        for (const auto& e : edges_[*p])
            if (e.head == v) return e.count;
    }
    std::uint64_t total = 0;
    for (const auto& e : edges_[v]) total += e.count;
    return total;
}

std::optional<VertexId> EventTree::find(std::string_view name) const {
    if (name.size() < 2 || name[0] != 's') return std::nullopt;
    VertexId v = 0;
    for (char c : name.substr(1)) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<VertexId>(c - '0');
        if (v >= vertex_count()) return std::nullopt;
    }
    if (name.size() > 2 && name[1] == '0') return std::nullopt;
    return v;
}

VertexId EventTree::lookup(std::string_view name) const {
    auto v = find(name);
    if (!v) fail(ErrorKind::InvalidInput, "unknown vertex '" + std::string(name) + "'");
    return *v;
}

std::optional<VertexId> EventTree::follow(std::span<const std::string> path) const {
    VertexId v = root();
    for (const auto& label : path) {
        const auto& out = edges_[v];
        auto it = std::lower_bound(out.begin(), out.end(), label,
                                   [](const Edge& e, const std::string& l) { return e.label < l; });
        if (it == out.end() || it->label != label) return std::nullopt;
        v = it->head;
    }
    return v;
}

PathRecord EventTree::path_to(VertexId v) const {
    PathRecord path;
    while (auto p = parent_.at(v)) {
        for (const auto& e : edges_[*p])
            if (e.head == v) path.push_back(e.label);
        v = *p;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Floret EventTree::floret(VertexId situation) const {
    if (!is_situation(situation)) fail(ErrorKind::InvalidArgument, name(situation) + " is not a situation");
    Floret f{situation, {}, {}};
    for (const auto& e : edges_[situation]) {
        f.labels.push_back(e.label);
        f.counts.push_back(e.count);
    }
    return f;
}

std::vector<std::string> EventTree::flow_violations() const {
    std::vector<std::string> out;
    for (VertexId s : situations_) {
        if (s == root()) continue;
        std::uint64_t sum = 0;
        for (const auto& e : edges_[s]) sum += e.count;
        if (sum != arriving_count(s))
            out.push_back(name(s) + ": incoming " + std::to_string(arriving_count(s)) + " != outgoing " +
                          std::to_string(sum));
    }
    return out;
}

std::vector<std::string> EventTree::warnings() const {
    std::vector<std::string> out;
    for (VertexId s : situations_)
        if (edges_[s].size() == 1) out.push_back(name(s) + " has out-degree 1");
    return out;
}

TreeSpec EventTree::to_spec() const {
    TreeSpec spec;
    for (VertexId v = 1; v < vertex_count(); ++v) spec.edges.push_back(path_to(v));
    for (VertexId leaf : leaves_) spec.counts.emplace_back(path_to(leaf), arriving_count(leaf));
    return spec;
}

// ---------------------------------------------------------------------------

Hyperstage::Hyperstage(std::vector<Hyperset> blocks, std::map<VertexId, std::vector<std::string>> edge_order)
    : blocks_(std::move(blocks)), edge_order_(std::move(edge_order)) {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        auto& members = blocks_[b].members;
        std::sort(members.begin(), members.end());
        for (VertexId s : members) block_index_.emplace(s, b);
    }
}

std::optional<std::size_t> Hyperstage::block_of(VertexId s) const {
    auto it = block_index_.find(s);
    if (it == block_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> Hyperstage::aligned_edges(const EventTree& tree, VertexId s) const {
    const auto out = tree.out_edges(s);
    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto b = block_of(s);
    if (!b || blocks_[*b].alignment != EdgeAlignment::Explicit) return order;
    auto it = edge_order_.find(s);
    if (it == edge_order_.end()) return order;
    const auto& wanted = it->second;
    if (wanted.size() != out.size())
        fail(ErrorKind::Validation, EventTree::name(s) + ": edge_order length does not match out-degree");
    for (std::size_t i = 0; i < wanted.size(); ++i) {
        auto e = std::find_if(out.begin(), out.end(), [&](const Edge& x) { return x.label == wanted[i]; });
        if (e == out.end())
            fail(ErrorKind::Validation, EventTree::name(s) + ": edge_order names unknown label '" + wanted[i] + "'");
        order[i] = static_cast<std::size_t>(e - out.begin());
    }
    auto check = order;
    std::sort(check.begin(), check.end());
    if (std::adjacent_find(check.begin(), check.end()) != check.end())
        fail(ErrorKind::Validation, EventTree::name(s) + ": edge_order repeats a label");
    return order;
}

Hyperstage default_hyperstage(const EventTree& tree) {
    std::map<std::vector<std::string>, std::size_t> by_labels;
    std::vector<Hyperset> blocks;
    for (VertexId s : tree.situations()) {
        auto [it, inserted] = by_labels.emplace(tree.labels(s), blocks.size());
        if (inserted) blocks.emplace_back();
        blocks[it->second].members.push_back(s);
    }
    return Hyperstage(std::move(blocks));
}

ValidationReport validate_hyperstage(const EventTree& tree, const Hyperstage& hyperstage) {
    ValidationReport report;
    auto& v = report.violations;
    std::map<VertexId, std::size_t> seen;
    for (std::size_t b = 0; b < hyperstage.size(); ++b) {
        const auto& block = hyperstage.block(b);
        if (block.members.empty()) v.push_back("block " + std::to_string(b) + " is empty");
        for (VertexId s : block.members) {
            if (!tree.is_situation(s)) {
                v.push_back("not a situation: " + EventTree::name(s));
                continue;
            }
            if (!seen.emplace(s, b).second) v.push_back("not a partition: " + EventTree::name(s) + " appears twice");
        }
    }
    for (VertexId s : tree.situations())
        if (!seen.count(s)) v.push_back("not a cover: " + EventTree::name(s) + " is in no block");
    for (const auto& [s, order] : hyperstage.edge_order()) {
        auto b = hyperstage.block_of(s);
        if (!b || hyperstage.block(*b).alignment != EdgeAlignment::Explicit)
            v.push_back("edge_order given for " + EventTree::name(s) + " outside an explicitly aligned block");
    }

    for (std::size_t b = 0; b < hyperstage.size(); ++b) {
        const auto& block = hyperstage.block(b);
        std::vector<VertexId> members;
        for (VertexId s : block.members)
            if (tree.is_situation(s)) members.push_back(s);
        if (members.empty()) continue;
        const std::size_t degree = tree.out_degree(members.front());
        bool mixed = false;
        for (VertexId s : members) mixed |= tree.out_degree(s) != degree;
        if (mixed) {
            v.push_back("mixed out-degree in block " + std::to_string(b));
            continue;
        }
        if (block.alignment == EdgeAlignment::SortedLabel) {
            const auto labels = tree.labels(members.front());
            for (VertexId s : members)
                if (tree.labels(s) != labels) {
                    v.push_back("label misalignment in block " + std::to_string(b) + ": " +
                                EventTree::name(members.front()) + " vs " + EventTree::name(s));
                    break;
                }
        } else {
            for (VertexId s : members) {
                try {
                    hyperstage.aligned_edges(tree, s);
                } catch (const Error& e) {
                    v.push_back(e.what());
                }
            }
        }
    }
    return report;
}

}  // namespace cegbma
