#include "cegbma/graph_export.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>

#include "cegbma/error.hpp"

namespace cegbma {

namespace {

constexpr std::array<const char*, 12> kPalette = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                                                  "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

std::string quoted(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + '"';
}

// Stage index per vertex; leaves get SIZE_MAX.
std::vector<std::size_t> stage_index(const EventTree& tree, const FullStaging& staging) {
    std::vector<std::size_t> index(tree.vertex_count(), SIZE_MAX);
    std::vector<std::vector<VertexId>> stages = all_stages(staging);
    std::sort(stages.begin(), stages.end());
    for (std::size_t k = 0; k < stages.size(); ++k)
        for (VertexId s : stages[k]) {
            if (!tree.is_situation(s)) fail(ErrorKind::InvalidArgument, EventTree::name(s) + " is not a situation");
            index[s] = k;
        }
    for (VertexId s : tree.situations())
        if (index[s] == SIZE_MAX) fail(ErrorKind::InvalidArgument, "staging does not cover " + EventTree::name(s));
    return index;
}

}  // namespace

PositionPartition compute_positions(const EventTree& tree, const Hyperstage& hyperstage, const FullStaging& staging) {
    const std::size_t sink = SIZE_MAX;
    std::vector<std::size_t> cls = stage_index(tree, staging);
    std::vector<std::vector<std::size_t>> aligned(tree.vertex_count());
    for (VertexId s : tree.situations()) aligned[s] = hyperstage.aligned_edges(tree, s);

    std::size_t classes = 0;
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> ids;
        std::vector<std::vector<std::size_t>> signature(tree.vertex_count());
        for (VertexId s : tree.situations()) {
            auto& sig = signature[s];
            sig.push_back(cls[s]);
            const auto out = tree.out_edges(s);
            for (std::size_t e : aligned[s]) sig.push_back(tree.is_leaf(out[e].head) ? sink : cls[out[e].head]);
            ids.emplace(sig, 0);
        }
        std::size_t next = 0;
        for (auto& [sig, id] : ids) id = next++;
        for (VertexId s : tree.situations()) cls[s] = ids[signature[s]];
        if (next == classes) break;
        classes = next;
    }

    std::map<std::size_t, std::vector<VertexId>> groups;
    for (VertexId s : tree.situations()) groups[cls[s]].push_back(s);
    PositionPartition out;
    for (auto& [c, members] : groups) out.positions.push_back(std::move(members));
    std::sort(out.positions.begin(), out.positions.end());
    out.position_of.assign(tree.vertex_count(), out.positions.size());
    for (std::size_t p = 0; p < out.positions.size(); ++p)
        for (VertexId s : out.positions[p]) out.position_of[s] = p;
    return out;
}

std::vector<std::string> stage_colours(const EventTree& tree, const FullStaging& staging) {
    std::vector<std::string> colour(tree.vertex_count());
    auto stages = all_stages(staging);
    std::sort(stages.begin(), stages.end());
    std::size_t next = 0;
    for (const auto& stage : stages) {
        if (stage.size() < 2) continue;
        const char* c = kPalette[next++ % kPalette.size()];
        for (VertexId s : stage) colour.at(s) = c;
    }
    return colour;
}

std::string staged_tree_dot(const EventTree& tree, const FullStaging& staging) {
    stage_index(tree, staging);
    const auto colour = stage_colours(tree, staging);
    std::ostringstream out;
    out << "digraph staged_tree {\n"
        << "  rankdir=LR;\n"
        << "  node [shape=circle, style=filled, fillcolor=white, fontsize=10];\n";
    for (VertexId v = 0; v < tree.vertex_count(); ++v) {
        out << "  " << EventTree::name(v);
        if (tree.is_leaf(v))
            out << " [shape=point]";
        else if (!colour[v].empty())
            out << " [fillcolor=" << quoted(colour[v]) << "]";
        out << ";\n";
    }
    for (VertexId s : tree.situations())
        for (const auto& e : tree.out_edges(s))
            out << "  " << EventTree::name(s) << " -> " << EventTree::name(e.head)
                << " [label=" << quoted(e.label + ": " + std::to_string(e.count)) << "];\n";
    out << "}\n";
    return out.str();
}

std::string ceg_dot(const EventTree& tree, const Hyperstage& hyperstage, const FullStaging& staging,
                    const ProbabilityTable& probs) {
    const auto positions = compute_positions(tree, hyperstage, staging);
    const auto colour = stage_colours(tree, staging);
    auto node = [&](std::size_t p) { return p == positions.sink() ? std::string("w_inf") : "w" + std::to_string(p); };
    std::ostringstream out;
    out << "digraph ceg {\n"
        << "  rankdir=LR;\n"
        << "  node [shape=circle, style=filled, fillcolor=white, fontsize=10];\n";
    for (std::size_t p = 0; p < positions.positions.size(); ++p) {
        const auto& members = positions.positions[p];
        std::string label = node(p) + "\n";
        for (std::size_t i = 0; i < members.size(); ++i) label += (i ? "," : "") + EventTree::name(members[i]);
        out << "  " << node(p) << " [label=" << quoted(label);
        if (!colour[members.front()].empty()) out << ", fillcolor=" << quoted(colour[members.front()]);
        out << "];\n";
    }
    out << "  w_inf [label=\"w_inf\", shape=doublecircle];\n";
    for (std::size_t p = 0; p < positions.positions.size(); ++p) {
        const VertexId rep = positions.positions[p].front();
        const auto out_edges = tree.out_edges(rep);
        if (probs.at(rep).size() != out_edges.size())
            fail(ErrorKind::InvalidArgument, "probability table does not match " + EventTree::name(rep));
        for (std::size_t e = 0; e < out_edges.size(); ++e) {
            char prob[32];
            std::snprintf(prob, sizeof prob, "%.3f", probs[rep][e]);
            out << "  " << node(p) << " -> " << node(positions.position_of[out_edges[e].head])
                << " [label=" << quoted(out_edges[e].label + ": " + prob) << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace cegbma
