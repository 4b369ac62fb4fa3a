#include "cegbma/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cegbma/error.hpp"
#include "json_util.hpp"

namespace cegbma {

using detail::Json;

namespace {

// Splits one logical CSV record; quoted fields may span lines.
bool next_row(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) fail(ErrorKind::InvalidInput, "unterminated quoted CSV field");
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

template <class F>
auto guarded(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidInput, what + ": " + e.what());
    }
}

PathRecord labels_of(const Json& j) {
    PathRecord out;
    for (const auto& x : j) out.push_back(x.get<std::string>());
    return out;
}

void nested_edges(const Json& node, PathRecord& prefix, std::vector<PathRecord>& edges) {
    if (!node.is_object()) fail(ErrorKind::InvalidInput, "tree spec structure must be nested objects");
    for (const auto& [label, child] : node.items()) {
        prefix.push_back(label);
        edges.push_back(prefix);
        nested_edges(child, prefix, edges);
        prefix.pop_back();
    }
}

TreeSpec tree_spec_from(const Json& j) {
    TreeSpec spec;
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            PathRecord path = e.contains("path") ? labels_of(e.at("path")) : PathRecord{};
            path.push_back(e.at("label").get<std::string>());
            spec.edges.push_back(std::move(path));
        }
    }
    if (j.contains("structure")) {
        PathRecord prefix;
        nested_edges(j.at("structure"), prefix, spec.edges);
    }
    if (j.contains("counts"))
        for (const auto& c : j.at("counts")) {
            const auto n = c.at("n").get<std::int64_t>();
            if (n < 0) fail(ErrorKind::InvalidInput, "negative path count");
            spec.counts.emplace_back(labels_of(c.at("path")), static_cast<std::uint64_t>(n));
        }
    return spec;
}

Hyperstage hyperstage_from(const Json& j, const EventTree& tree) {
    const Json& blocks_json = j.is_array() ? j : j.at("blocks");
    std::map<VertexId, std::vector<std::string>> edge_order;
    if (j.is_object() && j.contains("edge_order"))
        for (const auto& [name, labels] : j.at("edge_order").items()) edge_order[tree.lookup(name)] = labels_of(labels);
    std::vector<Hyperset> blocks;
    for (const auto& b : blocks_json) {
        Hyperset h;
        for (const auto& name : b) {
            h.members.push_back(tree.lookup(name.get<std::string>()));
            if (edge_order.count(h.members.back())) h.alignment = EdgeAlignment::Explicit;
        }
        blocks.push_back(std::move(h));
    }
    return Hyperstage(std::move(blocks), std::move(edge_order));
}

}  // namespace

std::vector<PathRecord> parse_csv_records(std::istream& in, bool header) {
    std::vector<PathRecord> records;
    std::vector<std::string> fields;
    bool skip = header;
    std::size_t line = 0;
    while (next_row(in, fields)) {
        ++line;
        if (skip) {
            skip = false;
            continue;
        }
        while (!fields.empty() && fields.back().empty()) fields.pop_back();
        if (fields.empty()) continue;
        for (const auto& f : fields)
            if (f.empty()) fail(ErrorKind::InvalidInput, "CSV row " + std::to_string(line) + " has a gap in its path");
        records.push_back(fields);
    }
    return records;
}

std::vector<PathRecord> read_csv_records(const std::string& path, bool header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
    return parse_csv_records(in, header);
}

std::string format_csv_records(std::span<const PathRecord> records, std::size_t width) {
    std::string out;
    for (std::size_t c = 0; c < width; ++c) out += (c ? ",X" : "X") + std::to_string(c + 1);
    out += '\n';
    for (const auto& r : records) {
        if (r.size() > width) fail(ErrorKind::InvalidArgument, "record longer than the CSV width");
        for (std::size_t c = 0; c < width; ++c) {
            if (c) out += ',';
            if (c < r.size()) out += csv_field(r[c]);
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TreeSpec parse_tree_spec(const std::string& json_text) {
    const Json j = detail::parse_json(json_text, "tree spec");
    return guarded("tree spec", [&] { return tree_spec_from(j); });
}

std::string tree_spec_json(const TreeSpec& spec) {
    Json j;
    j["edges"] = Json::array();
    for (const auto& e : spec.edges)
        j["edges"].push_back({{"path", PathRecord(e.begin(), e.end() - 1)}, {"label", e.back()}});
    j["counts"] = Json::array();
    for (const auto& [path, n] : spec.counts) j["counts"].push_back({{"path", path}, {"n", n}});
    return j.dump(2);
}

Hyperstage parse_hyperstage(const std::string& json_text, const EventTree& tree) {
    const Json j = detail::parse_json(json_text, "hyperstage");
    return guarded("hyperstage", [&] { return hyperstage_from(j, tree); });
}

std::string hyperstage_json(const Hyperstage& hyperstage) {
    Json j;
    j["blocks"] = Json::array();
    for (const auto& b : hyperstage.blocks()) {
        Json block = Json::array();
        for (VertexId s : b.members) block.push_back(EventTree::name(s));
        j["blocks"].push_back(std::move(block));
    }
    if (!hyperstage.edge_order().empty()) {
        j["edge_order"] = Json::object();
        for (const auto& [s, labels] : hyperstage.edge_order()) j["edge_order"][EventTree::name(s)] = labels;
    }
    return j.dump(2);
}

GeneratingModel parse_generating_model(const std::string& json_text) {
    const Json j = detail::parse_json(json_text, "generating model");
    return guarded("generating model", [&] {
        auto tree = EventTree::from_spec(tree_spec_from(j));
        auto hyperstage = j.contains("hyperstage") ? hyperstage_from(j.at("hyperstage"), tree) : default_hyperstage(tree);
        if (auto report = validate_hyperstage(tree, hyperstage); !report.ok())
            fail(ErrorKind::Validation, "generating model hyperstage: " + report.violations.front());

        ProbabilityTable probs(tree.vertex_count());
        std::vector<std::vector<std::vector<VertexId>>> per_hyperset(hyperstage.size());
        for (const auto& stage : j.at("stages")) {
            std::vector<VertexId> members;
            for (const auto& name : stage.at("situations")) members.push_back(tree.lookup(name.get<std::string>()));
            if (members.empty()) fail(ErrorKind::InvalidInput, "generating model: empty stage");
            const auto block = hyperstage.block_of(members.front());
            for (VertexId s : members) {
                if (!tree.is_situation(s) || hyperstage.block_of(s) != block)
                    fail(ErrorKind::InvalidInput, "generating model: stage crosses hypersets at " + EventTree::name(s));
                if (!probs[s].empty()) fail(ErrorKind::InvalidInput, EventTree::name(s) + " is in two stages");
                const auto out = tree.out_edges(s);
                probs[s].assign(out.size(), 0.0);
                const Json& p = stage.at("probs");
                if (p.is_object()) {
                    if (p.size() != out.size())
                        fail(ErrorKind::InvalidInput, "generating model: probabilities for " + EventTree::name(s) +
                                                          " do not match its edges");
                    for (std::size_t e = 0; e < out.size(); ++e) probs[s][e] = p.at(out[e].label).get<double>();
                } else {
                    const auto order = hyperstage.aligned_edges(tree, s);
                    if (p.size() != order.size())
                        fail(ErrorKind::InvalidInput, "generating model: wrong vector length for " + EventTree::name(s));
                    for (std::size_t a = 0; a < order.size(); ++a) probs[s][order[a]] = p.at(a).get<double>();
                }
            }
            per_hyperset[*block].push_back(std::move(members));
        }
        for (VertexId s : tree.situations())
            if (probs[s].empty()) fail(ErrorKind::InvalidInput, "generating model: no stage for " + EventTree::name(s));
        FullStaging staging;
        for (std::size_t h = 0; h < hyperstage.size(); ++h) staging.emplace_back(h, std::move(per_hyperset[h]));
        GeneratingModel model{std::move(tree), std::move(hyperstage), std::move(staging), std::move(probs)};
        check_generating_model(model);
        return model;
    });
}

}  // namespace cegbma
