#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "cegbma/event_tree.hpp"
#include "cegbma/oracle.hpp"

namespace cegbma {

// One observation per row, successive edge labels per column. Trailing empty
// cells end the path early. Fields may be double-quoted.
std::vector<PathRecord> parse_csv_records(std::istream& in, bool header);
std::vector<PathRecord> read_csv_records(const std::string& path, bool header);

// Header row X1..Xd, then one row per record padded with empty cells.
std::string format_csv_records(std::span<const PathRecord> records, std::size_t width);

std::string read_text_file(const std::string& path);

// {"edges": [{"path": [...], "label": "x"}, ...], "counts": [{"path": [...], "n": 3}]}
// A nested "structure" object ({"A": {"x": {}}, "B": {}}) may replace "edges".
TreeSpec parse_tree_spec(const std::string& json_text);
std::string tree_spec_json(const TreeSpec& spec);

// [["s0"], ["s1", "s2"]] or {"blocks": [...], "edge_order": {"s5": ["a", "b"]}}.
// Blocks containing a situation with an edge_order entry use explicit alignment.
Hyperstage parse_hyperstage(const std::string& json_text, const EventTree& tree);
std::string hyperstage_json(const Hyperstage& hyperstage);

// Tree spec plus optional "hyperstage" and
// "stages": [{"situations": [...], "probs": {"label": p} | [p, ...]}].
// Array probabilities follow the hyperstage's aligned edge order.
GeneratingModel parse_generating_model(const std::string& json_text);

}  // namespace cegbma
