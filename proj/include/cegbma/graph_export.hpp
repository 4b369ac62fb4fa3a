#pragma once

#include <string>
#include <vector>

#include "cegbma/ensemble.hpp"
#include "cegbma/event_tree.hpp"
#include "cegbma/staging.hpp"

namespace cegbma {

// Positions of a staged tree. Leaves all collapse into the sink, which has
// index positions.size() in position_of.
struct PositionPartition {
    std::vector<std::vector<VertexId>> positions;  // canonical: sorted, by smallest member
    std::vector<std::size_t> position_of;          // per vertex
    std::size_t sink() const noexcept { return positions.size(); }
};

// Coarsest partition in which co-positioned situations share a stage and
// their aligned children are co-positioned (or both leaves).
PositionPartition compute_positions(const EventTree& tree, const Hyperstage& hyperstage, const FullStaging& staging);

// Fill colour per situation; empty for singleton stages. Non-singleton stages
// are coloured in order of smallest member, cycling a 12-colour palette.
std::vector<std::string> stage_colours(const EventTree& tree, const FullStaging& staging);

std::string staged_tree_dot(const EventTree& tree, const FullStaging& staging);

// CEG over positions plus the sink; edge labels carry probabilities to 3 decimals.
std::string ceg_dot(const EventTree& tree, const Hyperstage& hyperstage, const FullStaging& staging,
                    const ProbabilityTable& probs);

}  // namespace cegbma
