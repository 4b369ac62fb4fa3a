#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cegbma/event_tree.hpp"

namespace cegbma {

// Partition of one hyperset's situations into stages. Kept canonical: members
// ascending inside each block, blocks ordered by smallest member. Two stagings
// of the same partition compare equal.
class Staging {
public:
    Staging() = default;
    Staging(std::size_t hyperset, std::vector<std::vector<VertexId>> blocks);

    static Staging singletons(std::size_t hyperset, const std::vector<VertexId>& members);

    std::size_t hyperset() const noexcept { return hyperset_; }
    const std::vector<std::vector<VertexId>>& blocks() const noexcept { return blocks_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    std::vector<VertexId> members() const;

    // Index of the block containing s, or size() when absent.
    std::size_t block_of(VertexId s) const;
    bool co_staged(VertexId s, VertexId t) const;

    // e.g. {{s1,s2},{s3}}
    std::string to_string() const;

    friend bool operator==(const Staging&, const Staging&) = default;
    friend auto operator<=>(const Staging&, const Staging&) = default;

private:
    std::size_t hyperset_ = 0;
    std::vector<std::vector<VertexId>> blocks_;
};

// One staging per hyperset, indexed by hyperset.
using FullStaging = std::vector<Staging>;

// Every stage of a full staging as a flat list.
std::vector<std::vector<VertexId>> all_stages(const FullStaging& staging);

}  // namespace cegbma
