#include "cegbma/staging.hpp"

#include <algorithm>

#include "cegbma/error.hpp"

namespace cegbma {

Staging::Staging(std::size_t hyperset, std::vector<std::vector<VertexId>> blocks)
    : hyperset_(hyperset), blocks_(std::move(blocks)) {
    for (auto& b : blocks_) {
        if (b.empty()) fail(ErrorKind::InvalidArgument, "staging has an empty block");
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    auto all = members();
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        fail(ErrorKind::InvalidArgument, "staging blocks overlap");
}

Staging Staging::singletons(std::size_t hyperset, const std::vector<VertexId>& members) {
    std::vector<std::vector<VertexId>> blocks;
    for (VertexId s : members) blocks.push_back({s});
    return Staging(hyperset, std::move(blocks));
}

std::vector<VertexId> Staging::members() const {
    std::vector<VertexId> out;
    for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Staging::block_of(VertexId s) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), s)) return i;
    return blocks_.size();
}

bool Staging::co_staged(VertexId s, VertexId t) const {
    const auto b = block_of(s);
    return b < blocks_.size() && std::binary_search(blocks_[b].begin(), blocks_[b].end(), t);
}

std::string Staging::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (i) out += ',';
        out += '{';
        for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
            if (j) out += ',';
            out += EventTree::name(blocks_[i][j]);
        }
        out += '}';
    }
    return out + "}";
}

std::vector<std::vector<VertexId>> all_stages(const FullStaging& staging) {
    std::vector<std::vector<VertexId>> out;
    for (const auto& s : staging) out.insert(out.end(), s.blocks().begin(), s.blocks().end());
    return out;
}

}  // namespace cegbma
