#include "evotree/tree.hpp"

#include <stdexcept>
#include <utility>

namespace evotree {

NodeId EvolvingTree::add_root(std::string name, std::string label) {
    if (!nodes_.empty()) throw std::logic_error("root already exists");
    if (name.empty()) throw std::invalid_argument("node name must be non-empty");
    const NodeId id = 0;
    nodes_.push_back(NodeRecord{std::move(name), std::move(label), NodeKind::real, 0, 0});
    by_name_.emplace(nodes_.back().name, id);
    real_ids_.push_back(id);
    incident_segments_.emplace_back();
    parent_of_.push_back(no_node);
    return id;
}

NodeId EvolvingTree::add_child(std::string_view parent_name, std::string name,
                               std::string label, double desired_length) {
    if (nodes_.empty()) throw std::logic_error("tree has no root");
    if (name.empty()) throw std::invalid_argument("node name must be non-empty");
    if (!(desired_length > 0.0)) throw std::invalid_argument("desired length must be positive");
    const auto pit = by_name_.find(std::string(parent_name));
    if (pit == by_name_.end())
        throw std::invalid_argument("unknown parent: " + std::string(parent_name));
    if (by_name_.contains(name))
        throw std::invalid_argument("duplicate node name: " + name);

    const NodeId parent = pit->second;
    if (nodes_[parent].kind != NodeKind::real)
        throw std::invalid_argument("parent must be a real node");

    const NodeId id = static_cast<NodeId>(nodes_.size());
    const auto rank = static_cast<std::uint32_t>(real_ids_.size());
    const int t = static_cast<int>(rank);  // one real insertion per timestep
    nodes_.push_back(NodeRecord{std::move(name), std::move(label), NodeKind::real, t, rank});
    by_name_.emplace(nodes_.back().name, id);
    incident_segments_.emplace_back();
    parent_of_.push_back(parent);

    // Extend the tree-distance store: the path to any existing real node
    // runs through the parent.
    const std::uint32_t prank = nodes_[parent].real_rank;
    distances_.resize(distances_.size() + rank);
    for (std::uint32_t k = 0; k < rank; ++k) {
        const double via = (k == prank) ? 0.0 : distances_[pair_index(k, prank)];
        distances_[pair_index(k, rank)] = via + desired_length;
    }
    real_ids_.push_back(id);

    edges_.push_back(EdgeRecord{parent, id, desired_length, t, {parent, id}});
    rebuild_segments();
    return id;
}

std::vector<NodeId> EvolvingTree::subdivide_edge(int edge_index, int n_s) {
    if (edge_index < 0 || static_cast<std::size_t>(edge_index) >= edges_.size())
        throw std::out_of_range("edge index out of range");
    if (n_s < 0) throw std::invalid_argument("subdivision count must be non-negative");
    EdgeRecord& e = edges_[static_cast<std::size_t>(edge_index)];
    if (e.chain.size() != 2) throw std::logic_error("edge already subdivided");
    std::vector<NodeId> created;
    if (n_s == 0) return created;

    std::vector<NodeId> chain;
    chain.reserve(static_cast<std::size_t>(n_s) + 2);
    chain.push_back(e.u);
    const std::string base = nodes_[e.u].name + "/" + nodes_[e.v].name + "#";
    for (int k = 0; k < n_s; ++k) {
        const NodeId id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back(NodeRecord{base + std::to_string(k), "", NodeKind::subdivision,
                                    e.inserted_at, 0});
        by_name_.emplace(nodes_.back().name, id);
        incident_segments_.emplace_back();
        parent_of_.push_back(no_node);
        chain.push_back(id);
        created.push_back(id);
    }
    chain.push_back(e.v);
    e.chain = std::move(chain);
    rebuild_segments();
    return created;
}

bool EvolvingTree::has_node(std::string_view name) const {
    return by_name_.find(std::string(name)) != by_name_.end();
}

NodeId EvolvingTree::id_of(std::string_view name) const {
    const auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) throw std::invalid_argument("unknown node: " + std::string(name));
    return it->second;
}

double EvolvingTree::tree_distance(NodeId a, NodeId b) const {
    if (a >= nodes_.size() || b >= nodes_.size()) throw std::out_of_range("node id out of range");
    if (nodes_[a].kind != NodeKind::real || nodes_[b].kind != NodeKind::real)
        throw std::invalid_argument("tree distance requires real nodes");
    if (a == b) return 0.0;
    return distances_[pair_index(nodes_[a].real_rank, nodes_[b].real_rank)];
}

void EvolvingTree::rebuild_segments() {
    segments_.clear();
    for (auto& inc : incident_segments_) inc.clear();
    for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
        const EdgeRecord& e = edges_[ei];
        const auto parts = e.chain.size() - 1;
        const double rest = e.desired_length / static_cast<double>(parts);
        for (std::size_t k = 0; k < parts; ++k) {
            const int si = static_cast<int>(segments_.size());
            segments_.push_back(Segment{e.chain[k], e.chain[k + 1], rest, static_cast<int>(ei)});
            incident_segments_[e.chain[k]].push_back(si);
            incident_segments_[e.chain[k + 1]].push_back(si);
        }
    }
}

}  // namespace evotree
