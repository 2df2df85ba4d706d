#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evotree {

using NodeId = std::uint32_t;

inline constexpr NodeId no_node = 0xFFFFFFFFu;

enum class NodeKind { real, subdivision };

struct NodeRecord {
    std::string name;   // unique; synthesized "<u>/<v>#k" for subdivision nodes
    std::string label;  // display text; empty for subdivision nodes
    NodeKind kind = NodeKind::real;
    int inserted_at = 0;           // timestep of the insertion that created it
    std::uint32_t real_rank = 0;   // dense rank among real nodes (real only)
};

struct EdgeRecord {
    NodeId u = 0;  // parent endpoint
    NodeId v = 0;  // child endpoint
    double desired_length = 0.0;
    int inserted_at = 0;
    std::vector<NodeId> chain;  // polyline u, s1..sk, v; {u, v} when unsubdivided
};

struct Segment {
    NodeId a = 0;
    NodeId b = 0;
    double rest_length = 0.0;  // edge desired length / segment count
    int edge_index = 0;
};

// One insertion: a node plus (except for the root) the edge to its parent.
struct Event {
    std::string name;
    std::string parent;  // empty for the root event
    std::string label;
    double length = 0.0;  // desired edge length; ignored for the root
};

// Insert-only tree over a shared id space of real and subdivision nodes.
// Ids are dense and creation-ordered, so the nodes present after any
// mutation are exactly [0, node_count()).
class EvolvingTree {
public:
    NodeId add_root(std::string name, std::string label);
    NodeId add_child(std::string_view parent_name, std::string name,
                     std::string label, double desired_length);
    // Replaces the edge's 2-point chain with n_s evenly spaced interior
    // nodes; each resulting segment gets rest length desired/(n_s+1).
    std::vector<NodeId> subdivide_edge(int edge_index, int n_s);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t real_count() const { return real_ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return nodes_.empty(); }

    const NodeRecord& node(NodeId id) const { return nodes_.at(id); }
    const EdgeRecord& edge(int index) const { return edges_.at(static_cast<std::size_t>(index)); }
    const std::vector<NodeId>& real_ids() const { return real_ids_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<int>& incident_segments(NodeId id) const { return incident_segments_.at(id); }
    // Tree parent of a real node; no_node for the root and subdivision nodes.
    NodeId parent_of(NodeId id) const { return parent_of_.at(id); }

    bool has_node(std::string_view name) const;
    NodeId id_of(std::string_view name) const;

    // Path length between two real nodes using desired edge lengths.
    double tree_distance(NodeId a, NodeId b) const;
    // Hot-path variant indexed by real rank; no validation.
    double distance_by_rank(std::uint32_t ri, std::uint32_t rj) const {
        return ri == rj ? 0.0 : distances_[pair_index(ri, rj)];
    }

private:
    void rebuild_segments();
    std::size_t pair_index(std::uint32_t ri, std::uint32_t rj) const {
        if (ri > rj) {
            const std::uint32_t t = ri;
            ri = rj;
            rj = t;
        }
        return static_cast<std::size_t>(rj) * (rj - 1) / 2 + ri;
    }

    std::vector<NodeRecord> nodes_;
    std::vector<EdgeRecord> edges_;
    std::vector<NodeId> real_ids_;                     // rank -> id
    std::vector<Segment> segments_;
    std::vector<std::vector<int>> incident_segments_;  // node id -> segment indices
    std::vector<NodeId> parent_of_;                    // node id -> parent real id
    std::vector<double> distances_;                    // triangular, by real rank
    std::unordered_map<std::string, NodeId> by_name_;
};

}  // namespace evotree
