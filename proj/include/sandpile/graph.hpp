#ifndef SANDPILE_GRAPH_HPP
#define SANDPILE_GRAPH_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sandpile/matrix.hpp"

namespace sandpile {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DuplicateVertex : GraphError {
    using GraphError::GraphError;
};
struct LoopEdge : GraphError {
    using GraphError::GraphError;
};
struct SinkNotGlobal : GraphError {
    using GraphError::GraphError;
};
struct UnknownLabel : GraphError {
    using GraphError::GraphError;
};
struct BadSize : GraphError {
    using GraphError::GraphError;
};
struct BadSpec : GraphError {
    using GraphError::GraphError;
};

struct Edge {
    std::string from;
    std::string to;
    long mult = 1;
};

/// Loopless multidigraph without a sink designation; input to cone().
struct BaseGraph {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;  // undirected: each edge listed once
};

/// Finite multidigraph with a validated global sink. Immutable after
/// construction; the stored vertex order fixes all vector/matrix indexing.
class SinkedMultigraph {
public:
    static SinkedMultigraph build(std::vector<std::string> vertices, const std::string &sink,
                                  const std::vector<Edge> &edges, bool undirected);

    int vertex_count() const { return static_cast<int>(labels_.size()); }
    int nonsink_count() const { return vertex_count() - 1; }
    const std::vector<std::string> &vertex_labels() const { return labels_; }
    const std::string &sink_label() const { return labels_[sink_]; }
    int sink_index() const { return sink_; }
    bool undirected() const { return undirected_; }

    // Non-sink vertices in stored order; index i below refers to this order.
    const std::vector<std::string> &nonsink_labels() const { return nonsink_labels_; }

    // Multiplicity m(u,v) over non-sink indices, or to/from the sink via -1.
    Int multiplicity_by_label(const std::string &u, const std::string &v) const;

    IntMatrix reduced_laplacian() const;
    IntVec degree_vector() const;  // out-degrees of non-sink vertices
    IntVec sigma_max() const;      // degree_vector() - 1

    int nonsink_index(const std::string &label) const;

    std::string to_json_string(int indent = -1) const;
    static SinkedMultigraph from_json_string(const std::string &text);

private:
    std::vector<std::string> labels_;
    int sink_ = 0;
    bool undirected_ = false;
    // out_[u][v] = m(u,v), indices into labels_
    std::vector<std::map<int, Int>> out_;
    std::vector<std::string> nonsink_labels_;
    std::vector<int> nonsink_to_vertex_;
    std::vector<int> vertex_to_nonsink_;

    friend SinkedMultigraph cone(const BaseGraph &);
    SinkedMultigraph() = default;
    void finalize();
};

// Apex vertex joined to every base vertex; apex is the (global) sink.
SinkedMultigraph cone(const BaseGraph &base);

// cycle(n) n>=3, complete(n) n>=2, path(n) n>=2; sink "q", non-sink order
// follows the path away from the sink (cycle: q-v1-...-v_{n-1}-q).
SinkedMultigraph family(const std::string &name, int n);

// Undirected base graphs for cone(): cycle(n), complete(n), petersen.
BaseGraph base_family(const std::string &name, int n = 0);

BaseGraph base_from_json_string(const std::string &text);

}  // namespace sandpile

#endif
