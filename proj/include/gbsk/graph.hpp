#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gbsk/linalg.hpp"

namespace gbsk {

/// Simple undirected weighted graph stored as a dense symmetric adjacency
/// matrix with zero diagonal. Construct through validate_graph().
class Graph {
   public:
    std::size_t num_nodes() const noexcept { return adjacency_.rows(); }
    const Matrix &adjacency() const noexcept { return adjacency_; }

    /// Number of nonzero off-diagonal pairs.
    std::size_t num_edges() const;
    double weight(std::size_t i, std::size_t j) const noexcept { return adjacency_(i, j); }

    /// Graph with nodes relabelled so that new node i is old node perm[i].
    Graph permuted(std::span<const std::size_t> perm) const;

    bool operator==(const Graph &) const = default;

   private:
    friend Graph validate_graph(const Matrix &adjacency);
    explicit Graph(Matrix adjacency) : adjacency_(std::move(adjacency)) {}

    Matrix adjacency_;
};

/// Checks symmetry (|A_ij - A_ji| <= 1e-12), zero diagonal and non-emptiness,
/// then stores the averaged, exactly symmetric matrix.
Graph validate_graph(const Matrix &adjacency);

/// Graph paired with the rescaling constant c. The bound c * s_max < 1 is not
/// enforced here; encode() rejects graphs that violate it.
class ScaledGraph {
   public:
    ScaledGraph(Graph graph, double c);

    const Graph &graph() const noexcept { return graph_; }
    double scale() const noexcept { return c_; }
    std::size_t num_nodes() const noexcept { return graph_.num_nodes(); }

    /// c * A
    Matrix scaled_adjacency() const;
    /// The graph whose edge weights are c * A.
    Graph scaled_graph() const;
    /// c * s_max(A)
    double spectral_product() const;
    bool within_bound() const { return spectral_product() < 1.0; }

   private:
    Graph graph_;
    double c_;
};

struct PhotonEvent {
    std::vector<int> counts;

    PhotonEvent() = default;
    explicit PhotonEvent(std::vector<int> n);

    std::size_t modes() const noexcept { return counts.size(); }
    int total() const noexcept { return total_; }
    /// log(n_1! n_2! ... n_M!)
    double log_factorial() const;
    /// Mode indices with each mode j repeated counts[j] times, ascending.
    std::vector<std::size_t> expanded_index() const;

    bool operator==(const PhotonEvent &) const = default;

   private:
    int total_ = 0;
};

/// Largest singular value of the adjacency matrix.
double max_singular_value(const Graph &g);

/// c = min(1, 1 / (max_G s_max(G) + 1e-8)); an edgeless dataset gets c = 1.
double dataset_scale_factor(std::span<const Graph> graphs);

/// A_n: rows/columns of c * A repeated n_j times. Copies of one node stay
/// mutually unconnected.
Matrix extended_subgraph(const ScaledGraph &g, const PhotonEvent &n);

/// c (A (+) A), the 2M x 2M block-diagonal doubled adjacency.
Matrix doubled_adjacency(const ScaledGraph &g);

}  // namespace gbsk
