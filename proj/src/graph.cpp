#include "gbsk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gbsk/error.hpp"

namespace gbsk {

std::size_t Graph::num_edges() const {
    std::size_t e = 0;
    for (std::size_t i = 0; i < num_nodes(); i++) {
        for (std::size_t j = i + 1; j < num_nodes(); j++) {
            if (adjacency_(i, j) != 0.0) {
                e++;
            }
        }
    }
    return e;
}

Graph Graph::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != num_nodes()) {
        throw Error(ErrorKind::LengthMismatch, "permutation length differs from node count");
    }
    return Graph(select(adjacency_, perm));
}

Graph validate_graph(const Matrix &adjacency) {
    if (adjacency.empty()) {
        throw Error(ErrorKind::EmptyMatrix, "adjacency matrix has no rows");
    }
    if (!adjacency.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, "adjacency matrix is not square");
    }
    const std::size_t n = adjacency.rows();
    for (std::size_t i = 0; i < n; i++) {
        if (adjacency(i, i) != 0.0) {
            throw Error(ErrorKind::SelfLoop, "nonzero diagonal entry at node " + std::to_string(i));
        }
    }
    Matrix sym(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i + 1; j < n; j++) {
            double a = adjacency(i, j);
            double b = adjacency(j, i);
            if (!(std::abs(a - b) <= 1e-12)) {
                throw Error(ErrorKind::NotSymmetric,
                            "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
            }
            double w = 0.5 * (a + b);
            sym(i, j) = w;
            sym(j, i) = w;
        }
    }
    return Graph(std::move(sym));
}

ScaledGraph::ScaledGraph(Graph graph, double c) : graph_(std::move(graph)), c_(c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error(ErrorKind::OutOfRange, "scale factor must be positive and finite");
    }
}

Matrix ScaledGraph::scaled_adjacency() const { return c_ * graph_.adjacency(); }

Graph ScaledGraph::scaled_graph() const { return validate_graph(scaled_adjacency()); }

double ScaledGraph::spectral_product() const { return c_ * max_singular_value(graph_); }

PhotonEvent::PhotonEvent(std::vector<int> n) : counts(std::move(n)) {
    for (int x : counts) {
        if (x < 0) {
            throw Error(ErrorKind::OutOfRange, "photon counts must be non-negative");
        }
        total_ += x;
    }
}

double PhotonEvent::log_factorial() const {
    double s = 0.0;
    for (int x : counts) {
        s += std::lgamma(static_cast<double>(x) + 1.0);
    }
    return s;
}

std::vector<std::size_t> PhotonEvent::expanded_index() const {
    std::vector<std::size_t> idx;
    idx.reserve(static_cast<std::size_t>(total_));
    for (std::size_t j = 0; j < counts.size(); j++) {
        idx.insert(idx.end(), static_cast<std::size_t>(counts[j]), j);
    }
    return idx;
}

double max_singular_value(const Graph &g) { return spectral_radius(g.adjacency()); }

double dataset_scale_factor(std::span<const Graph> graphs) {
    if (graphs.empty()) {
        throw Error(ErrorKind::EmptyDataset, "no graphs to scale");
    }
    double s = 0.0;
    for (const auto &g : graphs) {
        s = std::max(s, max_singular_value(g));
    }
    return std::min(1.0, 1.0 / (s + 1e-8));
}

Matrix extended_subgraph(const ScaledGraph &g, const PhotonEvent &n) {
    if (n.modes() != g.num_nodes()) {
        throw Error(ErrorKind::LengthMismatch, "event has " + std::to_string(n.modes()) + " modes, graph has " +
                                                   std::to_string(g.num_nodes()) + " nodes");
    }
    auto idx = n.expanded_index();
    Matrix out = select(g.graph().adjacency(), idx);
    return g.scale() * out;
}

Matrix doubled_adjacency(const ScaledGraph &g) {
    Matrix a = g.scaled_adjacency();
    return direct_sum(a, a);
}

}  // namespace gbsk
