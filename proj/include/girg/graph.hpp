#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "girg/weights.hpp"

namespace girg {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Immutable simple undirected graph in CSR form. Vertex v carries weight
// weights()[v] and position positions()[v*d .. v*d+d).
class Graph {
public:
    Graph() = default;

    // Builds from an edge list; each unordered pair must appear at most once and
    // no self-loops are allowed (std::invalid_argument otherwise).
    Graph(WeightSequence weights, std::vector<double> positions, std::size_t d,
          std::vector<Edge> edges);

    std::size_t num_vertices() const noexcept { return weights_.size(); }
    std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }
    std::size_t dim() const noexcept { return d_; }

    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    const WeightSequence& weights() const noexcept { return weights_; }
    double weight(Vertex v) const noexcept { return weights_[v]; }
    std::span<const double> positions() const noexcept { return positions_; }
    std::span<const double> position(Vertex v) const noexcept {
        return {positions_.data() + v * d_, d_};
    }

    // Edges with u < v, sorted lexicographically.
    std::vector<Edge> edge_list() const;

    // FNV-1a over the sorted edge list.
    std::uint64_t adjacency_hash() const noexcept;

    bool operator==(const Graph& other) const = default;

private:
    WeightSequence weights_;
    std::vector<double> positions_;
    std::size_t d_ = 0;
    std::vector<std::size_t> offsets_ = {0};
    std::vector<Vertex> neighbors_;
};

// Symmetry, sorted neighbour lists, no loops or duplicates. Returns an empty
// string when valid, otherwise a description of the first violation.
std::string validate_graph(const Graph& g);

// "# girg-lab v1 n=<n> m=<m> d=<d>", edge lines "u v" (u < v), then
// "# weights" and "# positions" sections.
void write_graph(std::ostream& out, const Graph& g);
void write_graph(const std::string& path, const Graph& g);
Graph read_graph(std::istream& in);
Graph read_graph(const std::string& path);

}  // namespace girg
