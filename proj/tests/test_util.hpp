#pragma once

#include <optional>
#include <vector>

#include "girg/graph.hpp"

// Graph on n vertices with the given edges. Weights default to n, n-1, ..., 1 so
// that vertex ids follow the descending-weight convention; positions are all 0 in d = 1.
inline girg::Graph make_graph(std::size_t n, std::vector<girg::Edge> edges,
                              std::optional<std::vector<double>> weights = {},
                              std::optional<double> w_bar = {}) {
    std::vector<double> w;
    if (weights) {
        w = *weights;
    } else {
        for (std::size_t i = 0; i < n; ++i) w.push_back(static_cast<double>(n - i));
    }
    auto seq = girg::WeightSequence::from_values(w, 2.5, std::nullopt, w_bar);
    return girg::Graph(std::move(seq), std::vector<double>(n, 0.0), 1, std::move(edges));
}

inline girg::Graph path_graph(std::size_t n) {
    std::vector<girg::Edge> e;
    for (girg::Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return make_graph(n, e);
}
