#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "girg/graph.hpp"

namespace girg {

// 2 ln ln n / |ln(beta - 2)|
double average_distance_target(std::size_t n, double beta);

struct FitRange {
    std::size_t d_lo = 5;
    std::size_t d_hi = 100;
};

struct DegreeReport {
    // (d, #{v : deg(v) >= d}) for d = 0 .. max_degree + 1.
    std::vector<std::pair<std::size_t, std::size_t>> ccdf;
    std::size_t max_degree = 0;
    double mean_degree = 0.0;
    // Least-squares slope of ln ccdf(d) against ln d; NaN when no fit was requested.
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    double slope_stderr = std::numeric_limits<double>::quiet_NaN();
    std::size_t fit_points = 0;

    std::size_t ccdf_at(std::size_t d) const noexcept {
        return d < ccdf.size() ? ccdf[d].second : 0;
    }
};

// The fit uses a log-spaced grid (16 points per decade) of integer degrees in
// [d_lo, d_hi] with non-zero counts. Throws std::domain_error for an invalid or
// empty fit range.
DegreeReport degree_report(const Graph& graph, std::optional<FitRange> fit = std::nullopt);

struct ComponentReport {
    std::vector<std::uint32_t> component_ids;  // 0 = largest component
    std::vector<std::size_t> sizes;            // descending
    double giant_fraction = 0.0;
    std::size_t second_size = 0;

    std::size_t count() const noexcept { return sizes.size(); }
};

ComponentReport components(const Graph& graph);

struct CoreReport {
    std::size_t core_vertices = 0;
    bool core_connected = false;
    // Largest finite distance inside the induced core subgraph.
    std::size_t core_diameter = 0;
    std::size_t core_components = 0;
};

// Throws std::domain_error when no vertex reaches w_bar.
CoreReport core_report(const Graph& graph);

enum class GreedyStop { ReachedCore, LocalMaximum, StepCap };

struct GreedyPath {
    std::vector<Vertex> path;
    bool reached_core = false;
    GreedyStop stop = GreedyStop::LocalMaximum;
};

// 10 ln ln n, at least 1.
std::size_t greedy_step_cap(std::size_t n);

// Repeatedly moves to the heaviest neighbour (ties to the smaller id) until the
// heavy core is reached, the step cap is hit, or no neighbour is heavier than the
// current vertex. The last case covers every revisit, since a walk that never
// decreases in weight cannot return to an earlier vertex.
GreedyPath greedy_path(const Graph& graph, Vertex v);

struct Neighbourhood {
    std::vector<Vertex> vertices;  // sorted, contains the start vertex
    bool hit_heavy = false;        // some member has a neighbour of weight >= w
    std::size_t depth = 0;         // deepest BFS layer reached
};

// BFS to depth k from v through vertices of weight < w (v itself always included).
Neighbourhood restricted_neighborhood(const Graph& graph, Vertex v, double w, std::size_t k);

struct DistanceReport {
    std::size_t sampled_pairs = 0;
    bool exhaustive = false;
    double mean_distance = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double ratio = 0.0;
    // Largest eccentricity seen by double-sweep BFS: a lower bound on the diameter.
    std::size_t diameter_estimate = 0;
    bool diameter_is_exact = false;
    std::size_t giant_size = 0;
};

struct DistanceOptions {
    std::size_t sweeps = 32;
    // Exact diameter by all-sources BFS when the giant has at most this many vertices.
    std::size_t exact_diameter_limit = 10000;
};

// Samples n_pairs uniform pairs of distinct giant-component vertices (or takes
// every pair when n_pairs covers them all). Throws std::domain_error when the
// giant component has fewer than two vertices or n_pairs == 0.
DistanceReport distance_report(const Graph& graph, std::size_t n_pairs, std::uint64_t seed,
                               const ComponentReport* comps = nullptr, DistanceOptions options = {});

// Reusable BFS scratch space. Distances are kUnreached for unreachable vertices.
class BfsScratch {
public:
    static constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

    explicit BfsScratch(std::size_t n);

    // Full single-source BFS. Returns distances indexed by vertex.
    std::span<const std::uint32_t> run(const Graph& graph, Vertex source);

    // Bidirectional BFS distance; kUnreached when disconnected.
    std::uint32_t distance(const Graph& graph, Vertex s, Vertex t);

    // Farthest vertex from the last run() and its distance.
    std::pair<Vertex, std::uint32_t> farthest() const noexcept { return farthest_; }

private:
    std::vector<std::uint32_t> dist_;
    std::vector<std::uint32_t> stamp_a_, stamp_b_;
    std::vector<std::uint32_t> dist_a_, dist_b_;
    std::vector<Vertex> queue_, frontier_a_, frontier_b_, next_;
    std::uint32_t epoch_ = 0;
    std::pair<Vertex, std::uint32_t> farthest_{0, 0};
};

}  // namespace girg
