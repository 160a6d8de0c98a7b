#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "girg/graph.hpp"
#include "girg/kernels.hpp"
#include "girg/weights.hpp"

namespace girg {

enum class SamplerKind { Naive, Grid };

std::string_view to_string(SamplerKind kind) noexcept;
SamplerKind parse_sampler(std::string_view name);  // "naive" | "grid"

struct ModelConfig {
    std::size_t n = 1000;
    double beta = 2.5;
    double w_min = 1.0;
    std::size_t d = 1;
    KernelKind kernel = ChungLuKernel{};
    std::uint64_t seed = 1;
    SamplerKind sampler = SamplerKind::Naive;
    std::optional<double> w_bar;  // heavy-core threshold override

    bool operator==(const ModelConfig&) const = default;
};

// Throws std::invalid_argument on any violated constraint, including a grid
// sampler paired with a kernel it cannot handle.
void validate_config(const ModelConfig& config);

bool grid_supports(const KernelKind& kernel) noexcept;

// Positions for all vertices, drawn before any edge, n * d values row-major.
std::vector<double> sample_positions(std::size_t n, std::size_t d, std::uint64_t seed);

// Seed of the keyed per-pair Bernoulli source.
std::uint64_t edge_seed(std::uint64_t seed) noexcept;

struct SamplerStats {
    std::uint64_t candidates = 0;      // pairs whose probability was evaluated
    std::uint64_t near_pairs = 0;      // of which enumerated exhaustively
    std::uint64_t far_candidates = 0;  // of which proposed by geometric skipping
};

// Exhaustive O(n^2) sampler: every pair {u,v} is an independent keyed Bernoulli
// trial with p = edge_probability(...).
Graph generate_naive(const ModelConfig& config, const WeightSequence& weights,
                     SamplerStats* stats = nullptr);

struct GridOptions {
    // Caps the cell hierarchy depth; 0 puts every vertex in one cell. Negative = automatic.
    int max_level = -1;
};

// Expected near-linear sampler with the same edge distribution as generate_naive.
//
// Vertices are bucketed by weight in powers of two. For each bucket pair a level
// of torus cells is chosen so the cell side is at least the radius where the
// pair's maximal probability reaches 1. Pairs in touching cells at that level
// are enumerated with the keyed pair source (so identical positions and a
// one-cell grid reproduce the naive graph exactly). Every other pair is assigned
// to the unique coarser level where its cells stop touching; those cell pairs are
// sampled by geometric skipping under the bound p_bar implied by the cell gap and
// accepted with probability p / p_bar.
//
// MinComponent distance runs one single-axis decomposition per coordinate, and
// each pair is only admitted by the axis attaining its minimum, so no pair is
// seen twice. ChungLu has no geometry and reduces to skipping per bucket pair.
//
// Throws std::invalid_argument for Distance with alpha < 1.
Graph generate_grid(const ModelConfig& config, const WeightSequence& weights,
                    SamplerStats* stats = nullptr, GridOptions options = {});

// Samples weights (honouring config.w_bar) and dispatches on config.sampler.
WeightSequence weights_for(const ModelConfig& config);
Graph generate(const ModelConfig& config, SamplerStats* stats = nullptr);

}  // namespace girg
