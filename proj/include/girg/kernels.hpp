#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "girg/geometry.hpp"
#include "girg/weights.hpp"

namespace girg {

// p_uv = min{1, w_u w_v / W}; positions are ignored.
struct ChungLuKernel {
    bool operator==(const ChungLuKernel&) const = default;
};

// p_uv = min{1, V(||x_u - x_v||)^-alpha * (w_u w_v / W)^max{alpha,1}}, with p = 1 at V = 0.
struct DistanceKernel {
    double alpha = 2.0;
    NormKind norm = NormKind::MaxNorm;
    bool operator==(const DistanceKernel&) const = default;
};

// alpha = infinity limit. With r = inverse_volume(min{1, w_u w_v / W}):
// p = 1 for dist <= c_low r, 0 for dist >= c_high r, linear in between.
struct ThresholdKernel {
    NormKind norm = NormKind::MaxNorm;
    double c_low = 1.0;
    double c_high = 1.0;
    bool operator==(const ThresholdKernel&) const = default;
};

using KernelKind = std::variant<ChungLuKernel, DistanceKernel, ThresholdKernel>;

// Throws std::invalid_argument for alpha <= 0, alpha == 1, or a bad threshold band.
void validate_kernel(const KernelKind& kernel);

// "chung_lu" | "distance" | "threshold"
std::string kernel_name(const KernelKind& kernel);
// Name plus parameters, e.g. "distance(alpha=2,norm=max)".
std::string describe(const KernelKind& kernel);

// Probability for a pair with q = w_u w_v / W at torus distance `dist` in dimension d.
double probability_at(const KernelKind& kernel, double q, double dist, std::size_t d);

double edge_probability(const KernelKind& kernel, double w_u, double w_v, double total_weight,
                        std::span<const double> x_u, std::span<const double> x_v);

struct Ep1Result {
    double mean = 0.0;       // Monte Carlo estimate of E_{x_v}[p_uv | x_u]
    double chung_lu = 0.0;   // min{1, q}
    double ratio = 0.0;      // mean / chung_lu
    double ci_low = 0.0;     // 99% normal-approximation interval on the ratio
    double ci_high = 0.0;
    std::optional<double> exact;  // closed-form marginal where one exists
};

// Closed-form marginal int_0^1 min{1, V^-alpha q^max{alpha,1}} dV. V(||x_u - x_v||)
// is uniform on [0,1] whenever V is continuous, so this holds for every norm and d.
double distance_kernel_marginal(double alpha, double q);

// Throws std::domain_error when n_samples < 1e4.
Ep1Result verify_ep1(const KernelKind& kernel, double w_u, double w_v, double total_weight,
                     std::span<const double> x_u, std::size_t n_samples, std::uint64_t seed);

struct Ep1Configuration {
    double q = 0.0;  // w_u w_v / W with W = 1
    double w_u = 0.0, w_v = 0.0;
    std::vector<double> x_u;
    Ep1Result result;
};

// verify_ep1 at `count` configurations: q log-uniform in [q_lo, q_hi], the split
// w_u / w_v log-uniform in [1/16, 16], x_u uniform.
std::vector<Ep1Configuration> ep1_random_configurations(const KernelKind& kernel, std::size_t d,
                                                        std::size_t count, std::size_t n_samples,
                                                        std::uint64_t seed, double q_lo = 1e-4,
                                                        double q_hi = 10.0);

struct Ep2Result {
    double min_p = 1.0;
    double bound = 0.0;   // (n / w_bar^(beta-1-eta))^(-1+delta)
    bool pass = false;
    std::size_t heavy_vertices = 0;
    std::size_t pairs_checked = 0;
    std::size_t worst_u = 0, worst_v = 0;
};

// Samples heavy pairs (w >= w_bar) at antipodal and at random positions.
// Throws std::domain_error when fewer than two heavy vertices exist.
Ep2Result verify_ep2(const KernelKind& kernel, const WeightSequence& weights, std::size_t d,
                     double eta, double delta, std::size_t n_pairs, std::uint64_t seed);

}  // namespace girg
