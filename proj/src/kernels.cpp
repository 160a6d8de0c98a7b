#include "girg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "girg/io.hpp"
#include "girg/rng.hpp"

namespace girg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kZ99 = 2.5758293035489004;

}  // namespace

void validate_kernel(const KernelKind& kernel) {
    std::visit(overloaded{
                   [](const ChungLuKernel&) {},
                   [](const DistanceKernel& k) {
                       if (!(k.alpha > 0.0) || !std::isfinite(k.alpha))
                           throw std::invalid_argument("distance kernel: alpha must be positive and finite");
                       if (k.alpha == 1.0)
                           throw std::invalid_argument("distance kernel: alpha = 1 is not supported");
                   },
                   [](const ThresholdKernel& k) {
                       if (!(k.c_low > 0.0) || !(k.c_low <= k.c_high) || !std::isfinite(k.c_high))
                           throw std::invalid_argument("threshold kernel: need 0 < c_low <= c_high");
                   },
               },
               kernel);
}

std::string kernel_name(const KernelKind& kernel) {
    return std::visit(overloaded{
                          [](const ChungLuKernel&) { return std::string("chung_lu"); },
                          [](const DistanceKernel&) { return std::string("distance"); },
                          [](const ThresholdKernel&) { return std::string("threshold"); },
                      },
                      kernel);
}

std::string describe(const KernelKind& kernel) {
    return std::visit(overloaded{
                          [](const ChungLuKernel&) { return std::string("chung_lu"); },
                          [](const DistanceKernel& k) {
                              return "distance(alpha=" + format_double(k.alpha) +
                                     ",norm=" + std::string(to_string(k.norm)) + ")";
                          },
                          [](const ThresholdKernel& k) {
                              return "threshold(norm=" + std::string(to_string(k.norm)) +
                                     ",c_low=" + format_double(k.c_low) +
                                     ",c_high=" + format_double(k.c_high) + ")";
                          },
                      },
                      kernel);
}

double probability_at(const KernelKind& kernel, double q, double dist, std::size_t d) {
    if (const auto* k = std::get_if<DistanceKernel>(&kernel)) {
        const double vol = ball_volume(dist, d, k->norm);
        if (vol <= 0.0) return 1.0;
        if (k->alpha > 1.0) {
            // q^alpha / V^alpha = (q / V)^alpha
            const double t = q / vol;
            if (t >= 1.0) return 1.0;
            return k->alpha == 2.0 ? t * t : std::pow(t, k->alpha);
        }
        return std::min(1.0, q * std::pow(vol, -k->alpha));
    }
    if (const auto* k = std::get_if<ThresholdKernel>(&kernel)) {
        const double r = inverse_volume(std::min(1.0, q), d, k->norm);
        const double lo = k->c_low * r;
        const double hi = k->c_high * r;
        if (dist <= lo) return 1.0;
        if (dist >= hi) return 0.0;
        return (hi - dist) / (hi - lo);
    }
    return std::min(1.0, q);
}

double edge_probability(const KernelKind& kernel, double w_u, double w_v, double total_weight,
                        std::span<const double> x_u, std::span<const double> x_v) {
    const double q = w_u * w_v / total_weight;
    if (std::holds_alternative<ChungLuKernel>(kernel)) return std::min(1.0, q);
    const NormKind norm = std::holds_alternative<DistanceKernel>(kernel)
                              ? std::get<DistanceKernel>(kernel).norm
                              : std::get<ThresholdKernel>(kernel).norm;
    return probability_at(kernel, q, torus_distance(x_u, x_v, norm), x_u.size());
}

double distance_kernel_marginal(double alpha, double q) {
    const double big_q = std::pow(q, std::max(alpha, 1.0));
    if (big_q >= 1.0) return 1.0;
    const double r0 = std::pow(big_q, 1.0 / alpha);
    return r0 + big_q * (1.0 - std::pow(r0, 1.0 - alpha)) / (1.0 - alpha);
}

Ep1Result verify_ep1(const KernelKind& kernel, double w_u, double w_v, double total_weight,
                     std::span<const double> x_u, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 10000) throw std::domain_error("verify_ep1: need at least 1e4 samples");
    const std::size_t d = x_u.size();
    const double q = w_u * w_v / total_weight;

    Ep1Result r;
    r.chung_lu = std::min(1.0, q);
    if (std::holds_alternative<ChungLuKernel>(kernel)) {
        r.mean = r.chung_lu;
        r.ratio = r.ci_low = r.ci_high = 1.0;
        r.exact = r.chung_lu;
        return r;
    }

    SplitMix64 rng(mix_seed(seed, 0x657031ULL));
    std::vector<double> x_v(d);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        for (auto& c : x_v) c = rng.uniform();
        const double p = edge_probability(kernel, w_u, w_v, total_weight, x_u, x_v);
        sum += p;
        sum_sq += p * p;
    }
    const double ns = static_cast<double>(n_samples);
    r.mean = sum / ns;
    const double var = std::max(0.0, (sum_sq - ns * r.mean * r.mean) / (ns - 1.0));
    const double half = kZ99 * std::sqrt(var / ns);
    r.ratio = r.mean / r.chung_lu;
    r.ci_low = (r.mean - half) / r.chung_lu;
    r.ci_high = (r.mean + half) / r.chung_lu;

    if (const auto* k = std::get_if<DistanceKernel>(&kernel)) {
        r.exact = distance_kernel_marginal(k->alpha, q);
    } else if (const auto* t = std::get_if<ThresholdKernel>(&kernel); t && t->c_low == t->c_high) {
        r.exact = ball_volume(t->c_low * inverse_volume(std::min(1.0, q), d, t->norm), d, t->norm);
    }
    return r;
}

std::vector<Ep1Configuration> ep1_random_configurations(const KernelKind& kernel, std::size_t d,
                                                        std::size_t count, std::size_t n_samples,
                                                        std::uint64_t seed, double q_lo, double q_hi) {
    if (!(q_lo > 0.0 && q_hi >= q_lo)) throw std::domain_error("ep1_random_configurations: need 0 < q_lo <= q_hi");
    SplitMix64 rng(mix_seed(seed, 0x65703163ULL));
    std::vector<Ep1Configuration> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto& c = out[i];
        c.q = q_lo * std::pow(q_hi / q_lo, rng.uniform());
        const double split = std::pow(16.0, 2.0 * rng.uniform() - 1.0);
        c.w_u = std::sqrt(c.q) * split;
        c.w_v = std::sqrt(c.q) / split;
        c.x_u.resize(d);
        for (auto& x : c.x_u) x = rng.uniform();
        c.result = verify_ep1(kernel, c.w_u, c.w_v, 1.0, c.x_u, n_samples, mix_seed(seed, i));
    }
    return out;
}

Ep2Result verify_ep2(const KernelKind& kernel, const WeightSequence& weights, std::size_t d,
                     double eta, double delta, std::size_t n_pairs, std::uint64_t seed) {
    const std::size_t heavy = weights.core_size();
    if (heavy < 2) throw std::domain_error("verify_ep2: fewer than two heavy vertices");

    Ep2Result r;
    r.heavy_vertices = heavy;
    const double n = static_cast<double>(weights.size());
    r.bound = std::pow(n / std::pow(weights.w_bar(), weights.beta() - 1.0 - eta), -1.0 + delta);

    SplitMix64 rng(mix_seed(seed, 0x657032ULL));
    std::vector<double> x(d), y(d);
    const auto check = [&](std::size_t u, std::size_t v) {
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = rng.uniform();
            y[i] = x[i] + 0.5;
            if (y[i] >= 1.0) y[i] -= 1.0;
        }
        const auto consider = [&](double p) {
            ++r.pairs_checked;
            if (p < r.min_p) {
                r.min_p = p;
                r.worst_u = u;
                r.worst_v = v;
            }
        };
        consider(edge_probability(kernel, weights[u], weights[v], weights.total(), x, y));
        for (auto& c : y) c = rng.uniform();
        consider(edge_probability(kernel, weights[u], weights[v], weights.total(), x, y));
    };

    // The two lightest heavy vertices are the weakest pair.
    check(heavy - 1, heavy - 2);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const std::size_t u = rng.below(heavy);
        std::size_t v = rng.below(heavy - 1);
        if (v >= u) ++v;
        check(u, v);
    }
    r.pass = r.min_p >= r.bound;
    return r;
}

}  // namespace girg
