#include "girg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "girg/rng.hpp"

namespace girg {

std::string_view to_string(SamplerKind kind) noexcept {
    return kind == SamplerKind::Naive ? "naive" : "grid";
}

SamplerKind parse_sampler(std::string_view name) {
    if (name == "naive") return SamplerKind::Naive;
    if (name == "grid") return SamplerKind::Grid;
    throw std::invalid_argument("unknown sampler '" + std::string(name) + "' (expected naive | grid)");
}

bool grid_supports(const KernelKind& kernel) noexcept {
    if (const auto* k = std::get_if<DistanceKernel>(&kernel)) return k->alpha > 1.0;
    return true;
}

void validate_config(const ModelConfig& c) {
    if (c.n < 2) throw std::invalid_argument("config: n must be at least 2");
    if (c.n > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("config: n too large");
    if (!(c.beta > 2.0 && c.beta < 3.0)) throw std::invalid_argument("config: beta must lie in (2,3)");
    if (!(c.w_min > 0.0)) throw std::invalid_argument("config: w_min must be positive");
    if (c.d < 1) throw std::invalid_argument("config: dimension must be at least 1");
    if (c.w_bar && !(*c.w_bar > 0.0)) throw std::invalid_argument("config: w_bar must be positive");
    validate_kernel(c.kernel);
    if (c.sampler == SamplerKind::Grid && !grid_supports(c.kernel))
        throw std::invalid_argument("config: grid sampler needs alpha > 1 for the distance kernel");
}

std::vector<double> sample_positions(std::size_t n, std::size_t d, std::uint64_t seed) {
    SplitMix64 rng(mix_seed(seed, 0x706f73ULL));
    std::vector<double> pos(n * d);
    for (auto& x : pos) x = rng.uniform();
    return pos;
}

std::uint64_t edge_seed(std::uint64_t seed) noexcept { return mix_seed(seed, 0x65646765ULL); }

namespace {

NormKind kernel_norm(const KernelKind& kernel) {
    if (const auto* k = std::get_if<DistanceKernel>(&kernel)) return k->norm;
    if (const auto* k = std::get_if<ThresholdKernel>(&kernel)) return k->norm;
    return NormKind::MaxNorm;
}

void check_inputs(const ModelConfig& config, const WeightSequence& weights) {
    validate_config(config);
    if (weights.size() != config.n) throw std::invalid_argument("generate: weights length differs from n");
}

}  // namespace

Graph generate_naive(const ModelConfig& config, const WeightSequence& weights, SamplerStats* stats) {
    check_inputs(config, weights);
    const std::size_t n = config.n;
    const std::size_t d = config.d;
    auto pos = sample_positions(n, d, config.seed);
    const PairRng pair_rng(edge_seed(config.seed));
    const double total = weights.total();
    const auto w = weights.values();

    std::vector<Edge> edges;
    if (std::holds_alternative<ChungLuKernel>(config.kernel)) {
        for (Vertex u = 0; u < n; ++u) {
            const double wu = w[u];
            for (Vertex v = u + 1; v < n; ++v) {
                const double p = std::min(1.0, wu * w[v] / total);
                if (pair_rng.uniform(u, v) < p) edges.emplace_back(u, v);
            }
        }
    } else {
        for (Vertex u = 0; u < n; ++u) {
            const std::span<const double> xu(pos.data() + u * d, d);
            for (Vertex v = u + 1; v < n; ++v) {
                const std::span<const double> xv(pos.data() + v * d, d);
                const double p = edge_probability(config.kernel, w[u], w[v], total, xu, xv);
                if (pair_rng.uniform(u, v) < p) edges.emplace_back(u, v);
            }
        }
    }
    if (stats) {
        stats->candidates = stats->near_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        stats->far_candidates = 0;
    }
    return Graph(weights, std::move(pos), d, std::move(edges));
}

namespace {

// Geometric skipping over `count` slots with success probability p_bar. Calls
// visit(index) for every proposed slot. Restarting the walk on a fresh region is
// exact because the skip law is memoryless.
template <class Visit>
void skip_sample(std::uint64_t count, double p_bar, SplitMix64& rng, Visit&& visit) {
    if (count == 0 || !(p_bar > 0.0)) return;
    if (p_bar >= 1.0) {
        for (std::uint64_t i = 0; i < count; ++i) visit(i);
        return;
    }
    const double log_q = std::log1p(-p_bar);
    std::uint64_t i = 0;
    for (;;) {
        const double skip = std::floor(std::log(1.0 - rng.uniform()) / log_q);
        if (skip >= static_cast<double>(count - i)) return;
        i += static_cast<std::uint64_t>(skip);
        visit(i);
        if (++i >= count) return;
    }
}

struct Buckets {
    std::vector<std::size_t> begin;  // bucket k holds vertices [begin[k], begin[k+1])
    std::vector<double> top;         // largest weight in bucket k

    std::size_t count() const { return top.size(); }
    std::size_t size(std::size_t k) const { return begin[k + 1] - begin[k]; }
};

// Buckets by floor(log2(w / w_min)). Weights are sorted descending, so each
// bucket is a contiguous id range and buckets are numbered heaviest first.
Buckets make_buckets(const WeightSequence& weights) {
    Buckets b;
    const auto w = weights.values();
    const double base = weights.w_min();
    int current = -1;
    for (std::size_t v = 0; v < w.size(); ++v) {
        const int level = static_cast<int>(std::floor(std::log2(w[v] / base)));
        if (b.begin.empty() || level != current) {
            b.begin.push_back(v);
            b.top.push_back(w[v]);
            current = level;
        }
    }
    b.begin.push_back(w.size());
    return b;
}

Graph generate_chung_lu_buckets(const ModelConfig& config, const WeightSequence& weights,
                                SamplerStats& stats) {
    const std::size_t n = config.n;
    auto pos = sample_positions(n, config.d, config.seed);
    const auto w = weights.values();
    const double total = weights.total();
    const Buckets buckets = make_buckets(weights);
    const std::uint64_t seed = edge_seed(config.seed);

    std::vector<Edge> edges;
    const auto propose = [&](Vertex u, Vertex v, double p_bar, SplitMix64& rng) {
        ++stats.candidates;
        ++stats.far_candidates;
        const double p = std::min(1.0, w[u] * w[v] / total);
        if (rng.uniform() * p_bar < p) edges.emplace_back(std::min(u, v), std::max(u, v));
    };
    for (std::size_t k = 0; k < buckets.count(); ++k) {
        for (std::size_t l = k; l < buckets.count(); ++l) {
            const double p_bar = std::min(1.0, buckets.top[k] * buckets.top[l] / total);
            SplitMix64 rng(mix_seed(seed, k, l));
            const std::size_t bk = buckets.begin[k];
            const std::size_t bl = buckets.begin[l];
            if (k == l) {
                const std::size_t nk = buckets.size(k);
                for (std::size_t i = 0; i + 1 < nk; ++i) {
                    const auto u = static_cast<Vertex>(bk + i);
                    skip_sample(nk - i - 1, p_bar, rng, [&](std::uint64_t t) {
                        propose(u, static_cast<Vertex>(bk + i + 1 + t), p_bar, rng);
                    });
                }
            } else {
                const std::uint64_t nl = buckets.size(l);
                skip_sample(buckets.size(k) * nl, p_bar, rng, [&](std::uint64_t t) {
                    propose(static_cast<Vertex>(bk + t / nl), static_cast<Vertex>(bl + t % nl), p_bar, rng);
                });
            }
        }
    }
    return Graph(weights, std::move(pos), config.d, std::move(edges));
}

// Morton-ordered cells over a subset of the coordinate axes.
class CellSpace {
public:
    explicit CellSpace(std::vector<std::size_t> axes) : axes_(std::move(axes)) {}

    std::size_t dims() const { return axes_.size(); }
    const std::vector<std::size_t>& axes() const { return axes_; }

    std::uint64_t encode(const std::vector<std::uint64_t>& c, int level) const {
        std::uint64_t code = 0;
        for (int b = level - 1; b >= 0; --b)
            for (std::size_t i = 0; i < c.size(); ++i) code = (code << 1) | ((c[i] >> b) & 1U);
        return code;
    }

    void decode(std::uint64_t code, int level, std::vector<std::uint64_t>& c) const {
        const std::size_t k = dims();
        c.assign(k, 0);
        for (int b = 0; b < level; ++b)
            for (std::size_t i = k; i-- > 0;) {
                c[i] |= (code & 1U) << b;
                code >>= 1;
            }
    }

    std::uint64_t cell_of(std::span<const double> x, int level) const {
        std::vector<std::uint64_t> c(dims());
        const double side = std::ldexp(1.0, level);
        const std::uint64_t last = (std::uint64_t{1} << level) - 1;
        for (std::size_t i = 0; i < dims(); ++i)
            c[i] = std::min(last, static_cast<std::uint64_t>(x[axes_[i]] * side));
        return encode(c, level);
    }

    // Distinct cells within torus Chebyshev cell distance 1 (the cell included).
    void neighbours(std::uint64_t code, int level, std::vector<std::uint64_t>& out) const {
        out.clear();
        const std::size_t k = dims();
        const std::uint64_t side = std::uint64_t{1} << level;
        std::vector<std::uint64_t> c, nc(k);
        decode(code, level, c);
        std::size_t combos = 1;
        for (std::size_t i = 0; i < k; ++i) combos *= 3;
        for (std::size_t t = 0; t < combos; ++t) {
            std::size_t r = t;
            for (std::size_t i = 0; i < k; ++i) {
                const std::uint64_t off = r % 3;
                r /= 3;
                nc[i] = (c[i] + side + off - 1) % side;
            }
            out.push_back(encode(nc, level));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }

    bool adjacent(std::uint64_t a, std::uint64_t b, int level) const {
        const std::uint64_t side = std::uint64_t{1} << level;
        std::vector<std::uint64_t> ca, cb;
        decode(a, level, ca);
        decode(b, level, cb);
        for (std::size_t i = 0; i < dims(); ++i) {
            const std::uint64_t diff = ca[i] > cb[i] ? ca[i] - cb[i] : cb[i] - ca[i];
            if (std::min(diff, side - diff) > 1) return false;
        }
        return true;
    }

private:
    std::vector<std::size_t> axes_;
};

// One weight bucket's vertices sorted by cell at the bucket's finest level.
struct BucketCells {
    int level = 0;
    std::vector<Vertex> order;
    std::vector<std::uint64_t> codes;    // fine cell code of order[i]
    std::vector<std::uint32_t> offsets;  // 2^(dims*level) + 1 cell starts

    std::pair<std::uint32_t, std::uint32_t> range(std::uint64_t cell, int at_level, std::size_t dims) const {
        const int shift = static_cast<int>(dims) * (level - at_level);
        return {offsets[cell << shift], offsets[(cell + 1) << shift]};
    }
};

class GridSampler {
public:
    GridSampler(const ModelConfig& config, const WeightSequence& weights, GridOptions options,
                SamplerStats& stats)
        : config_(config),
          weights_(weights),
          options_(options),
          stats_(stats),
          pos_(sample_positions(config.n, config.d, config.seed)),
          pair_rng_(edge_seed(config.seed)),
          seed_(edge_seed(config.seed)),
          norm_(kernel_norm(config.kernel)),
          buckets_(make_buckets(weights)) {}

    Graph run() {
        if (norm_ == NormKind::MinComponent && config_.d > 1) {
            for (std::size_t a = 0; a < config_.d; ++a) {
                owner_axis_ = static_cast<int>(a);
                run_space(CellSpace({a}));
            }
        } else {
            std::vector<std::size_t> axes(config_.d);
            std::iota(axes.begin(), axes.end(), std::size_t{0});
            owner_axis_ = -1;
            run_space(CellSpace(axes));
        }
        return Graph(weights_, std::move(pos_), config_.d, std::move(edges_));
    }

private:
    std::span<const double> position(Vertex v) const { return {pos_.data() + v * config_.d, config_.d}; }

    // MinComponent: the axis with the smallest coordinate gap owns the pair (ties to the lower axis).
    bool owned(Vertex u, Vertex v) const {
        if (owner_axis_ < 0) return true;
        const auto xu = position(u);
        const auto xv = position(v);
        std::size_t best = 0;
        double best_gap = INFINITY;
        for (std::size_t i = 0; i < config_.d; ++i) {
            const double g = std::abs(torus_delta(xu[i], xv[i]));
            if (g < best_gap) {
                best_gap = g;
                best = i;
            }
        }
        return static_cast<int>(best) == owner_axis_;
    }

    double probability(Vertex u, Vertex v) const {
        return edge_probability(config_.kernel, weights_[u], weights_[v], weights_.total(), position(u),
                                position(v));
    }

    void try_near(Vertex u, Vertex v) {
        ++stats_.candidates;
        ++stats_.near_pairs;
        if (!owned(u, v)) return;
        if (pair_rng_.bernoulli(u, v, probability(u, v))) edges_.emplace_back(std::min(u, v), std::max(u, v));
    }

    void try_far(Vertex u, Vertex v, double p_bar, SplitMix64& rng) {
        ++stats_.candidates;
        ++stats_.far_candidates;
        if (!owned(u, v)) return;
        if (rng.uniform() * p_bar < probability(u, v)) edges_.emplace_back(std::min(u, v), std::max(u, v));
    }

    // Radius beyond which the bucket pair's maximal probability drops below 1.
    double saturation_radius(double q_bar) const {
        const double r = inverse_volume(std::min(1.0, q_bar), config_.d, norm_);
        if (const auto* t = std::get_if<ThresholdKernel>(&config_.kernel)) return t->c_high * r;
        return r;
    }

    void run_space(const CellSpace& space) {
        const std::size_t dims = space.dims();
        const std::size_t nb = buckets_.count();
        const double total = weights_.total();
        int level_cap = static_cast<int>(std::floor(std::log2(static_cast<double>(config_.n)) / dims));
        if (options_.max_level >= 0) level_cap = std::min(level_cap, options_.max_level);
        level_cap = std::max(level_cap, 0);

        std::vector<std::vector<int>> level(nb, std::vector<int>(nb, 0));
        std::vector<int> finest(nb, 0);
        for (std::size_t k = 0; k < nb; ++k)
            for (std::size_t l = 0; l < nb; ++l) {
                const double r = saturation_radius(buckets_.top[k] * buckets_.top[l] / total);
                int lv = r >= 1.0 ? 0 : static_cast<int>(std::floor(std::log2(1.0 / r)));
                lv = std::clamp(lv, 0, level_cap);
                level[k][l] = lv;
                finest[k] = std::max(finest[k], lv);
            }

        std::vector<BucketCells> cells(nb);
        for (std::size_t k = 0; k < nb; ++k) index_bucket(space, k, finest[k], cells[k]);

        for (std::size_t k = 0; k < nb; ++k)
            for (std::size_t l = k; l < nb; ++l)
                sample_bucket_pair(space, k, l, level[k][l], cells[k], cells[l], buckets_.top[k] * buckets_.top[l] / total);
    }

    void index_bucket(const CellSpace& space, std::size_t k, int lv, BucketCells& bc) const {
        bc.level = lv;
        const std::size_t begin = buckets_.begin[k];
        const std::size_t size = buckets_.size(k);
        std::vector<std::pair<std::uint64_t, Vertex>> keyed(size);
        for (std::size_t i = 0; i < size; ++i) {
            const auto v = static_cast<Vertex>(begin + i);
            keyed[i] = {space.cell_of(position(v), lv), v};
        }
        std::sort(keyed.begin(), keyed.end());
        bc.order.resize(size);
        bc.codes.resize(size);
        const std::uint64_t n_cells = std::uint64_t{1} << (space.dims() * static_cast<std::size_t>(lv));
        bc.offsets.assign(n_cells + 1, 0);
        for (std::size_t i = 0; i < size; ++i) {
            bc.order[i] = keyed[i].second;
            bc.codes[i] = keyed[i].first;
            ++bc.offsets[keyed[i].first + 1];
        }
        for (std::uint64_t c = 0; c < n_cells; ++c) bc.offsets[c + 1] += bc.offsets[c];
    }

    // Calls f(cell, begin, end) for every cell at `at_level` that holds vertices of the bucket.
    template <class F>
    void for_occupied(const BucketCells& bc, int at_level, std::size_t dims, F&& f) const {
        const int shift = static_cast<int>(dims) * (bc.level - at_level);
        std::size_t i = 0;
        while (i < bc.order.size()) {
            const std::uint64_t cell = bc.codes[i] >> shift;
            const auto [b, e] = bc.range(cell, at_level, dims);
            f(cell, b, e);
            i = e;
        }
    }

    void sample_bucket_pair(const CellSpace& space, std::size_t k, std::size_t l, int lv,
                            const BucketCells& ck, const BucketCells& cl, double q_bar) {
        const std::size_t dims = space.dims();
        const bool same = k == l;
        std::vector<std::uint64_t> nbrs, parent_nbrs;

        for_occupied(ck, lv, dims, [&](std::uint64_t a, std::uint32_t ab, std::uint32_t ae) {
            space.neighbours(a, lv, nbrs);
            for (std::uint64_t b : nbrs) {
                if (same && b < a) continue;
                if (same && b == a) {
                    for (std::uint32_t i = ab; i < ae; ++i)
                        for (std::uint32_t j = i + 1; j < ae; ++j) try_near(ck.order[i], ck.order[j]);
                    continue;
                }
                const auto [bb, be] = cl.range(b, lv, dims);
                for (std::uint32_t i = ab; i < ae; ++i)
                    for (std::uint32_t j = bb; j < be; ++j) try_near(ck.order[i], cl.order[j]);
            }
        });

        const std::uint64_t children = std::uint64_t{1} << dims;
        for (int j = 2; j <= lv; ++j) {
            const double gap = std::ldexp(1.0, -j);
            const double p_bar = probability_at(config_.kernel, q_bar, gap, config_.d);
            if (!(p_bar > 0.0)) continue;
            for_occupied(ck, j, dims, [&](std::uint64_t a, std::uint32_t ab, std::uint32_t ae) {
                space.neighbours(a >> dims, j - 1, parent_nbrs);
                for (std::uint64_t p : parent_nbrs) {
                    for (std::uint64_t t = 0; t < children; ++t) {
                        const std::uint64_t b = (p << dims) | t;
                        if (same && b < a) continue;
                        if (space.adjacent(a, b, j)) continue;
                        const auto [bb, be] = cl.range(b, j, dims);
                        if (bb == be) continue;
                        SplitMix64 rng(mix_seed(mix_seed(seed_, k * 1024 + l, static_cast<std::uint64_t>(j) * 64 +
                                                                                   static_cast<std::uint64_t>(owner_axis_ + 1)),
                                                a, b));
                        const std::uint64_t width = be - bb;
                        skip_sample(static_cast<std::uint64_t>(ae - ab) * width, p_bar, rng, [&](std::uint64_t s) {
                            try_far(ck.order[ab + s / width], cl.order[bb + s % width], p_bar, rng);
                        });
                    }
                }
            });
        }
    }

    const ModelConfig& config_;
    const WeightSequence& weights_;
    GridOptions options_;
    SamplerStats& stats_;
    std::vector<double> pos_;
    PairRng pair_rng_;
    std::uint64_t seed_;
    NormKind norm_;
    Buckets buckets_;
    int owner_axis_ = -1;
    std::vector<Edge> edges_;
};

}  // namespace

Graph generate_grid(const ModelConfig& config, const WeightSequence& weights, SamplerStats* stats,
                    GridOptions options) {
    check_inputs(config, weights);
    if (!grid_supports(config.kernel))
        throw std::invalid_argument("generate_grid: distance kernel requires alpha > 1");
    SamplerStats local;
    SamplerStats& s = stats ? *stats : local;
    s = {};
    if (std::holds_alternative<ChungLuKernel>(config.kernel)) return generate_chung_lu_buckets(config, weights, s);
    return GridSampler(config, weights, options, s).run();
}

WeightSequence weights_for(const ModelConfig& config) {
    validate_config(config);
    auto w = sample_weights(config.n, config.beta, config.w_min, config.seed);
    if (config.w_bar) w = w.with_w_bar(*config.w_bar);
    return w;
}

Graph generate(const ModelConfig& config, SamplerStats* stats) {
    const auto weights = weights_for(config);
    return config.sampler == SamplerKind::Naive ? generate_naive(config, weights, stats)
                                                : generate_grid(config, weights, stats);
}

}  // namespace girg
