#include "girg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "girg/rng.hpp"
#include "girg/union_find.hpp"

namespace girg {

double average_distance_target(std::size_t n, double beta) {
    return 2.0 * std::log(std::log(static_cast<double>(n))) / std::abs(std::log(beta - 2.0));
}

DegreeReport degree_report(const Graph& graph, std::optional<FitRange> fit) {
    const std::size_t n = graph.num_vertices();
    DegreeReport r;
    std::vector<std::size_t> hist;
    for (Vertex v = 0; v < n; ++v) {
        const std::size_t deg = graph.degree(v);
        if (deg >= hist.size()) hist.resize(deg + 1, 0);
        ++hist[deg];
        r.max_degree = std::max(r.max_degree, deg);
    }
    hist.resize(r.max_degree + 2, 0);
    r.ccdf.resize(r.max_degree + 2);
    std::size_t above = 0;
    for (std::size_t d = hist.size(); d-- > 0;) {
        above += hist[d];
        r.ccdf[d] = {d, above};
    }
    r.mean_degree = n == 0 ? 0.0 : 2.0 * static_cast<double>(graph.num_edges()) / static_cast<double>(n);

    if (!fit) return r;
    if (fit->d_lo < 1 || fit->d_hi <= fit->d_lo) throw std::domain_error("degree_report: need 1 <= d_lo < d_hi");
    std::vector<std::size_t> grid;
    const double lo = static_cast<double>(fit->d_lo);
    for (int i = 0;; ++i) {
        const double x = lo * std::pow(10.0, i / 16.0);
        const auto d = static_cast<std::size_t>(std::llround(x));
        if (d > fit->d_hi) break;
        if (grid.empty() || grid.back() != d) grid.push_back(d);
    }
    if (grid.back() != fit->d_hi) grid.push_back(fit->d_hi);

    std::vector<double> xs, ys;
    for (std::size_t d : grid) {
        const std::size_t c = r.ccdf_at(d);
        if (c == 0) continue;
        xs.push_back(std::log(static_cast<double>(d)));
        ys.push_back(std::log(static_cast<double>(c)));
    }
    if (xs.size() < 2) throw std::domain_error("degree_report: fewer than two fit points with non-zero counts");

    const double m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    r.fitted_slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + r.fitted_slope * (xs[i] - mx));
        rss += e * e;
    }
    r.slope_stderr = xs.size() > 2 ? std::sqrt(rss / (m - 2.0) / sxx) : 0.0;
    r.fit_points = xs.size();
    return r;
}

ComponentReport components(const Graph& graph) {
    const std::size_t n = graph.num_vertices();
    UnionFind uf(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v : graph.neighbors(u))
            if (u < v) uf.unite(u, v);

    // Relabel roots so that label 0 is the largest component; ties go to the
    // component containing the smaller vertex id.
    std::vector<std::uint32_t> root_label(n, UINT32_MAX);
    std::vector<std::pair<std::size_t, std::uint32_t>> roots;  // (size, root) in first-seen order
    for (Vertex v = 0; v < n; ++v) {
        const auto r = uf.find(v);
        if (root_label[r] == UINT32_MAX) {
            root_label[r] = static_cast<std::uint32_t>(roots.size());
            roots.emplace_back(uf.set_size(r), r);
        }
    }
    std::vector<std::uint32_t> order(roots.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return roots[a].first > roots[b].first; });
    std::vector<std::uint32_t> rank(order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    ComponentReport rep;
    rep.component_ids.resize(n);
    for (Vertex v = 0; v < n; ++v) rep.component_ids[v] = rank[root_label[uf.find(v)]];
    rep.sizes.resize(order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) rep.sizes[i] = roots[order[i]].first;
    rep.giant_fraction = n == 0 ? 0.0 : static_cast<double>(rep.sizes.front()) / static_cast<double>(n);
    rep.second_size = rep.sizes.size() > 1 ? rep.sizes[1] : 0;
    return rep;
}

CoreReport core_report(const Graph& graph) {
    const auto& w = graph.weights();
    CoreReport r;
    std::vector<Vertex> core;
    for (Vertex v = 0; v < graph.num_vertices(); ++v)
        if (graph.weight(v) >= w.w_bar()) core.push_back(v);
    r.core_vertices = core.size();
    if (core.empty()) throw std::domain_error("core_report: empty heavy core");

    std::vector<std::int32_t> local(graph.num_vertices(), -1);
    for (std::size_t i = 0; i < core.size(); ++i) local[core[i]] = static_cast<std::int32_t>(i);

    std::vector<std::uint32_t> dist(core.size());
    std::vector<std::uint32_t> queue;
    std::vector<bool> seen_component(core.size(), false);
    r.core_components = 0;
    for (std::size_t s = 0; s < core.size(); ++s) {
        std::fill(dist.begin(), dist.end(), BfsScratch::kUnreached);
        dist[s] = 0;
        queue.assign(1, static_cast<std::uint32_t>(s));
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const auto x = queue[h];
            for (Vertex y : graph.neighbors(core[x])) {
                const auto ly = local[y];
                if (ly < 0 || dist[ly] != BfsScratch::kUnreached) continue;
                dist[ly] = dist[x] + 1;
                r.core_diameter = std::max<std::size_t>(r.core_diameter, dist[ly]);
                queue.push_back(static_cast<std::uint32_t>(ly));
            }
        }
        if (!seen_component[s]) {
            ++r.core_components;
            for (auto x : queue) seen_component[x] = true;
        }
    }
    r.core_connected = r.core_components == 1;
    return r;
}

std::size_t greedy_step_cap(std::size_t n) {
    const double cap = std::floor(10.0 * std::log(std::log(static_cast<double>(std::max<std::size_t>(n, 3)))));
    return std::max<std::size_t>(1, static_cast<std::size_t>(cap));
}

GreedyPath greedy_path(const Graph& graph, Vertex v) {
    const double w_bar = graph.weights().w_bar();
    const std::size_t cap = greedy_step_cap(graph.num_vertices());
    GreedyPath g;
    g.path.push_back(v);
    Vertex cur = v;
    for (;;) {
        if (graph.weight(cur) >= w_bar) {
            g.reached_core = true;
            g.stop = GreedyStop::ReachedCore;
            return g;
        }
        if (g.path.size() > cap) {
            g.stop = GreedyStop::StepCap;
            return g;
        }
        const auto nb = graph.neighbors(cur);
        if (nb.empty()) {
            g.stop = GreedyStop::LocalMaximum;
            return g;
        }
        Vertex best = nb.front();
        for (Vertex u : nb)
            if (graph.weight(u) > graph.weight(best) || (graph.weight(u) == graph.weight(best) && u < best)) best = u;
        if (!(graph.weight(best) > graph.weight(cur))) {
            g.stop = GreedyStop::LocalMaximum;
            return g;
        }
        g.path.push_back(best);
        cur = best;
    }
}

Neighbourhood restricted_neighborhood(const Graph& graph, Vertex v, double w, std::size_t k) {
    Neighbourhood r;
    std::vector<Vertex> frontier{v}, next;
    std::vector<bool> seen(graph.num_vertices(), false);
    seen[v] = true;
    r.vertices.push_back(v);
    const auto scan_heavy = [&](Vertex x) {
        if (r.hit_heavy) return;
        for (Vertex y : graph.neighbors(x))
            if (graph.weight(y) >= w) {
                r.hit_heavy = true;
                return;
            }
    };
    scan_heavy(v);
    for (std::size_t depth = 1; depth <= k && !frontier.empty(); ++depth) {
        next.clear();
        for (Vertex x : frontier)
            for (Vertex y : graph.neighbors(x)) {
                if (seen[y] || !(graph.weight(y) < w)) continue;
                seen[y] = true;
                next.push_back(y);
                r.vertices.push_back(y);
                scan_heavy(y);
            }
        if (!next.empty()) r.depth = depth;
        frontier.swap(next);
    }
    std::sort(r.vertices.begin(), r.vertices.end());
    return r;
}

BfsScratch::BfsScratch(std::size_t n)
    : dist_(n, kUnreached), stamp_a_(n, 0), stamp_b_(n, 0), dist_a_(n, 0), dist_b_(n, 0) {}

std::span<const std::uint32_t> BfsScratch::run(const Graph& graph, Vertex source) {
    std::fill(dist_.begin(), dist_.end(), kUnreached);
    queue_.clear();
    queue_.push_back(source);
    dist_[source] = 0;
    farthest_ = {source, 0};
    for (std::size_t h = 0; h < queue_.size(); ++h) {
        const Vertex x = queue_[h];
        for (Vertex y : graph.neighbors(x)) {
            if (dist_[y] != kUnreached) continue;
            dist_[y] = dist_[x] + 1;
            queue_.push_back(y);
        }
    }
    const Vertex last = queue_.back();
    farthest_ = {last, dist_[last]};
    return dist_;
}

std::uint32_t BfsScratch::distance(const Graph& graph, Vertex s, Vertex t) {
    if (s == t) return 0;
    if (++epoch_ == 0) {
        std::fill(stamp_a_.begin(), stamp_a_.end(), 0);
        std::fill(stamp_b_.begin(), stamp_b_.end(), 0);
        epoch_ = 1;
    }
    stamp_a_[s] = epoch_;
    dist_a_[s] = 0;
    stamp_b_[t] = epoch_;
    dist_b_[t] = 0;
    frontier_a_.assign(1, s);
    frontier_b_.assign(1, t);

    // Expands one full layer of the side with the cheaper frontier. A meeting found
    // while completing a layer is a shortest path.
    const auto expand = [&](std::vector<Vertex>& frontier, std::vector<std::uint32_t>& stamp_self,
                            std::vector<std::uint32_t>& dist_self, const std::vector<std::uint32_t>& stamp_other,
                            const std::vector<std::uint32_t>& dist_other) -> std::uint32_t {
        std::uint32_t best = kUnreached;
        next_.clear();
        for (Vertex x : frontier)
            for (Vertex y : graph.neighbors(x)) {
                if (stamp_other[y] == epoch_) best = std::min(best, dist_self[x] + 1 + dist_other[y]);
                if (stamp_self[y] == epoch_) continue;
                stamp_self[y] = epoch_;
                dist_self[y] = dist_self[x] + 1;
                next_.push_back(y);
            }
        frontier.swap(next_);
        return best;
    };

    const auto volume = [&](const std::vector<Vertex>& f) {
        std::size_t s = 0;
        for (Vertex x : f) s += graph.degree(x);
        return s;
    };
    while (!frontier_a_.empty() && !frontier_b_.empty()) {
        std::uint32_t best;
        if (volume(frontier_a_) <= volume(frontier_b_))
            best = expand(frontier_a_, stamp_a_, dist_a_, stamp_b_, dist_b_);
        else
            best = expand(frontier_b_, stamp_b_, dist_b_, stamp_a_, dist_a_);
        if (best != kUnreached) return best;
    }
    return kUnreached;
}

DistanceReport distance_report(const Graph& graph, std::size_t n_pairs, std::uint64_t seed,
                               const ComponentReport* comps, DistanceOptions options) {
    if (n_pairs == 0) throw std::domain_error("distance_report: n_pairs must be positive");
    ComponentReport local;
    if (!comps) {
        local = components(graph);
        comps = &local;
    }
    std::vector<Vertex> giant;
    for (Vertex v = 0; v < graph.num_vertices(); ++v)
        if (comps->component_ids[v] == 0) giant.push_back(v);
    if (giant.size() < 2) throw std::domain_error("distance_report: largest component has fewer than two vertices");

    DistanceReport r;
    r.giant_size = giant.size();
    r.target = average_distance_target(graph.num_vertices(), graph.weights().beta());
    BfsScratch bfs(graph.num_vertices());

    const std::uint64_t g = giant.size();
    const std::uint64_t all_pairs = g * (g - 1) / 2;
    double sum = 0.0, sum_sq = 0.0;
    if (n_pairs >= all_pairs) {
        r.exhaustive = true;
        r.sampled_pairs = all_pairs;
        for (std::size_t i = 0; i < giant.size(); ++i) {
            const auto dist = bfs.run(graph, giant[i]);
            for (std::size_t j = i + 1; j < giant.size(); ++j) {
                const double x = dist[giant[j]];
                sum += x;
                sum_sq += x * x;
            }
        }
    } else {
        r.sampled_pairs = n_pairs;
        SplitMix64 rng(mix_seed(seed, 0x64697374ULL));
        for (std::size_t i = 0; i < n_pairs; ++i) {
            const auto a = rng.below(g);
            auto b = rng.below(g - 1);
            if (b >= a) ++b;
            const double x = bfs.distance(graph, giant[a], giant[b]);
            sum += x;
            sum_sq += x * x;
        }
    }
    const double m = static_cast<double>(r.sampled_pairs);
    r.mean_distance = sum / m;
    const double var = m > 1 ? std::max(0.0, (sum_sq - m * r.mean_distance * r.mean_distance) / (m - 1.0)) : 0.0;
    r.std_error = r.exhaustive ? 0.0 : std::sqrt(var / m);
    r.ratio = r.mean_distance / r.target;

    if (giant.size() <= options.exact_diameter_limit) {
        r.diameter_is_exact = true;
        for (Vertex s : giant) {
            bfs.run(graph, s);
            r.diameter_estimate = std::max<std::size_t>(r.diameter_estimate, bfs.farthest().second);
        }
    } else {
        SplitMix64 rng(mix_seed(seed, 0x6469616dULL));
        for (std::size_t i = 0; i < options.sweeps; ++i) {
            bfs.run(graph, giant[rng.below(g)]);
            const Vertex far = bfs.farthest().first;
            bfs.run(graph, far);
            r.diameter_estimate = std::max<std::size_t>(r.diameter_estimate, bfs.farthest().second);
        }
    }
    return r;
}

}  // namespace girg
