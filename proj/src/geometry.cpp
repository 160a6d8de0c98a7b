#include "girg/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "girg/io.hpp"

namespace girg {

std::string_view to_string(NormKind norm) noexcept {
    switch (norm) {
        case NormKind::MaxNorm: return "max";
        case NormKind::Euclidean: return "euclidean";
        case NormKind::MinComponent: return "min_component";
    }
    return "?";
}

NormKind parse_norm(std::string_view name) {
    if (name == "max") return NormKind::MaxNorm;
    if (name == "euclidean") return NormKind::Euclidean;
    if (name == "min_component") return NormKind::MinComponent;
    throw std::invalid_argument("unknown norm '" + std::string(name) +
                                "' (expected max | euclidean | min_component)");
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double x : coords_)
        if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("torus coordinate outside [0,1)");
}

double torus_distance_unchecked(std::span<const double> a, std::span<const double> b,
                                NormKind norm) noexcept {
    const std::size_t d = a.size();
    switch (norm) {
        case NormKind::MaxNorm: {
            double m = 0.0;
            for (std::size_t i = 0; i < d; ++i) m = std::max(m, std::abs(torus_delta(a[i], b[i])));
            return m;
        }
        case NormKind::Euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double t = torus_delta(a[i], b[i]);
                s += t * t;
            }
            return std::sqrt(s);
        }
        case NormKind::MinComponent: {
            double m = INFINITY;
            for (std::size_t i = 0; i < d; ++i) m = std::min(m, std::abs(torus_delta(a[i], b[i])));
            return d == 0 ? 0.0 : m;
        }
    }
    return 0.0;
}

double torus_distance(std::span<const double> a, std::span<const double> b, NormKind norm) {
    if (a.size() != b.size()) throw std::invalid_argument("torus_distance: dimension mismatch");
    return torus_distance_unchecked(a, b, norm);
}

double unit_ball_volume(std::size_t d) {
    const double h = 0.5 * static_cast<double>(d);
    return std::pow(M_PI, h) / std::tgamma(h + 1.0);
}

double max_torus_distance(std::size_t d, NormKind norm) {
    return norm == NormKind::Euclidean ? 0.5 * std::sqrt(static_cast<double>(d)) : 0.5;
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss_legendre(F&& f, double a, double b, int pieces) {
    double total = 0.0;
    const double h = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        const double half = 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < kGlNodes.size(); ++i)
            s += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
        total += s * half;
    }
    return total;
}

// V_d(r) for the Euclidean torus ball, tabulated on r in [1/2, sqrt(d)/2].
class EuclideanTable {
public:
    static constexpr std::size_t kPoints = 4097;

    double lo = 0.5;
    double hi = 0.5;
    std::vector<double> values;

    double at(double r) const {
        const double x = (r - lo) / (hi - lo) * static_cast<double>(kPoints - 1);
        const auto i = static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(kPoints - 2)));
        const double frac = std::clamp(x - static_cast<double>(i), 0.0, 1.0);
        return values[i] + frac * (values[i + 1] - values[i]);
    }
};

double euclidean_volume(double r, std::size_t d);

std::shared_ptr<const EuclideanTable> build_table(std::size_t d) {
    auto t = std::make_shared<EuclideanTable>();
    t->hi = 0.5 * std::sqrt(static_cast<double>(d));
    t->values.resize(EuclideanTable::kPoints);
    double running = 0.0;
    for (std::size_t i = 0; i < EuclideanTable::kPoints; ++i) {
        const double r = t->lo + (t->hi - t->lo) * static_cast<double>(i) /
                                     static_cast<double>(EuclideanTable::kPoints - 1);
        // V_d(r) = 2 * int_0^{1/2} V_{d-1}(sqrt(r^2 - s^2)) ds, split at the kinks
        // where the slice radius crosses sqrt(k)/2.
        std::vector<double> cuts = {0.0, 0.5};
        for (std::size_t k = 1; k < d; ++k) {
            const double s2 = r * r - 0.25 * static_cast<double>(k);
            if (s2 > 0.0 && s2 < 0.25) cuts.push_back(std::sqrt(s2));
        }
        std::sort(cuts.begin(), cuts.end());
        const auto slice = [&](double s) { return euclidean_volume(std::sqrt(std::max(0.0, r * r - s * s)), d - 1); };
        double v = 0.0;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
            if (cuts[c + 1] > cuts[c]) v += gauss_legendre(slice, cuts[c], cuts[c + 1], 4);
        running = std::max(running, std::min(1.0, 2.0 * v));
        t->values[i] = running;
    }
    t->values.back() = 1.0;
    return t;
}

const EuclideanTable& table_for(std::size_t d) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const EuclideanTable>> tables;
    {
        std::lock_guard<std::mutex> lock(mu);
        const auto it = tables.find(d);
        if (it != tables.end()) return *it->second;
    }
    // Built unlocked: the d table recurses into the d-1 table.
    auto built = build_table(d);
    std::lock_guard<std::mutex> lock(mu);
    return *tables.emplace(d, std::move(built)).first->second;
}

double euclidean_volume(double r, std::size_t d) {
    if (r <= 0.0) return 0.0;
    if (d == 1) return std::min(1.0, 2.0 * r);
    if (r <= 0.5) return unit_ball_volume(d) * std::pow(r, static_cast<double>(d));
    if (r >= 0.5 * std::sqrt(static_cast<double>(d))) return 1.0;
    return table_for(d).at(r);
}

}  // namespace

double ball_volume(double r, std::size_t d, NormKind norm) {
    if (!(r > 0.0)) return 0.0;
    const double dd = static_cast<double>(d);
    switch (norm) {
        case NormKind::MaxNorm: return std::min(1.0, std::pow(2.0 * r, dd));
        case NormKind::MinComponent: return 1.0 - std::pow(1.0 - std::min(1.0, 2.0 * r), dd);
        case NormKind::Euclidean: return euclidean_volume(r, d);
    }
    return 0.0;
}

double inverse_volume(double v, std::size_t d, NormKind norm) {
    if (!(v > 0.0)) return 0.0;
    v = std::min(v, 1.0);
    const double dd = static_cast<double>(d);
    switch (norm) {
        case NormKind::MaxNorm: return 0.5 * std::pow(v, 1.0 / dd);
        case NormKind::MinComponent: return 0.5 * (1.0 - std::pow(1.0 - v, 1.0 / dd));
        case NormKind::Euclidean: {
            const double inner = unit_ball_volume(d) * std::pow(0.5, dd);
            if (d == 1 || v <= inner) return std::pow(v / unit_ball_volume(d), 1.0 / dd);
            double lo = 0.5;
            double hi = 0.5 * std::sqrt(dd);
            while (hi - lo > 1e-13) {
                const double mid = 0.5 * (lo + hi);
                if (euclidean_volume(mid, d) >= v)
                    hi = mid;
                else
                    lo = mid;
            }
            return hi;
        }
    }
    return 0.0;
}

void write_positions(std::ostream& out, std::span<const double> flat, std::size_t d) {
    const std::size_t n = d == 0 ? 0 : flat.size() / d;
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < d; ++i) {
            if (i) out << ' ';
            out << format_double(flat[v * d + i]);
        }
        out << '\n';
    }
}

std::vector<double> read_positions(LineReader& reader, std::size_t n, std::size_t d) {
    std::vector<double> flat;
    flat.reserve(n * d);
    for (std::size_t v = 0; v < n; ++v) {
        const std::string line = reader.expect("position line");
        const auto toks = split_ws(line);
        if (toks.size() != d) reader.fail("expected " + std::to_string(d) + " coordinates");
        for (auto tok : toks) {
            double x = 0.0;
            try {
                x = parse_double(tok);
            } catch (const std::invalid_argument& e) {
                reader.fail(e.what());
            }
            if (!(x >= 0.0 && x < 1.0)) reader.fail("coordinate outside [0,1)");
            flat.push_back(x);
        }
    }
    return flat;
}

}  // namespace girg
