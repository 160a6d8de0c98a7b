#include "girg/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "girg/io.hpp"
#include "girg/rng.hpp"

namespace girg {

double default_w_bar(std::size_t n, double beta) {
    const double ln = std::log(static_cast<double>(n));
    return std::pow(static_cast<double>(n) / (ln * ln), 1.0 / (beta - 1.0));
}

double pareto_quantile(double u, double beta, double w_min) {
    return w_min * std::pow(1.0 - u, -1.0 / (beta - 1.0));
}

WeightSequence WeightSequence::from_values(std::vector<double> values, double beta,
                                           std::optional<double> w_min,
                                           std::optional<double> w_bar, std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("weight sequence must be non-empty");
    for (double w : values)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weights must be positive and finite");
    std::sort(values.begin(), values.end(), std::greater<>());

    WeightSequence seq;
    seq.values_ = std::move(values);
    seq.beta_ = beta;
    seq.seed_ = seed;
    seq.w_min_ = w_min.value_or(seq.values_.back());
    if (seq.values_.back() < seq.w_min_)
        throw std::invalid_argument("weight below configured w_min");

    seq.prefix_.resize(seq.values_.size() + 1);
    long double acc = 0.0L;
    seq.prefix_[0] = 0.0;
    for (std::size_t i = 0; i < seq.values_.size(); ++i) {
        acc += seq.values_[i];
        seq.prefix_[i + 1] = static_cast<double>(acc);
    }
    seq.total_ = seq.prefix_.back();

    const double wb = w_bar.value_or(default_w_bar(seq.values_.size(), beta));
    seq.w_bar_ = std::clamp(wb, seq.w_min_, seq.w_max());
    return seq;
}

std::size_t WeightSequence::core_size() const noexcept {
    return partial_sums(w_bar_).count_ge;
}

WeightSequence WeightSequence::with_w_bar(double w_bar) const {
    WeightSequence copy = *this;
    copy.w_bar_ = std::clamp(w_bar, w_min_, w_max());
    return copy;
}

PartialSums WeightSequence::partial_sums(double w) const {
    // values_ is non-increasing: partition points split ">= w" and "> w".
    const auto ge_end = std::partition_point(values_.begin(), values_.end(),
                                             [w](double x) { return x >= w; });
    const auto gt_end = std::partition_point(values_.begin(), values_.end(),
                                             [w](double x) { return x > w; });
    const auto count_ge = static_cast<std::size_t>(ge_end - values_.begin());
    const auto count_gt = static_cast<std::size_t>(gt_end - values_.begin());
    PartialSums s;
    s.count_ge = count_ge;
    s.weight_ge = prefix_[count_ge];
    s.weight_le = total_ - prefix_[count_gt];
    return s;
}

WeightSequence sample_weights(std::size_t n, double beta, double w_min, std::uint64_t seed) {
    if (n < 2) throw std::domain_error("sample_weights: n must be at least 2");
    if (!(beta > 2.0 && beta < 3.0)) throw std::domain_error("sample_weights: beta must lie in (2,3)");
    if (!(w_min > 0.0)) throw std::domain_error("sample_weights: w_min must be positive");

    SplitMix64 rng(mix_seed(seed, 0x77656967ULL));
    std::vector<double> values(n);
    for (auto& w : values) w = pareto_quantile(rng.uniform(), beta, w_min);
    return WeightSequence::from_values(std::move(values), beta, w_min, std::nullopt, seed);
}

PowerLawReport verify_power_law(const WeightSequence& weights, double eta, double c1, double c2) {
    if (!(eta > 0.0)) throw std::domain_error("verify_power_law: eta must be positive");
    if (!(c1 > 0.0 && c2 > 0.0)) throw std::domain_error("verify_power_law: c1, c2 must be positive");

    const double n = static_cast<double>(weights.size());
    const double beta = weights.beta();
    const double lo = weights.w_min();
    const double hi = weights.w_max();

    std::vector<double> grid;
    const double step = std::pow(10.0, 1.0 / 64.0);
    for (double w = lo; w <= hi; w *= step) grid.push_back(w);
    grid.push_back(hi);
    for (double w : weights.values()) {
        grid.push_back(w);
        grid.push_back(std::nextafter(w, INFINITY));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    PowerLawReport r;
    r.eta = eta;
    r.c1 = c1;
    r.c2 = c2;
    r.min_weight = weights.values().empty() ? 0.0 : weights.values().back();
    r.pl1_pass = lo > 0.0 && r.min_weight >= lo;
    r.worst_ratio_lower = INFINITY;
    r.worst_ratio_upper = 0.0;
    r.grid_points = grid.size();

    for (double w : grid) {
        if (w < lo) continue;
        const double count = static_cast<double>(weights.partial_sums(w).count_ge);
        if (w <= weights.w_bar()) {
            const double ratio = count * std::pow(w, beta - 1.0 + eta) / n;
            if (ratio < r.worst_ratio_lower) {
                r.worst_ratio_lower = ratio;
                r.worst_lower_at = w;
            }
        }
        const double ratio = count * std::pow(w, beta - 1.0 - eta) / n;
        if (ratio > r.worst_ratio_upper) {
            r.worst_ratio_upper = ratio;
            r.worst_upper_at = w;
        }
    }
    r.pl2_lower_pass = r.worst_ratio_lower >= c1;
    r.pl2_upper_pass = r.worst_ratio_upper <= c2;
    return r;
}

void write_weights(std::ostream& out, const WeightSequence& weights) {
    out << "# n=" << weights.size() << " beta=" << format_double(weights.beta())
        << " wmin=" << format_double(weights.w_min()) << " seed=" << weights.seed()
        << " wbar=" << format_double(weights.w_bar()) << '\n';
    for (double w : weights.values()) out << format_double(w) << '\n';
}

void write_weights(const std::string& path, const WeightSequence& weights) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_weights(out, weights);
    if (!out) throw IoError("write failed: " + path);
}

WeightSequence read_weights(LineReader& reader) {
    const std::string header = reader.expect("weights header");
    if (header.rfind("#", 0) != 0) reader.fail("expected weights header starting with '#'");
    const auto fields = parse_header_fields(header);
    const auto get = [&](const char* key) -> const std::string& {
        const auto it = fields.find(key);
        if (it == fields.end()) reader.fail(std::string("weights header lacks '") + key + "='");
        return it->second;
    };
    std::size_t n = 0;
    double beta = 0.0;
    double w_min = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> w_bar;
    try {
        n = parse_u64(get("n"));
        beta = parse_double(get("beta"));
        w_min = parse_double(get("wmin"));
        if (fields.count("seed")) seed = parse_u64(fields.at("seed"));
        if (fields.count("wbar")) w_bar = parse_double(fields.at("wbar"));
    } catch (const std::invalid_argument& e) {
        reader.fail(e.what());
    }

    std::vector<double> values;
    values.reserve(n);
    double prev = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string line = reader.expect("weight value");
        double w = 0.0;
        try {
            w = parse_double(line);
        } catch (const std::invalid_argument& e) {
            reader.fail(e.what());
        }
        if (!(w > 0.0)) reader.fail("weight must be positive");
        if (w > prev) reader.fail("weights must be sorted non-increasing");
        prev = w;
        values.push_back(w);
    }
    try {
        return WeightSequence::from_values(std::move(values), beta, w_min, w_bar, seed);
    } catch (const std::invalid_argument& e) {
        reader.fail(e.what());
    }
}

WeightSequence read_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    LineReader reader(in);
    return read_weights(reader);
}

}  // namespace girg
