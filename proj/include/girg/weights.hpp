#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace girg {

// Heavy-core threshold (n / ln^2 n)^(1/(beta-1)) used for sampled sequences.
double default_w_bar(std::size_t n, double beta);

// Pareto inverse CDF: the z >= w_min with 1 - (z/w_min)^(1-beta) = u.
double pareto_quantile(double u, double beta, double w_min);

struct PartialSums {
    double weight_ge = 0.0;   // sum of w_v over w_v >= w
    double weight_le = 0.0;   // sum of w_v over w_v <= w
    std::size_t count_ge = 0; // |{v : w_v >= w}|
};

// Vertex weights sorted non-increasing, so vertex 0 is the heaviest.
// Aggregates are cached at construction; the sequence is immutable.
class WeightSequence {
public:
    WeightSequence() = default;

    // Sorts `values` non-increasing. `w_min` defaults to the smallest value and
    // `w_bar` to default_w_bar(n, beta) clamped into [w_min, w_max].
    static WeightSequence from_values(std::vector<double> values, double beta,
                                      std::optional<double> w_min = {},
                                      std::optional<double> w_bar = {},
                                      std::uint64_t seed = 0);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t v) const noexcept { return values_[v]; }

    double total() const noexcept { return total_; }
    double w_min() const noexcept { return w_min_; }
    double w_max() const noexcept { return values_.empty() ? 0.0 : values_.front(); }
    double w_bar() const noexcept { return w_bar_; }
    double beta() const noexcept { return beta_; }
    std::uint64_t seed() const noexcept { return seed_; }

    // Number of heavy-core vertices, i.e. |{v : w_v >= w_bar}|. They are 0..k-1.
    std::size_t core_size() const noexcept;

    WeightSequence with_w_bar(double w_bar) const;

    // O(log n) via prefix sums.
    PartialSums partial_sums(double w) const;

    bool operator==(const WeightSequence& other) const = default;

private:
    std::vector<double> values_;
    std::vector<double> prefix_;  // prefix_[k] = sum of the k largest weights
    double total_ = 0.0;
    double w_min_ = 0.0;
    double w_bar_ = 0.0;
    double beta_ = 0.0;
    std::uint64_t seed_ = 0;
};

// n i.i.d. draws from the Pareto law F(z) = 1 - (z/w_min)^(1-beta), z >= w_min.
// Throws std::domain_error unless n >= 2, 2 < beta < 3 and w_min > 0.
WeightSequence sample_weights(std::size_t n, double beta, double w_min, std::uint64_t seed);

inline PartialSums partial_weight_sums(const WeightSequence& weights, double w) {
    return weights.partial_sums(w);
}

struct PowerLawReport {
    bool pl1_pass = false;
    bool pl2_lower_pass = false;
    bool pl2_upper_pass = false;
    double eta = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double min_weight = 0.0;
    // min over w in [w_min, w_bar] of count_ge(w) * w^(beta-1+eta) / n
    double worst_ratio_lower = 0.0;
    double worst_lower_at = 0.0;
    // max over w >= w_min of count_ge(w) * w^(beta-1-eta) / n
    double worst_ratio_upper = 0.0;
    double worst_upper_at = 0.0;
    std::size_t grid_points = 0;

    bool pass() const noexcept { return pl1_pass && pl2_lower_pass && pl2_upper_pass; }
};

// Calibrated so that sampled n = 1e5, beta = 2.5 sequences pass with probability > 0.99.
inline constexpr double kDefaultEta = 0.1;
inline constexpr double kDefaultC1 = 0.5;
inline constexpr double kDefaultC2 = 128.0;

// Checks the two-sided power-law count bounds on a geometric grid with 64 points
// per decade, refined by every sampled value and its right neighbour so that the
// step-function extremes are hit exactly.
PowerLawReport verify_power_law(const WeightSequence& weights, double eta = kDefaultEta,
                                double c1 = kDefaultC1, double c2 = kDefaultC2);

// Text format: "# n=<n> beta=<beta> wmin=<w_min> seed=<seed> wbar=<w_bar>" then one weight per line.
void write_weights(std::ostream& out, const WeightSequence& weights);
void write_weights(const std::string& path, const WeightSequence& weights);

class LineReader;
WeightSequence read_weights(LineReader& reader);
WeightSequence read_weights(const std::string& path);

}  // namespace girg
