#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "girg/kernels.hpp"
#include "girg/rng.hpp"

using namespace girg;

namespace {

std::vector<KernelKind> shipped_kernels() {
    return {ChungLuKernel{},
            DistanceKernel{2.0, NormKind::MaxNorm},
            DistanceKernel{2.0, NormKind::MinComponent},
            DistanceKernel{2.0, NormKind::Euclidean},
            DistanceKernel{0.5, NormKind::MaxNorm},
            DistanceKernel{3.5, NormKind::MaxNorm},
            ThresholdKernel{NormKind::MaxNorm, 1.0, 1.0},
            ThresholdKernel{NormKind::MinComponent, 1.0, 1.0},
            ThresholdKernel{NormKind::Euclidean, 1.0, 1.0},
            ThresholdKernel{NormKind::MaxNorm, 0.5, 2.0}};
}

// Composite Simpson on [a, b] with m (even) panels.
template <class F>
double simpson(F f, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("edge probabilities on hand examples") {
    const double x[] = {0.1}, y[] = {0.35};
    CHECK(edge_probability(ChungLuKernel{}, 10, 10, 50, x, y) == 1.0);
    CHECK(edge_probability(ChungLuKernel{}, 1, 2, 50, x, y) == doctest::Approx(0.04));
    // q = 0.1, V = 2 * 0.25 = 0.5: 0.5^-2 * 0.1^2
    CHECK(edge_probability(DistanceKernel{2.0, NormKind::MaxNorm}, 1, 1, 10, x, y) == doctest::Approx(0.04));
    // q = 0.1 gives radius 0.05 in d = 1
    const ThresholdKernel t{NormKind::MaxNorm, 1.0, 1.0};
    CHECK(edge_probability(t, 1, 1, 10, x, y) == 0.0);
    const double near[] = {0.14};
    CHECK(edge_probability(t, 1, 1, 10, x, near) == 1.0);
    const ThresholdKernel band{NormKind::MaxNorm, 0.5, 1.5};
    const double mid[] = {0.15};  // dist 0.05 = radius, halfway through [0.025, 0.075]
    CHECK(edge_probability(band, 1, 1, 10, x, mid) == doctest::Approx(0.5));
    CHECK(edge_probability(DistanceKernel{2.0, NormKind::MaxNorm}, 1, 1, 1e9, x, x) == 1.0);
}

TEST_CASE("kernel validation and names") {
    CHECK_THROWS_AS(validate_kernel(DistanceKernel{1.0, NormKind::MaxNorm}), std::invalid_argument);
    CHECK_THROWS_AS(validate_kernel(DistanceKernel{0.0, NormKind::MaxNorm}), std::invalid_argument);
    CHECK_THROWS_AS(validate_kernel(DistanceKernel{-2.0, NormKind::MaxNorm}), std::invalid_argument);
    CHECK_THROWS_AS(validate_kernel(ThresholdKernel{NormKind::MaxNorm, 2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_kernel(ThresholdKernel{NormKind::MaxNorm, 0.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(validate_kernel(DistanceKernel{0.5, NormKind::Euclidean}));
    CHECK(kernel_name(ChungLuKernel{}) == "chung_lu");
    CHECK(describe(DistanceKernel{2.0, NormKind::MinComponent}) == "distance(alpha=2,norm=min_component)");
    CHECK(describe(ThresholdKernel{}) == "threshold(norm=max,c_low=1,c_high=1)");
}

TEST_CASE("edge probability is symmetric and lies in [0,1]") {
    SplitMix64 rng(5);
    for (const auto& k : shipped_kernels())
        for (std::size_t d = 1; d <= 2; ++d)
            for (int i = 0; i < 10000; ++i) {
                std::vector<double> x(d), y(d);
                for (auto& c : x) c = rng.uniform();
                for (auto& c : y) c = rng.uniform();
                const double wu = std::exp(6 * rng.uniform()), wv = std::exp(6 * rng.uniform());
                const double total = std::exp(3 + 6 * rng.uniform());
                const double p = edge_probability(k, wu, wv, total, x, y);
                CHECK(p == edge_probability(k, wv, wu, total, y, x));
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
            }
}

TEST_CASE("geometric kernels decrease with distance and increase with weight") {
    SplitMix64 rng(8);
    for (const auto& k : shipped_kernels()) {
        if (std::holds_alternative<ChungLuKernel>(k)) continue;
        for (std::size_t d = 1; d <= 3; ++d)
            for (int i = 0; i < 200; ++i) {
                const double q = std::exp(-8 * rng.uniform());
                double prev = 1.0;
                for (int s = 0; s <= 100; ++s) {
                    const double p = probability_at(k, q, s * 0.005 * std::sqrt(d), d);
                    CHECK(p <= prev + 1e-15);
                    prev = p;
                }
                const double dist = 0.5 * rng.uniform();
                prev = 0.0;
                for (int s = 0; s <= 60; ++s) {
                    const double p = probability_at(k, std::exp(-12.0 + 0.25 * s), dist, d);
                    CHECK(p >= prev - 1e-15);
                    prev = p;
                }
            }
    }
}

TEST_CASE("closed-form marginal against independent quadrature") {
    CHECK(distance_kernel_marginal(2.0, 0.1) == doctest::Approx(0.19).epsilon(1e-12));
    // Quadrature over the torus coordinate, p = min{1, q^2 / (2|x|)^2}, kink at |x| = q/2.
    for (double q : {0.01, 0.1, 0.3}) {
        const auto f = [q](double x) { return x == 0 ? 1.0 : std::min(1.0, q * q / (4 * x * x)); };
        const double quad = 2 * (simpson(f, 0.0, q / 2, 2) + simpson(f, q / 2, 0.5, 200000));
        CHECK(std::abs(quad - distance_kernel_marginal(2.0, q)) <= 1e-6);
        CHECK(distance_kernel_marginal(2.0, q) == doctest::Approx(2 * q - q * q));
    }
    // alpha < 1: min{1, V^-alpha q}, integrated over V in [0,1] with its kink at V = q^(1/alpha).
    for (double alpha : {0.3, 0.7}) {
        const double q = 0.05;
        const double kink = std::pow(q, 1 / alpha);
        const auto f = [&](double v) { return v == 0 ? 1.0 : std::min(1.0, q * std::pow(v, -alpha)); };
        const double quad = simpson(f, 0.0, kink, 2) + simpson(f, kink, 1.0, 200000);
        CHECK(std::abs(quad - distance_kernel_marginal(alpha, q)) <= 1e-6);
    }
    CHECK(distance_kernel_marginal(2.0, 1.5) == 1.0);
}

TEST_CASE("marginal probability checks") {
    const double x[] = {0.3};
    const auto cl = verify_ep1(ChungLuKernel{}, 1, 1, 10, x, 10000, 1);
    CHECK(cl.ratio == 1.0);

    const double w = std::sqrt(0.1);
    const auto dk = verify_ep1(DistanceKernel{2.0, NormKind::MaxNorm}, w, w, 1.0, x, 400000, 2);
    REQUIRE(dk.exact);
    CHECK(*dk.exact == doctest::Approx(0.19));
    CHECK(dk.ci_low <= 1.9);
    CHECK(dk.ci_high >= 1.9);

    const double xy[] = {0.7, 0.2};
    const double w2 = std::sqrt(0.2);
    const auto th = verify_ep1(ThresholdKernel{NormKind::MaxNorm, 1.0, 1.0}, w2, w2, 1.0, xy, 400000, 3);
    REQUIRE(th.exact);
    CHECK(*th.exact == doctest::Approx(0.2));
    CHECK(th.ci_low <= 1.0);
    CHECK(th.ci_high >= 1.0);

    CHECK_THROWS_AS(verify_ep1(ChungLuKernel{}, 1, 1, 10, x, 9999, 1), std::domain_error);
}

TEST_CASE("closed form lies in the Monte Carlo interval in most trials") {
    const double w = std::sqrt(0.1);
    int covered = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double x[] = {(trial + 0.5) / 100.0};
        const auto r = verify_ep1(DistanceKernel{2.0, NormKind::MaxNorm}, w, w, 1.0, x, 10000, 100 + trial);
        covered += r.ci_low <= 1.9 && 1.9 <= r.ci_high;
    }
    CHECK(covered >= 95);
}

TEST_CASE("marginals stay within a constant factor of Chung-Lu") {
    for (const auto& k : shipped_kernels())
        for (std::size_t d = 1; d <= 2; ++d) {
            const auto cfgs = ep1_random_configurations(k, d, 20, 200000, 17 * d);
            for (const auto& c : cfgs) {
                CHECK_MESSAGE(c.result.ratio >= 0.25, describe(k) << " d=" << d << " q=" << c.q);
                CHECK_MESSAGE(c.result.ratio <= 4.0, describe(k) << " d=" << d << " q=" << c.q);
                CHECK(c.q >= 1e-4);
                CHECK(c.q <= 10.0);
            }
        }
}

TEST_CASE("heavy pair probabilities") {
    const auto w = sample_weights(100000, 2.5, 1.0, 4);
    const double q_bar = w.w_bar() * w.w_bar() / w.total();

    const auto cl = verify_ep2(ChungLuKernel{}, w, 1, 0.1, 0.1, 200, 1);
    CHECK(cl.min_p == doctest::Approx(std::min(1.0, w[w.core_size() - 1] * w[w.core_size() - 2] / w.total())));
    CHECK(cl.min_p >= q_bar);
    CHECK(cl.pass);
    CHECK(cl.pass == (cl.min_p >= cl.bound));

    const auto dk = verify_ep2(DistanceKernel{2.0, NormKind::MaxNorm}, w, 1, 0.1, 0.1, 200, 1);
    CHECK(dk.min_p >= q_bar * q_bar);
    CHECK(dk.pass == (dk.min_p >= dk.bound));
    CHECK(dk.pairs_checked == 2 * 201);

    const auto big = w.with_w_bar(std::sqrt(w.total()) * 1.01);
    REQUIRE(big.core_size() >= 2);
    const auto th = verify_ep2(ThresholdKernel{NormKind::MaxNorm, 1.0, 1.0}, big, 2, 0.1, 0.1, 200, 1);
    CHECK(th.min_p == 1.0);
    CHECK(th.pass);

    const auto tiny = w.with_w_bar(w.w_max());
    CHECK_THROWS_AS(verify_ep2(ChungLuKernel{}, tiny, 1, 0.1, 0.1, 10, 1), std::domain_error);
}
