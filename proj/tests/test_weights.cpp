#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "girg/io.hpp"
#include "girg/weights.hpp"

using namespace girg;

TEST_CASE("pareto quantile matches hand-solved values") {
    // 1 - z^-2 = 0.75  =>  z = 2
    CHECK(pareto_quantile(0.75, 3.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(pareto_quantile(0.0, 2.5, 1.7) == 1.7);
    for (double u : {0.1, 0.5, 0.9, 0.999}) {
        const double z = pareto_quantile(u, 2.5, 2.0);
        CHECK(1.0 - std::pow(z / 2.0, -1.5) == doctest::Approx(u).epsilon(1e-12));
    }
}

TEST_CASE("default heavy threshold uses natural logs") {
    const double n = 1e5;
    const double expected = std::pow(n / (std::log(n) * std::log(n)), 1.0 / 1.5);
    CHECK(default_w_bar(100000, 2.5) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(82.91).epsilon(1e-3));
}

TEST_CASE("sampled sequences are sorted, deterministic and carry exact aggregates") {
    const auto a = sample_weights(20000, 2.5, 1.0, 42);
    const auto b = sample_weights(20000, 2.5, 1.0, 42);
    const auto c = sample_weights(20000, 2.5, 1.0, 43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(std::is_sorted(a.values().begin(), a.values().end(), std::greater<>()));
    CHECK(a.values().back() >= 1.0);

    long double sum = 0;
    for (double w : a.values()) sum += w;
    CHECK(std::abs(a.total() - static_cast<double>(sum)) <= 1e-12 * a.total());

    const double expected_bar = std::clamp(default_w_bar(20000, 2.5), a.w_min(), a.w_max());
    CHECK(a.w_bar() == expected_bar);
    CHECK(a.w_bar() >= a.w_min());
    CHECK(a.w_bar() <= a.w_max());
    CHECK(a.core_size() == static_cast<std::size_t>(std::count_if(
                               a.values().begin(), a.values().end(), [&](double w) { return w >= a.w_bar(); })));
}

TEST_CASE("sample_weights rejects bad parameters") {
    CHECK_THROWS_AS(sample_weights(1, 2.5, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(sample_weights(10, 2.0, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(sample_weights(10, 3.0, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(sample_weights(10, 2.5, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(WeightSequence::from_values({1.0, -2.0}, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(WeightSequence::from_values({}, 2.5), std::invalid_argument);
}

TEST_CASE("pooled sample mean is close to the Pareto mean") {
    // w_min (beta - 1) / (beta - 2) = 3 for beta = 2.5. The variance is infinite,
    // so the check pools 20 sequences of 1e5.
    double total = 0.0;
    for (std::uint64_t s = 1; s <= 20; ++s) total += sample_weights(100000, 2.5, 1.0, s).total();
    CHECK(total / 2e6 == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("partial sums agree with brute force and are monotone") {
    const auto w = sample_weights(5000, 2.5, 1.0, 7);
    auto ps = w.partial_sums(0.0);
    CHECK(ps.count_ge == w.size());
    CHECK(ps.weight_ge == doctest::Approx(w.total()).epsilon(1e-12));
    ps = w.partial_sums(w.w_max() * 1.01);
    CHECK(ps.count_ge == 0);
    CHECK(ps.weight_ge == 0.0);

    double prev_ge = INFINITY, prev_le = -INFINITY;
    std::vector<double> probes{1.0, 1.5, 2.0, 3.0, 10.0, 50.0, w.values()[10], w.values()[100]};
    std::sort(probes.begin(), probes.end());
    for (double x : probes) {
        PartialSums brute;
        for (double v : w.values()) {
            if (v >= x) brute.weight_ge += v, ++brute.count_ge;
            if (v <= x) brute.weight_le += v;
        }
        const auto got = w.partial_sums(x);
        CHECK(got.count_ge == brute.count_ge);
        CHECK(got.weight_ge == doctest::Approx(brute.weight_ge).epsilon(1e-10));
        CHECK(got.weight_le == doctest::Approx(brute.weight_le).epsilon(1e-10));
        CHECK(got.weight_ge <= prev_ge);
        CHECK(got.weight_le >= prev_le);
        const bool tie = std::find(w.values().begin(), w.values().end(), x) != w.values().end();
        const double both = got.weight_ge + got.weight_le;
        if (tie)
            CHECK(both == doctest::Approx(w.total() + x * std::count(w.values().begin(), w.values().end(), x)));
        else
            CHECK(both == doctest::Approx(w.total()).epsilon(1e-12));
        prev_ge = got.weight_ge;
        prev_le = got.weight_le;
    }
}

TEST_CASE("heavy weight mass scales like n w^(2-beta)") {
    const auto w = sample_weights(100000, 2.5, 1.0, 3);
    for (double x = 2.0; x <= w.w_bar(); x *= 1.25) {
        const double ratio = w.partial_sums(x).weight_ge / (1e5 * std::pow(x, -0.5));
        CHECK(ratio >= 0.2);
        CHECK(ratio <= 5.0);
    }
}

TEST_CASE("power-law check on sampled, constant and linear sequences") {
    const auto sampled = sample_weights(100000, 2.5, 1.0, 11);
    const auto r = verify_power_law(sampled);
    CHECK(r.pl1_pass);
    CHECK(r.pl2_lower_pass);
    CHECK(r.pl2_upper_pass);
    CHECK(r.pass());
    CHECK(r.pl2_lower_pass == (r.worst_ratio_lower >= r.c1));
    CHECK(r.pl2_upper_pass == (r.worst_ratio_upper <= r.c2));
    // 64 points per decade between w_min and w_max, plus two per sampled value.
    CHECK(r.grid_points >= static_cast<std::size_t>(64 * std::log10(sampled.w_max() / sampled.w_min())));

    const std::size_t n = 1000;
    const auto constant = WeightSequence::from_values(std::vector<double>(n, 1.0), 2.5);
    CHECK(constant.partial_sums(1.0).count_ge == n);
    CHECK(verify_power_law(constant, 0.1, 0.5, 1.0).pl2_upper_pass);

    std::vector<double> linear(n);
    std::iota(linear.begin(), linear.end(), 1.0);
    const auto lin = WeightSequence::from_values(linear, 2.5);
    const auto lr = verify_power_law(lin, 0.1, 0.5, 2.0);
    CHECK_FALSE(lr.pl2_upper_pass);
    // At w = n/2 about n/2 vertices remain, far above 2 n / (n/2)^1.4.
    CHECK(lr.worst_ratio_upper > 2.0);
}

TEST_CASE("weights file round trip and malformed input") {
    const auto w = sample_weights(1000, 2.3, 1.5, 5);
    std::stringstream ss;
    write_weights(ss, w);
    LineReader reader(ss);
    CHECK(read_weights(reader) == w);

    std::stringstream bad("# n=3 beta=2.5 wmin=1 seed=0\n3\n2\nfoo\n");
    LineReader r2(bad);
    try {
        read_weights(r2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    std::stringstream unsorted("# n=2 beta=2.5 wmin=1\n1\n2\n");
    LineReader r3(unsorted);
    CHECK_THROWS_AS(read_weights(r3), ParseError);
    std::stringstream short_file("# n=3 beta=2.5 wmin=1\n1\n");
    LineReader r4(short_file);
    CHECK_THROWS_AS(read_weights(r4), ParseError);
    CHECK_THROWS_AS(read_weights("/nonexistent/weights.txt"), IoError);
}
