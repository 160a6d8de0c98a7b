#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace girg {

// Torus distances on [0,1)^d. Coordinate differences are reduced to [-1/2, 1/2)
// before the norm is applied.
//
// MinComponent, min_i |delta_i|, is not a metric for d >= 2: two points that share
// one coordinate are at distance 0 regardless of the others.
enum class NormKind { MaxNorm, Euclidean, MinComponent };

std::string_view to_string(NormKind norm) noexcept;
NormKind parse_norm(std::string_view name);  // "max" | "euclidean" | "min_component"

class TorusPoint {
public:
    TorusPoint() = default;
    // Throws std::domain_error unless every coordinate lies in [0,1).
    explicit TorusPoint(std::vector<double> coords);

    std::size_t dim() const noexcept { return coords_.size(); }
    std::span<const double> coords() const noexcept { return coords_; }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }
    operator std::span<const double>() const noexcept { return coords_; }

    bool operator==(const TorusPoint&) const = default;

private:
    std::vector<double> coords_;
};

// Difference a - b reduced to [-1/2, 1/2).
inline double torus_delta(double a, double b) noexcept {
    double d = a - b;
    if (d >= 0.5)
        d -= 1.0;
    else if (d < -0.5)
        d += 1.0;
    return d;
}

// Unchecked hot-path version; a and b must have equal length.
double torus_distance_unchecked(std::span<const double> a, std::span<const double> b,
                                NormKind norm) noexcept;

// Throws std::invalid_argument on dimension mismatch.
double torus_distance(std::span<const double> a, std::span<const double> b, NormKind norm);

// Volume of the d-dimensional unit L2 ball, pi^(d/2) / Gamma(d/2 + 1).
double unit_ball_volume(std::size_t d);

// Measure V(r) of the torus ball {x : ||x|| <= r}.
//   MaxNorm:      min{1, (2r)^d}
//   MinComponent: 1 - (1 - min{1, 2r})^d. The complement event is that every
//                 |delta_i| exceeds r, and the coordinates are independent.
//   Euclidean:    vol_d r^d for r <= 1/2. Beyond that the ball pokes through the
//                 faces of [-1/2,1/2)^d and V is the cube/ball intersection,
//                 tabulated once per d by nested quadrature and interpolated.
double ball_volume(double r, std::size_t d, NormKind norm);

// Smallest r with ball_volume(r) >= v. Closed form where available, otherwise
// bisection to 1e-13.
double inverse_volume(double v, std::size_t d, NormKind norm);

// Largest value the norm attains on the torus (1/2, or sqrt(d)/2 for Euclidean).
double max_torus_distance(std::size_t d, NormKind norm);

// Text format: one line per point, d space-separated decimals.
void write_positions(std::ostream& out, std::span<const double> flat, std::size_t d);

class LineReader;
std::vector<double> read_positions(LineReader& reader, std::size_t n, std::size_t d);

}  // namespace girg
