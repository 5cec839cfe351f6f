#pragma once

// Sample grids on the closed unit disk and on annuli.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mk {

struct PlanePoint {
    double x;
    double y;
    double r() const { return std::hypot(x, y); }
    double phi() const { return std::atan2(y, x); }
};

/// Polar grid with n_radial radii spaced uniformly on [r_min, r_max]
/// (endpoints included) and n_angular uniform angles. r_min = 0 contributes
/// the center once.
struct PolarGrid {
    double r_min = 0.0;
    double r_max = 1.0;
    int n_radial = 32;
    int n_angular = 64;

    double radius(int i) const {
        return n_radial == 1 ? r_max : r_min + (r_max - r_min) * static_cast<double>(i) / (n_radial - 1);
    }
    double angle(int j) const { return 2.0 * std::numbers::pi * j / n_angular; }

    std::vector<PlanePoint> points() const {
        validate();
        std::vector<PlanePoint> pts;
        for (int i = 0; i < n_radial; ++i) {
            const double r = radius(i);
            if (r == 0.0) {
                pts.push_back({0.0, 0.0});
                continue;
            }
            for (int j = 0; j < n_angular; ++j) pts.push_back({r * std::cos(angle(j)), r * std::sin(angle(j))});
        }
        return pts;
    }

    /// Points with r_min < r < r_max.
    std::vector<PlanePoint> interior_points() const {
        std::vector<PlanePoint> pts;
        for (int i = 1; i + 1 < n_radial; ++i)
            for (int j = 0; j < n_angular; ++j) pts.push_back({radius(i) * std::cos(angle(j)), radius(i) * std::sin(angle(j))});
        return pts;
    }

    void validate() const {
        if (!(r_min >= 0.0 && r_max > r_min) || n_radial < 2 || n_angular < 1)
            throw std::invalid_argument("PolarGrid: invalid shape");
    }
};

/// The points of an n x n Cartesian lattice on (-1, 1)^2, spacing 2/(n+1),
/// that lie strictly inside the unit disk.
inline std::vector<PlanePoint> cartesian_disk_grid(int n) {
    if (n < 1) throw std::invalid_argument("cartesian_disk_grid: n must be positive");
    std::vector<PlanePoint> pts;
    const double h = 2.0 / (n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const PlanePoint p{-1.0 + (i + 1) * h, -1.0 + (j + 1) * h};
            if (p.x * p.x + p.y * p.y < 1.0) pts.push_back(p);
        }
    return pts;
}

}  // namespace mk
