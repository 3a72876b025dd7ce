// Copyright 2026 The qcoop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCOOP_THEORY_HPP_
#define QCOOP_THEORY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qcoop/ants.hpp"
#include "qcoop/correlation.hpp"
#include "qcoop/vec2.hpp"

/// Expected pebble displacement per push attempt, by midpoint quadrature over
/// both push directions. Serves as the oracle for the ant Monte Carlo runs.
namespace qcoop::theory {

struct QuadratureSpec {
    std::size_t grid_points_per_axis = 2048;

    friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

inline void validate(const QuadratureSpec& spec) {
    if (spec.grid_points_per_axis < 64)
        throw std::invalid_argument("quadrature needs at least 64 grid points per axis");
}

struct ExpectedDisplacement {
    Vec2 vector;
    /// |R(N) - R(N/2)|, per component.
    Vec2 error_estimate;
};

struct AntForces {
    double strength_1 = 1.0;
    double strength_2 = 1.0;
    double f_min = 0.0;
    double g = 1.0;
};

namespace detail {

/// Midpoint nodes on [-pi, pi].
inline std::vector<double> midpoint_nodes(std::size_t n) {
    const double h = 2.0 * std::numbers::pi / double(n);
    std::vector<double> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = -std::numbers::pi + (double(i) + 0.5) * h;
    return nodes;
}

/// Fraction of the square cell of width h centred on a node pair with
/// b1 - b2 = delta in which |f_1 + f_2| >= f_min. Over the cell, b1 - b2
/// has a triangular density on [delta - h, delta + h].
inline double joint_push_fraction(const AntForces& f, double delta, double h) {
    constexpr double pi = std::numbers::pi;
    const double c0 = (f.f_min * f.f_min - f.strength_1 * f.strength_1 - f.strength_2 * f.strength_2) /
                      (2.0 * f.strength_1 * f.strength_2);
    if (c0 <= -1.0) return 1.0;
    if (c0 > 1.0) return 0.0;
    const double reach = std::acos(c0);
    auto cdf = [&](double x) {
        const double u = std::clamp((x - delta + h) / h, 0.0, 2.0);
        return u <= 1.0 ? 0.5 * u * u : 1.0 - 0.5 * (2.0 - u) * (2.0 - u);
    };
    double frac = 0.0;
    for (int m = -1; m <= 1; ++m) frac += cdf(2.0 * pi * m + reach) - cdf(2.0 * pi * m - reach);
    return frac;
}

/// Integral of the per-attempt displacement with the direction densities of
/// ant 1 and ant 2 sampled at the midpoint nodes (weights already include
/// the cell width). Bilinear in (weights_1, weights_2).
///
/// Solo term for ant j: p_solo(b1 - b2) f_j(b_j) Theta(s_j - f_min).
/// Joint term: p_joint(b1 - b2) (f_1 + f_2) Theta(|f_1 + f_2| - f_min).
/// For triplet statistics p_solo = sin^2/2 and p_joint = cos^2/2 of half the
/// angle difference, computed through cos(b1 - b2) = c1 c2 + s1 s2.
///
/// The joint step depends on b1 - b2 only, and grid differences are exact
/// multiples of the cell width, so sampling it at the nodes biases R by O(h).
/// Each node instead gets the exact cell average of the step (see
/// joint_push_fraction), which restores O(h^2) convergence.
inline Vec2 displacement_sum(EntanglementMode mode, const AntForces& f,
                             const std::vector<double>& nodes,
                             const std::vector<double>& weights_1,
                             const std::vector<double>& weights_2) {
    const std::size_t n = nodes.size();
    std::vector<double> sn(n), cs(n);
    for (std::size_t i = 0; i < n; ++i) {
        sn[i] = std::sin(nodes[i]);
        cs[i] = std::cos(nodes[i]);
    }
    const bool solo_1 = f.strength_1 >= f.f_min;
    const bool solo_2 = f.strength_2 >= f.f_min;
    // joint[i - k + n - 1] belongs to node pair (i, k).
    const double h = 2.0 * std::numbers::pi / double(n);
    std::vector<double> joint(2 * n - 1);
    for (std::size_t d = 0; d < joint.size(); ++d)
        joint[d] = joint_push_fraction(f, (double(d) - double(n - 1)) * h, h);

    // Row sums accumulate in a fixed order so results are reproducible.
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w1 = weights_1[i];
        if (w1 == 0.0) continue;
        const double f1x = f.strength_1 * sn[i];
        const double f1y = f.strength_1 * cs[i];
        double rx = 0.0, ry = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double w = weights_2[k];
            const double cos_diff = cs[i] * cs[k] + sn[i] * sn[k];
            double p_solo, p_joint;
            if (mode == EntanglementMode::Independent) {
                p_solo = 0.25;
                p_joint = 0.25;
            } else {
                const double half_sin2 = 0.25 * (1.0 - cos_diff);
                const double half_cos2 = 0.25 * (1.0 + cos_diff);
                const bool singlet = mode == EntanglementMode::Singlet;
                // Pushing needs '+': triplet ++ is cos^2, singlet ++ is sin^2.
                p_joint = singlet ? half_sin2 : half_cos2;
                p_solo = singlet ? half_cos2 : half_sin2;
            }
            const double f2x = f.strength_2 * sn[k];
            const double f2y = f.strength_2 * cs[k];

            double tx = 0.0, ty = 0.0;
            if (solo_1) {
                tx += p_solo * f1x;
                ty += p_solo * f1y;
            }
            if (solo_2) {
                tx += p_solo * f2x;
                ty += p_solo * f2y;
            }
            const double pushed = p_joint * joint[i + n - 1 - k];
            tx += pushed * (f1x + f2x);
            ty += pushed * (f1y + f2y);
            rx += w * tx;
            ry += w * ty;
        }
        sx += w1 * rx;
        sy += w1 * ry;
    }
    return {f.g * sx, f.g * sy};
}

inline std::vector<double> density_weights(const std::vector<double>& nodes, double z) {
    const double h = 2.0 * std::numbers::pi / double(nodes.size());
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = ants::direction_density(nodes[i], z) * h;
    return w;
}

/// d/dz of the direction density at z = 0: (pi - 2|b|) / (4 pi^2).
inline std::vector<double> density_slope_weights(const std::vector<double>& nodes) {
    constexpr double pi = std::numbers::pi;
    const double h = 2.0 * pi / double(nodes.size());
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        w[i] = (pi - 2.0 * std::abs(nodes[i])) / (4.0 * pi * pi) * h;
    return w;
}

inline Vec2 displacement_at(EntanglementMode mode, const AntForces& f, double z, std::size_t n) {
    const auto nodes = midpoint_nodes(n);
    const auto w = density_weights(nodes, z);
    return displacement_sum(mode, f, nodes, w, w);
}

/// First-order coefficient of R in z at z = 0. The isotropic term vanishes,
/// so R(z) = z * slope + O(z^2).
inline Vec2 displacement_slope_at_isotropy(EntanglementMode mode, const AntForces& f,
                                           std::size_t n) {
    const auto nodes = midpoint_nodes(n);
    const auto u = density_weights(nodes, 0.0);
    const auto v = density_slope_weights(nodes);
    return displacement_sum(mode, f, nodes, u, v) + displacement_sum(mode, f, nodes, v, u);
}

inline Vec2 abs_diff(Vec2 a, Vec2 b) { return {std::abs(a.x - b.x), std::abs(a.y - b.y)}; }

}  // namespace detail

inline ExpectedDisplacement expected_displacement(EntanglementMode mode, const AntForces& forces,
                                                  double z, const QuadratureSpec& spec = {}) {
    validate(spec);
    if (!(forces.strength_1 > 0.0 && forces.strength_2 > 0.0 && forces.f_min >= 0.0 &&
          forces.g > 0.0 && z >= 0.0 && z <= 1.0))
        throw std::invalid_argument("expected_displacement: parameter out of range");
    const std::size_t n = spec.grid_points_per_axis;
    const Vec2 fine = detail::displacement_at(mode, forces, z, n);
    const Vec2 coarse = detail::displacement_at(mode, forces, z, n / 2);
    return {fine, detail::abs_diff(fine, coarse)};
}

inline ExpectedDisplacement expected_displacement(const ants::AntScenarioConfig& c,
                                                  const QuadratureSpec& spec = {}) {
    return expected_displacement(c.mode, {c.strength_1, c.strength_2, c.f_min, c.g}, c.z, spec);
}

struct GainRatio {
    double ratio = 0.0;
    double error_estimate = 0.0;
    /// Both displacements are within quadrature error of zero. `ratio` then
    /// holds the limiting value 2.
    bool degenerate = false;
};

/// Goal-axis displacement of triplet ants over independent ants.
///
/// At z = 0 both displacements vanish identically, so the ratio is taken as
/// the z -> 0+ limit of the first-order terms.
inline GainRatio gain_ratio(double s1, double s2, double f_min, double z,
                            const QuadratureSpec& spec = {}) {
    validate(spec);
    if (!(f_min < s1 + s2))
        throw std::domain_error("gain_ratio requires f_min < s1 + s2");
    const AntForces forces{s1, s2, f_min, 1.0};
    const std::size_t n = spec.grid_points_per_axis;

    double t_fine, t_coarse, i_fine, i_coarse;
    if (z == 0.0) {
        t_fine = detail::displacement_slope_at_isotropy(EntanglementMode::Triplet, forces, n).y;
        t_coarse = detail::displacement_slope_at_isotropy(EntanglementMode::Triplet, forces, n / 2).y;
        i_fine = detail::displacement_slope_at_isotropy(EntanglementMode::Independent, forces, n).y;
        i_coarse =
            detail::displacement_slope_at_isotropy(EntanglementMode::Independent, forces, n / 2).y;
    } else {
        t_fine = detail::displacement_at(EntanglementMode::Triplet, forces, z, n).y;
        t_coarse = detail::displacement_at(EntanglementMode::Triplet, forces, z, n / 2).y;
        i_fine = detail::displacement_at(EntanglementMode::Independent, forces, z, n).y;
        i_coarse = detail::displacement_at(EntanglementMode::Independent, forces, z, n / 2).y;
    }
    const double t_err = std::abs(t_fine - t_coarse);
    const double i_err = std::abs(i_fine - i_coarse);

    GainRatio out;
    if ((std::abs(t_fine) <= t_err && std::abs(i_fine) <= i_err) || i_fine == 0.0) {
        out.ratio = 2.0;
        out.error_estimate = std::numeric_limits<double>::infinity();
        out.degenerate = true;
        return out;
    }
    out.ratio = t_fine / i_fine;
    out.error_estimate =
        std::abs(out.ratio) * (t_err / std::abs(t_fine) + i_err / std::abs(i_fine));
    return out;
}

struct GainPoint {
    double f_min = 0.0;
    GainRatio gain;
};

/// Gain ratio across pebble thresholds. Points with f_min >= s1 + s2 come
/// back flagged degenerate instead of throwing.
inline std::vector<GainPoint> sweep_gain_curve(double s1, double s2,
                                               const std::vector<double>& f_min_list, double z,
                                               const QuadratureSpec& spec = {}) {
    std::vector<GainPoint> out;
    out.reserve(f_min_list.size());
    for (double f : f_min_list) {
        if (f >= s1 + s2) {
            out.push_back({f, {2.0, std::numeric_limits<double>::infinity(), true}});
            continue;
        }
        out.push_back({f, gain_ratio(s1, s2, f, z, spec)});
    }
    return out;
}

}  // namespace qcoop::theory

#endif  // QCOOP_THEORY_HPP_
