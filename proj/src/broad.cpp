#include "extlab/broad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "extlab/parallel.hpp"

namespace extlab {

CapDecomposition CapDecomposition::disjoint_cover(double K) {
    if (!(K >= 1.0)) throw std::invalid_argument("cap scale K must be >= 1");
    CapDecomposition sigma;
    sigma.K = K;
    sigma.disjoint = true;
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * K - 1e-12));
    const double width = 2.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        Cap c;
        c.center = -1.0 + (static_cast<double>(j) + 0.5) * width;
        c.halfwidth = 0.5 * width;
        c.K = K;
        sigma.caps.push_back(c);
    }
    return sigma;
}

CapDecomposition CapDecomposition::overlapping_cover(double K) {
    CapDecomposition sigma = disjoint_cover(K);
    sigma.disjoint = false;
    for (auto& c : sigma.caps) c.halfwidth *= 4.0 / 3.0;  // overlap 1/2 of a cell, <= width/2
    return sigma;
}

std::size_t CapDecomposition::cap_index_of(double xi) const {
    const double width = 2.0 * caps.front().halfwidth;
    double t = (xi + 1.0) / width;
    auto idx = static_cast<std::int64_t>(std::floor(t));
    // boundary ties go leftward
    if (std::abs(t - std::round(t)) < 1e-12 && std::round(t) > 0.0)
        idx = static_cast<std::int64_t>(std::round(t)) - 1;
    return static_cast<std::size_t>(
        std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(caps.size()) - 1));
}

SampledDensity CapDecomposition::restrict_to_cap(const SampledDensity& f, std::size_t cap) const {
    if (disjoint) {
        // clamped assignment partitions the whole support, so Ef = sum Ef_sigma
        SampledDensity out;
        out.grid = f.grid;
        for (const auto& e : f.entries) {
            if (cap_index_of(f.grid.node(e.node)) == cap) out.entries.push_back(e);
        }
        return out;
    }
    const Cap& c = caps[cap];
    return f.restricted(c.lo(), c.hi());
}

double ath_largest(std::span<const double> values, int A) {
    if (A <= 0) throw std::invalid_argument("order statistic index A must be positive");
    if (static_cast<std::size_t>(A) > values.size()) return 0.0;
    std::vector<double> buf(values.begin(), values.end());
    std::nth_element(buf.begin(), buf.begin() + (A - 1), buf.end(), std::greater<double>());
    return buf[static_cast<std::size_t>(A - 1)];
}

std::vector<std::vector<double>> cap_field_magnitudes(const SampledDensity& f, const Curve& curve,
                                                      const CapDecomposition& caps,
                                                      const SpatialPointSet& pts) {
    const std::size_t ns = caps.size();
    // bucket support nodes by cap once; each cap field is then a partial sum
    std::vector<SampledDensity> parts(ns);
    for (std::size_t s = 0; s < ns; ++s) parts[s] = caps.restrict_to_cap(f, s);

    std::vector<std::vector<double>> mags(pts.points.size(), std::vector<double>(ns, 0.0));
    parallel_for(static_cast<std::int64_t>(pts.points.size()), [&](std::int64_t i) {
        const Vec2& p = pts.points[static_cast<std::size_t>(i)];
        for (std::size_t s = 0; s < ns; ++s) {
            if (parts[s].empty()) continue;
            mags[static_cast<std::size_t>(i)][s] = std::abs(extension_point(parts[s], curve, p.x, p.y));
        }
    });
    return mags;
}

Field broad_field(const SampledDensity& f, const Curve& curve, const CapDecomposition& caps, int A,
                  const SpatialPointSet& pts) {
    if (A <= 0) throw std::invalid_argument("order statistic index A must be positive");
    const auto mags = cap_field_magnitudes(f, curve, caps, pts);
    Field out;
    out.pts = pts;
    out.values.resize(pts.points.size());
    for (std::size_t i = 0; i < pts.points.size(); ++i)
        out.values[i] = cplx{ath_largest(mags[i], A), 0.0};
    return out;
}

double broad_narrow_residual(const SampledDensity& f, const Curve& curve,
                             const CapDecomposition& caps, int A, const SpatialPointSet& pts) {
    if (!caps.disjoint) throw std::invalid_argument("exact check needs disjoint caps");
    const double fnorm = density_lp_norm(f, 2.0);
    if (fnorm == 0.0) return 0.0;
    const auto mags = cap_field_magnitudes(f, curve, caps, pts);
    const Field full = extension_evaluate(f, curve, pts);
    const auto ns = static_cast<double>(caps.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
        const double mx = *std::max_element(mags[i].begin(), mags[i].end());
        const double br = ath_largest(mags[i], A);
        const double excess = std::abs(full.values[i]) - static_cast<double>(A) * mx - ns * br;
        worst = std::max(worst, excess);
    }
    return std::max(worst, 0.0) / fnorm;
}

double broad_triangle_residual(const SampledDensity& f1, const SampledDensity& f2,
                               const Curve& curve, const CapDecomposition& caps, int A1, int A2,
                               const SpatialPointSet& pts) {
    const SampledDensity sum = f1.plus(f2);
    const auto m1 = cap_field_magnitudes(f1, curve, caps, pts);
    const auto m2 = cap_field_magnitudes(f2, curve, caps, pts);
    const auto ms = cap_field_magnitudes(sum, curve, caps, pts);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
        const double lhs = ath_largest(ms[i], A1 + A2);
        const double rhs = ath_largest(m1[i], A1) + ath_largest(m2[i], A2);
        worst = std::max(worst, lhs - rhs);
    }
    return std::max(worst, 0.0);
}

}  // namespace extlab
