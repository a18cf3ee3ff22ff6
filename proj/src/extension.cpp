#include "extlab/extension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "extlab/parallel.hpp"

namespace extlab {

double Curve::phi(double xi) const {
    switch (kind) {
        case CurveKind::parabola:
            return xi * xi;
        case CurveKind::circle_graph:
            return -std::sqrt(1.0 - 0.25 * xi * xi);
    }
    return 0.0;
}

double Curve::dphi(double xi) const {
    switch (kind) {
        case CurveKind::parabola:
            return 2.0 * xi;
        case CurveKind::circle_graph:
            return 0.25 * xi / std::sqrt(1.0 - 0.25 * xi * xi);
    }
    return 0.0;
}

double Curve::max_abs_dphi(double radius) const {
    // both curves have |Phi'| increasing in |xi|
    return std::abs(dphi(std::min(radius, 1.0)));
}

namespace {
void check_phase_resolution(const SampledDensity& f, const Curve& curve,
                            const SpatialPointSet& pts) {
    if (f.entries.empty()) return;
    const double sup_dphi = curve.max_abs_dphi(f.support_radius());
    double worst = 0.0;
    for (const auto& p : pts.points) worst = std::max(worst, std::abs(p.x) + std::abs(p.y) * sup_dphi);
    if (f.grid.step * worst > 0.1)
        throw std::invalid_argument("grid too coarse for |x|, refine h_xi");
}
}  // namespace

cplx extension_point(const SampledDensity& f, const Curve& curve, double x1, double x2) {
    cplx acc{0.0, 0.0};
    for (const auto& e : f.entries) {
        const double xi = f.grid.node(e.node);
        const double phase = x1 * xi + x2 * curve.phi(xi);
        acc += e.value * cplx{std::cos(phase), std::sin(phase)};
    }
    return acc * f.grid.step;
}

Field extension_evaluate(const SampledDensity& f, const Curve& curve, const SpatialPointSet& pts) {
    check_phase_resolution(f, curve, pts);
    Field out;
    out.pts = pts;
    out.values.assign(pts.points.size(), cplx{0.0, 0.0});
    parallel_for(static_cast<std::int64_t>(pts.points.size()), [&](std::int64_t i) {
        const Vec2& p = pts.points[static_cast<std::size_t>(i)];
        out.values[static_cast<std::size_t>(i)] = extension_point(f, curve, p.x, p.y);
    });
    return out;
}

ProductField schrodinger_evaluate(const SampledDensity& fhat, const std::vector<double>& x_nodes,
                                  const std::vector<double>& t_nodes) {
    if (!fhat.supported_in(-1.0, 1.0))
        throw std::invalid_argument("fhat must be supported in [-1, 1]");
    const Curve parab = Curve::parabola();
    {
        // same precondition as extension_evaluate with |x| + 2|t|
        double wx = 0.0, wt = 0.0;
        for (double x : x_nodes) wx = std::max(wx, std::abs(x));
        for (double t : t_nodes) wt = std::max(wt, std::abs(t));
        const double sup_dphi = parab.max_abs_dphi(fhat.support_radius());
        if (!fhat.entries.empty() && fhat.grid.step * (wx + wt * sup_dphi) > 0.1)
            throw std::invalid_argument("grid too coarse for |x|, refine h_xi");
    }
    std::vector<cplx> values(x_nodes.size() * t_nodes.size());
    parallel_for(static_cast<std::int64_t>(x_nodes.size()), [&](std::int64_t ix) {
        for (std::size_t it = 0; it < t_nodes.size(); ++it) {
            values[static_cast<std::size_t>(ix) * t_nodes.size() + it] =
                extension_point(fhat, parab, x_nodes[static_cast<std::size_t>(ix)], t_nodes[it]);
        }
    });
    return ProductField::make(x_nodes, t_nodes, 1.0, std::move(values));
}

Vec2 parabolic_rescale(const Cap& sigma, const Vec2& x) {
    const double invK = 1.0 / sigma.K;
    return {invK * (x.x + 2.0 * x.y * sigma.center), invK * invK * x.y};
}

SampledDensity rescaled_cap_density(const SampledDensity& f, const Cap& sigma) {
    const SampledDensity f_sigma = f.restricted(sigma.lo(), sigma.hi());
    // g(eta) = f_sigma(xi_sigma + eta / K) on the image grid: node i of the
    // f-grid maps to node i of the K-dilated, recentered grid, so eta_i =
    // K (xi_i - xi_sigma) exactly.
    const double K = sigma.K;
    FrequencyGrid ggrid = FrequencyGrid::uniform(K * (f.grid.lo - sigma.center),
                                                 K * (f.grid.hi - sigma.center), K * f.grid.step);
    SampledDensity g;
    g.grid = ggrid;
    g.entries = f_sigma.entries;
    return g;
}

double rescale_identity_residual(const SampledDensity& f, const Curve& curve, const Cap& sigma,
                                 const SpatialPointSet& pts) {
    if (curve.kind != CurveKind::parabola)
        throw std::invalid_argument("exact rescaling identity only for parabola");
    const SampledDensity f_sigma = f.restricted(sigma.lo(), sigma.hi());
    if (f_sigma.empty()) throw std::invalid_argument("f_sigma vanishes on the cap");
    const double fs_norm = density_lp_norm(f_sigma, 2.0);
    const SampledDensity g = rescaled_cap_density(f, sigma);
    const double K = sigma.K;

    const Field lhs = extension_evaluate(f_sigma, curve, pts);
    std::vector<double> residuals(pts.points.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(pts.points.size()), [&](std::int64_t i) {
        const Vec2 y = parabolic_rescale(sigma, pts.points[static_cast<std::size_t>(i)]);
        const cplx rhs = extension_point(g, curve, y.x, y.y);
        residuals[static_cast<std::size_t>(i)] =
            std::abs(std::abs(lhs.values[static_cast<std::size_t>(i)]) - std::abs(rhs) / K);
    });
    double worst = 0.0;
    for (double r : residuals) worst = std::max(worst, r);
    return worst / fs_norm;
}

}  // namespace extlab
