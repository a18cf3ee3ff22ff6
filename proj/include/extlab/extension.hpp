#pragma once

#include "extlab/grid.hpp"

namespace extlab {

enum class CurveKind { parabola, circle_graph };

// Curvature-normalized graph curves on [-1, 1].
//   parabola:     Phi(xi) = xi^2
//   circle_graph: Phi(xi) = -sqrt(1 - (xi/2)^2), |Phi''| in [1/4, 1/2]
struct Curve {
    CurveKind kind = CurveKind::parabola;

    double phi(double xi) const;
    double dphi(double xi) const;
    double max_abs_dphi(double radius) const;  // sup |Phi'| over |xi| <= radius

    static Curve parabola() { return Curve{CurveKind::parabola}; }
    static Curve circle_graph() { return Curve{CurveKind::circle_graph}; }
};

// K^{-1}-interval on the frequency side, halfwidth (2K)^{-1}.
struct Cap {
    double center = 0.0;
    double halfwidth = 0.5;
    double K = 1.0;

    double lo() const { return center - halfwidth; }
    double hi() const { return center + halfwidth; }
};

// Ef(x1, x2) = sum over support nodes of e^{i(x1 xi + x2 Phi(xi))} f(xi) h.
// Throws "grid too coarse for |x|, refine h_xi" when the phase-resolution
// precondition h * sup(|x1| + |x2| sup|Phi'|) <= 1/10 fails on the support.
Field extension_evaluate(const SampledDensity& f, const Curve& curve, const SpatialPointSet& pts);

// single-point kernel shared by extension_evaluate and schrodinger_evaluate
cplx extension_point(const SampledDensity& f, const Curve& curve, double x1, double x2);

// u(x, t) = Ef with the parabola at the point (x, t); definitional wrapper,
// bit-identical to extension_evaluate.
ProductField schrodinger_evaluate(const SampledDensity& fhat, const std::vector<double>& x_nodes,
                                  const std::vector<double>& t_nodes);

// L_sigma(x1, x2) = (K^{-1}(x1 + 2 x2 xi_sigma), K^{-2} x2)
Vec2 parabolic_rescale(const Cap& sigma, const Vec2& x);

// g(eta) = f_sigma(xi_sigma + K^{-1} eta) realized on the exactly-mapped grid
SampledDensity rescaled_cap_density(const SampledDensity& f, const Cap& sigma);

// max over pts of | |Ef_sigma(x)| - K^{-1} |Eg(L_sigma x)| | / ||f_sigma||_2;
// the modulation phase e^{i(x1 xi_sigma + x2 xi_sigma^2)} cancels in modulus.
double rescale_identity_residual(const SampledDensity& f, const Curve& curve, const Cap& sigma,
                                 const SpatialPointSet& pts);

}  // namespace extlab
