#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "extlab/geometry.hpp"

namespace extlab {

using cplx = std::complex<double>;

// Uniform midpoint grid on [lo, hi]: node_i = lo + (i + 1/2) * step.
// (hi - lo) / step must be an integer (within 1e-9).
struct FrequencyGrid {
    double lo = -1.0;
    double hi = 1.0;
    double step = 0.0;
    std::int64_t count = 0;

    static FrequencyGrid uniform(double lo, double hi, double step);
    // grid with exactly n nodes of the given step, centered at 0
    static FrequencyGrid centered(std::int64_t n, double step);

    double node(std::int64_t i) const { return lo + (static_cast<double>(i) + 0.5) * step; }
    // index of the cell containing xi (clamped)
    std::int64_t cell_of(double xi) const;
};

// Complex density f on a frequency grid, stored as its nonzero nodes
// (sorted by node index). Dense densities keep every node; the sparse form
// is what makes the large-R arithmetic examples affordable.
struct SampledDensity {
    FrequencyGrid grid;

    struct Entry {
        std::int64_t node;
        cplx value;
    };
    std::vector<Entry> entries;

    static SampledDensity from_dense(const FrequencyGrid& g, const std::vector<cplx>& values);
    static SampledDensity from_entries(const FrequencyGrid& g, std::vector<Entry> entries);

    bool empty() const { return entries.empty(); }
    // max |node position| over the support, 0 if empty
    double support_radius() const;
    // support contained in [lo, hi]?
    bool supported_in(double lo, double hi) const;

    SampledDensity scaled(cplx c) const;
    // pointwise sum; grids must be identical
    SampledDensity plus(const SampledDensity& other) const;
    // restriction to a half-open interval [a, b) of frequencies
    SampledDensity restricted(double a, double b) const;
};

// Finite spatial point set in the closed ball of radius R (tolerance 1).
// cell_volume is the quadrature weight per point (pi for unit-ball centers).
struct SpatialPointSet {
    double R = 0.0;
    std::vector<Vec2> points;
    double cell_volume = 1.0;

    static SpatialPointSet make(double R, std::vector<Vec2> points, double cell_volume = 1.0);
};

// Complex samples over a SpatialPointSet.
struct Field {
    SpatialPointSet pts;
    std::vector<cplx> values;
};

// Samples on a rectangular (x, t) product grid, row-major over x.
struct ProductField {
    std::vector<double> x_nodes;
    std::vector<double> t_nodes;
    double dx = 1.0;
    std::vector<cplx> values;  // values[ix * t_nodes.size() + it]

    static ProductField make(std::vector<double> x, std::vector<double> t, double dx,
                             std::vector<cplx> values);
    cplx at(std::size_t ix, std::size_t it) const { return values[ix * t_nodes.size() + it]; }
};

// Union of unit balls in B_R given by centers; pairwise separation >= 1/2.
// katz_tao_C and gamma are the cached fractal statistics of the R^{-1} dilate.
struct WeightSet {
    double R = 0.0;
    std::vector<Vec2> centers;
    double katz_tao_C = 0.0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::string kind;

    double area() const { return 3.14159265358979323846 * static_cast<double>(centers.size()); }
    SpatialPointSet to_point_set() const;
    void validate() const;  // throws on separation / ball violations
};

// ---- norms -----------------------------------------------------------------

// (sum |v|^p cell_volume)^{1/p}; p = inf -> max modulus.
double norm(const Field& field, double p);
// weighted variant: field points must coincide with the weight's ball centers
// and the unit-ball convention (cell volume pi) is applied.
double norm(const Field& field, double p, const WeightSet& weight);

// (sum_x (sup_t |u(x,t)|)^q dx)^{1/q}
double mixed_norm(const ProductField& field, double q);

// (sum_nodes |f|^p h)^{1/p}
double density_lp_norm(const SampledDensity& f, double p);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace extlab
