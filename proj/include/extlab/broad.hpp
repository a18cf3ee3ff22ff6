#pragma once

#include <span>
#include <vector>

#include "extlab/extension.hpp"
#include "extlab/grid.hpp"

namespace extlab {

// Cover of [-1, 1] by K^{-1}-caps. Disjoint mode uses half-open cells with
// boundary ties broken leftward; overlapping mode widens each cap by 1/3 so
// that sum_sigma 1_sigma is 1 or 2 pointwise.
struct CapDecomposition {
    double K = 1.0;
    bool disjoint = true;
    std::vector<Cap> caps;

    static CapDecomposition disjoint_cover(double K);
    static CapDecomposition overlapping_cover(double K);

    std::size_t size() const { return caps.size(); }
    // disjoint mode only: index of the cap owning frequency xi
    std::size_t cap_index_of(double xi) const;
    SampledDensity restrict_to_cap(const SampledDensity& f, std::size_t cap) const;
};

// A-th largest element; 0 when A exceeds the length (max over an empty
// family of subsets). A <= 0 is an error.
double ath_largest(std::span<const double> values, int A);

// |Ef_sigma(x)| for every cap and point: row x, column sigma.
std::vector<std::vector<double>> cap_field_magnitudes(const SampledDensity& f, const Curve& curve,
                                                      const CapDecomposition& caps,
                                                      const SpatialPointSet& pts);

// Br_A Ef as a field: value at x is the A-th largest of {|Ef_sigma(x)|}.
Field broad_field(const SampledDensity& f, const Curve& curve, const CapDecomposition& caps, int A,
                  const SpatialPointSet& pts);

// max over pts of (|Ef| - A max_sigma |Ef_sigma| - #Sigma Br_A Ef)^+ / ||f||_2
double broad_narrow_residual(const SampledDensity& f, const Curve& curve,
                             const CapDecomposition& caps, int A, const SpatialPointSet& pts);

// max over pts of (Br_{A1+A2} E(f1+f2) - Br_{A1} Ef1 - Br_{A2} Ef2)^+
double broad_triangle_residual(const SampledDensity& f1, const SampledDensity& f2,
                               const Curve& curve, const CapDecomposition& caps, int A1, int A2,
                               const SpatialPointSet& pts);

}  // namespace extlab
