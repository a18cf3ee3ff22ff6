#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "extlab/grid.hpp"

namespace extlab {

// max over centers x in E and dyadic r in {delta, 2delta, ..., >=1} of
// #(E cap B(x, r)) / (r/delta)^s. Centers are restricted to E's own points
// and radii to dyadics, which tracks the true sup within a factor 2^{s+1}.
double katz_tao_constant(std::span<const Vec2> pts, double delta, double s);

// gamma_X = sup |X cap B(x,r)| delta^{-2} / (r/delta) with |X cap B| counted
// as (#centers in B) * pi * delta^2; same center/radius convention.
double gamma_constant(std::span<const Vec2> centers, double delta);

struct RefineResult {
    std::vector<Vec2> kept;
    double gamma = 0.0;           // gamma of the input
    double constant = 0.0;        // Katz-Tao constant of the output
    double mass_ratio = 0.0;      // |X'| / (gamma^{-1} |X|)
    int attempts = 0;
};

// Keep each ball with probability 1/gamma_X; retry (<= 20, reseeded) until
// the refined set passes katz_tao_constant(., delta, 1) <= 8 log(1/delta)
// and the surviving mass lands in [1/4, 4] of gamma^{-1}|X|.
RefineResult random_refine(std::span<const Vec2> centers, double delta, std::uint64_t seed);

enum class WeightKind { tube, lattice, random_katz_tao, gauss_rational, bush };

struct WeightParams {
    std::int64_t count = 0;  // target ball count (0 = kind default)
    int q0 = 0;              // gauss_rational: R must equal q0^6
};

WeightSet generate_weight(WeightKind kind, double R, std::uint64_t seed,
                          const WeightParams& params = {});

// The arithmetic weight of the sharp example together with its density:
// unit balls at x = (2 pi sqrt(R) (a/q + m), 2 pi R b/q) for odd q in
// [q0, 2q0], a, b in [q0, 2q0] coprime to q, clipped to the ball of radius
// 4 pi R; f is the indicator of 1/(100R)-neighborhoods of the shifted
// lattice sqrt(R)^{-1} Z on [-1/2, 1/2].
struct GaussExample {
    WeightSet weight;       // weight.R is the ball radius (4 pi R)
    double scale = 0.0;     // the underlying R = q0^6
    SampledDensity density;
};
GaussExample make_gauss_example(int q0);

// Probability measure on [0,1]^2 with a 1-dimensional Frostman bound,
// stored either as weighted atoms or as a separable product density.
class FrostmanMeasure {
public:
    struct Atom {
        Vec2 x;
        cplx density;  // integrated complex weight carried by the atom
        double mass;   // |density|
    };

    static FrostmanMeasure from_atoms(std::vector<Atom> atoms);
    // separable product: sum_{i,j} w1[i] w2[j] at (x1[i], x2[j]), cell d1*d2
    static FrostmanMeasure separable(std::vector<double> x1, std::vector<cplx> w1, double d1,
                                     std::vector<double> x2, std::vector<cplx> w2, double d2);

    bool is_separable() const { return separable_; }
    double total_mass() const;  // total variation, 1 after normalization
    void normalize();

    // mu_hat(omega) = sum e^{-i omega . x} (complex density) dA
    cplx fourier(const Vec2& omega) const;

    const std::vector<Atom>& atoms() const;  // atom view (separable expands lazily)

    // separable access for the fast circular-means path
    const std::vector<double>& x1() const { return x1_; }
    const std::vector<double>& x2() const { return x2_; }
    const std::vector<cplx>& w1() const { return w1_; }
    const std::vector<cplx>& w2() const { return w2_; }
    double d1() const { return d1_; }
    double d2() const { return d2_; }

private:
    bool separable_ = false;
    mutable std::vector<Atom> atoms_;
    std::vector<double> x1_, x2_;
    std::vector<cplx> w1_, w2_;
    double d1_ = 0.0, d2_ = 0.0;
};

// Knapp-type sharp measure for the circular-means decay: a modulated
// R^{-1/2} x 1 tube in [0,1]^2, dmu ~ sqrt(R) e^{iR x2} phi(sqrt(R)(x1-1/2))
// phi(2 x2 - 1) dx, normalized to total variation 1.
FrostmanMeasure frostman_knapp(double R);

// sup over measure-cell centers and dyadic radii of |mu|(B_r) / r^s.
double check_frostman(const FrostmanMeasure& mu, double s = 1.0);

}  // namespace extlab
