#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "extlab/broad.hpp"
#include "extlab/extension.hpp"
#include "extlab/fractal.hpp"
#include "extlab/grid.hpp"

namespace extlab {

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int n = 0;
};

// least squares on (log size, log value); values must be positive
ExponentFit exponent_fit(std::span<const std::pair<double, double>> pairs);

// random sparse density: n_nodes random grid nodes in [support_lo, support_hi],
// complex-normal values
SampledDensity make_random_density(const FrequencyGrid& grid, std::int64_t n_nodes,
                                   std::uint64_t seed, double support_lo = -1.0,
                                   double support_hi = 1.0);

// grid fine enough for evaluation across all of B_R (both curves)
FrequencyGrid evaluation_grid(double R);

// ---- weighted broad ratios ---------------------------------------------------

// ||Br_A Ef||_{L^2(X)} / (|X|^{2/9} ||f||_2); throws unless the R^{-1}-dilate
// of X passes the Katz-Tao (R^{-1},1) check with constant <= 8 log R.
double weighted_l2_ratio(const SampledDensity& f, const WeightSet& X, double K, int A,
                         const Curve& curve);

// ||Br_A Ef||_{L^q(X)} / ||f||_2 with q >= 18/5 (override for exploration)
double weighted_lq_ratio(const SampledDensity& f, const WeightSet& X, double K, int A, double q,
                         const Curve& curve, bool allow_low_q = false);

// ---- Gauss-sum sharpness ------------------------------------------------------

struct GaussSweepRow {
    int q0 = 0;
    double R = 0.0;
    double X_area = 0.0;
    std::size_t centers = 0;
    double f_norm2 = 0.0;
    double br_l2 = 0.0;
    double ratio = 0.0;          // ||Br_A Ef||_{L^2(X)} / ||f||_2
    double median_Ef = 0.0;
    double pointwise_fraction = 0.0;  // fraction of centers with |Ef| >= 0.01 R^{-7/12}
    double oracle_max_rel_err = 0.0;
};

struct GaussSweepResult {
    std::vector<GaussSweepRow> rows;
    ExponentFit ratio_vs_area;     // target slope 1/6
    ExponentFit median_vs_R;       // target slope -7/12
};

// fixed K = 1.5 cover (3 caps) so the cap structure is identical across the
// sweep; A defaults to 2
GaussSweepResult gauss_sharpness_sweep(std::span<const int> q0_list, int A = 2);

// ---- circular means of fractal measures --------------------------------------

// (int_{S^1} |mu_hat(R xi)|^p dsigma)^{1/p}, angular step 1/(10R)
double circular_means(const FrostmanMeasure& mu, double R, double p);

using MeasureFamily = std::function<FrostmanMeasure(double R)>;

// fitted decay exponent of circular_means vs R
ExponentFit sigma_p_fit(const MeasureFamily& family, double p, std::span<const double> R_list);

// ---- Mizohata-Takeuchi --------------------------------------------------------

// w_R(X): best 1 x R tube mass, direction grid spacing 1/(4R), offsets exact
// (sliding window); counts * pi.
double mt_weight(const WeightSet& X);
// same with an explicit direction spacing (finer-scan cross checks)
double mt_weight_with_direction_spacing(const WeightSet& X, double spacing);

// ||Ef||^p_{L^p(X)} / (w_R(X) ||f||_2^p), p >= 18/5 unless overridden
double mt_ratio(const SampledDensity& f, const WeightSet& X, double p, bool allow_low_p = false);

// ---- maximal Schrodinger ------------------------------------------------------

struct MaxSchrodingerRecord {
    double lhs = 0.0;         // ||e^{it Delta} f||_{L^q_x L^inf_t}
    double f_norm_p = 0.0;
    double bound = 0.0;       // R^{1/2 - 1/p} ||f||_p
    double ratio = 0.0;
    double tail_bound = 0.0;  // ||fhat||_1 cap on the truncated |x| > 4R field
};

// grid the fhat input must live on (uniform step 2 pi / M, M a power of two)
FrequencyGrid schrodinger_grid(double R);

// x on integer steps [-4R, 4R], t on unit steps [-R, R], ||f||_p from the
// inverse transform on step-1/4 grid over [-8R, 8R]
MaxSchrodingerRecord maximal_schrodinger_norm(const SampledDensity& fhat, double R, double q,
                                              double p);

}  // namespace extlab
