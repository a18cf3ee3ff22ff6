#include "extlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "extlab/fft.hpp"
#include "extlab/parallel.hpp"
#include "extlab/rng.hpp"

namespace extlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

ExponentFit exponent_fit(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 3) throw std::invalid_argument("exponent fit needs at least 3 pairs");
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(pairs.size()), ly(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!(pairs[i].first > 0.0) || !(pairs[i].second > 0.0))
            throw std::invalid_argument("exponent fit needs positive pairs");
        lx[i] = std::log(pairs[i].first);
        ly[i] = std::log(pairs[i].second);
        sx += lx[i];
        sy += ly[i];
    }
    const double n = static_cast<double>(pairs.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("degenerate fit: all sizes equal");
    ExponentFit fit;
    fit.n = static_cast<int>(pairs.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss_res += r * r;
    }
    fit.stderr_slope = pairs.size() > 2
                           ? std::sqrt(ss_res / (n - 2.0) / sxx)
                           : 0.0;
    return fit;
}

SampledDensity make_random_density(const FrequencyGrid& grid, std::int64_t n_nodes,
                                   std::uint64_t seed, double support_lo, double support_hi) {
    Rng rng(seed);
    std::int64_t lo = grid.cell_of(support_lo);
    if (grid.node(lo) < support_lo) ++lo;
    std::int64_t hi = grid.cell_of(support_hi);
    if (grid.node(hi) > support_hi) --hi;
    if (hi < lo) throw std::invalid_argument("support interval misses every node");
    std::vector<SampledDensity::Entry> entries;
    std::vector<std::int64_t> used;
    for (std::int64_t k = 0; k < n_nodes; ++k) {
        const std::int64_t node = lo + static_cast<std::int64_t>(rng.below(
                                           static_cast<std::uint64_t>(hi - lo + 1)));
        used.push_back(node);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    entries.reserve(used.size());
    for (std::int64_t node : used) entries.push_back({node, cplx{rng.normal(), rng.normal()}});
    return SampledDensity::from_entries(grid, std::move(entries));
}

FrequencyGrid evaluation_grid(double R) {
    // resolves |x1| + |x2| sup|Phi'| <= 3 R across B_R for both curves
    const auto m = static_cast<std::int64_t>(std::ceil(32.0 * R));
    const double h = 1.0 / static_cast<double>(m);
    return FrequencyGrid::centered(2 * m + 2, h);
}

// ---- weighted broad ratios ----------------------------------------------------

namespace {
void katz_tao_precheck(const WeightSet& X) {
    double c = X.katz_tao_C;
    if (c <= 0.0) {
        std::vector<Vec2> dilated(X.centers.size());
        for (std::size_t i = 0; i < X.centers.size(); ++i) dilated[i] = X.centers[i] * (1.0 / X.R);
        c = katz_tao_constant(dilated, 1.0 / X.R, 1.0);
    }
    if (c > 8.0 * std::log(X.R))
        throw std::invalid_argument("Katz-Tao precheck failed: constant exceeds 8 log R");
}
}  // namespace

double weighted_l2_ratio(const SampledDensity& f, const WeightSet& X, double K, int A,
                         const Curve& curve) {
    katz_tao_precheck(X);
    const double fnorm = density_lp_norm(f, 2.0);
    if (fnorm == 0.0) return 0.0;
    const Field br = broad_field(f, curve, CapDecomposition::disjoint_cover(K), A, X.to_point_set());
    return norm(br, 2.0) / (std::pow(X.area(), 2.0 / 9.0) * fnorm);
}

double weighted_lq_ratio(const SampledDensity& f, const WeightSet& X, double K, int A, double q,
                         const Curve& curve, bool allow_low_q) {
    if (q < 18.0 / 5.0 - 1e-12 && !allow_low_q)
        throw std::invalid_argument("q below 18/5 requires the exploration override");
    katz_tao_precheck(X);
    const double fnorm = density_lp_norm(f, 2.0);
    if (fnorm == 0.0) return 0.0;
    const Field br = broad_field(f, curve, CapDecomposition::disjoint_cover(K), A, X.to_point_set());
    return norm(br, q) / fnorm;
}

// ---- Gauss-sum sharpness ------------------------------------------------------

GaussSweepResult gauss_sharpness_sweep(std::span<const int> q0_list, int A) {
    GaussSweepResult result;
    const Curve curve = Curve::parabola();
    const CapDecomposition caps = CapDecomposition::disjoint_cover(1.5);
    for (int q0 : q0_list) {
        const GaussExample ex = make_gauss_example(q0);
        const double R = ex.scale;
        const auto rs = static_cast<std::int64_t>(std::llround(std::sqrt(R)));
        const SpatialPointSet pts = ex.weight.to_point_set();
        const auto mags = cap_field_magnitudes(ex.density, curve, caps, pts);

        GaussSweepRow row;
        row.q0 = q0;
        row.R = R;
        row.X_area = ex.weight.area();
        row.centers = ex.weight.centers.size();
        row.f_norm2 = density_lp_norm(ex.density, 2.0);

        std::vector<double> abs_ef(pts.points.size());
        double br2 = 0.0;
        for (std::size_t i = 0; i < pts.points.size(); ++i) {
            // |Ef| = |sum of cap fields|: recompute the full field cheaply
            const double br = ath_largest(mags[i], A);
            br2 += br * br * pts.cell_volume;
        }
        const Field full = extension_evaluate(ex.density, curve, pts);
        for (std::size_t i = 0; i < pts.points.size(); ++i) abs_ef[i] = std::abs(full.values[i]);
        row.br_l2 = std::sqrt(br2);
        row.ratio = row.br_l2 / row.f_norm2;

        std::vector<double> sorted = abs_ef;
        std::sort(sorted.begin(), sorted.end());
        row.median_Ef = sorted[sorted.size() / 2];
        const double floor_val = 0.01 * std::pow(R, -7.0 / 12.0);
        std::size_t above = 0;
        for (double v : abs_ef)
            if (v >= floor_val) ++above;
        row.pointwise_fraction = static_cast<double>(above) / static_cast<double>(abs_ef.size());

        // direct Gauss-sum oracle on a deterministic subsample
        const std::size_t stride = std::max<std::size_t>(1, pts.points.size() / 128);
        const double w = 1.0 / (50.0 * R);
        double worst = 0.0;
        for (std::size_t i = 0; i < pts.points.size(); i += stride) {
            cplx s{0.0, 0.0};
            for (std::int64_t k = 0; k <= rs; ++k) {
                const double xi = static_cast<double>(k) / static_cast<double>(rs) - 0.5;
                const double ph = pts.points[i].x * xi + pts.points[i].y * xi * xi;
                s += cplx{std::cos(ph), std::sin(ph)};
            }
            const double oracle = w * std::abs(s);
            if (oracle > 1e-12)
                worst = std::max(worst, std::abs(abs_ef[i] - oracle) / oracle);
        }
        row.oracle_max_rel_err = worst;
        result.rows.push_back(row);
    }
    std::vector<std::pair<double, double>> area_ratio, r_median;
    for (const auto& r : result.rows) {
        area_ratio.emplace_back(r.X_area, r.ratio);
        r_median.emplace_back(r.R, r.median_Ef);
    }
    result.ratio_vs_area = exponent_fit(area_ratio);
    result.median_vs_R = exponent_fit(r_median);
    return result;
}

// ---- circular means -----------------------------------------------------------

double circular_means(const FrostmanMeasure& mu, double R, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("invalid exponent");
    // x2 carries the modulated factor, so it needs twice the resolution
    if (mu.is_separable() && (mu.d1() * R > 0.105 || mu.d2() * 2.0 * R > 0.105))
        throw std::invalid_argument("measure grid too coarse for this R");
    const auto n_ang = static_cast<std::int64_t>(std::ceil(kTwoPi * 10.0 * R));
    std::vector<double> vals(static_cast<std::size_t>(n_ang), 0.0);
    parallel_for(n_ang, [&](std::int64_t a) {
        const double th = kTwoPi * (static_cast<double>(a) + 0.5) / static_cast<double>(n_ang);
        const Vec2 omega{R * std::cos(th), R * std::sin(th)};
        vals[static_cast<std::size_t>(a)] = std::abs(mu.fourier(omega));
    });
    double acc = 0.0;
    const double dth = kTwoPi / static_cast<double>(n_ang);
    for (double v : vals) acc += std::pow(v, p) * dth;
    return std::pow(acc, 1.0 / p);
}

ExponentFit sigma_p_fit(const MeasureFamily& family, double p, std::span<const double> R_list) {
    if (R_list.size() < 4) throw std::invalid_argument("sigma_p fit needs >= 4 scales");
    std::vector<std::pair<double, double>> pairs;
    for (double R : R_list) {
        const FrostmanMeasure mu = family(R);
        pairs.emplace_back(R, circular_means(mu, R, p));
    }
    return exponent_fit(pairs);
}

// ---- Mizohata-Takeuchi ---------------------------------------------------------

namespace {

// best count of projected points inside a sliding window of given width;
// values arrive as (projection, point index) sorted by projection
std::size_t max_window_count(const std::vector<std::pair<double, std::uint32_t>>& sorted,
                             double width) {
    std::size_t best = 0, a = 0;
    for (std::size_t b = 0; b < sorted.size(); ++b) {
        while (sorted[b].first - sorted[a].first > width) ++a;
        best = std::max(best, b - a + 1);
    }
    return best;
}

}  // namespace

double mt_weight(const WeightSet& X) {
    return mt_weight_with_direction_spacing(X, 1.0 / (4.0 * X.R));
}

// Unit-width slab counts, exact in the offset. For X inside B_R a slab is a
// 1 x R tube up to the stated factor-2 length convention. Consecutive
// directions nearly preserve the projection order, so each thread keeps its
// order and repairs it by insertion, which makes dense direction grids cheap.
double mt_weight_with_direction_spacing(const WeightSet& X, double spacing) {
    if (X.centers.empty()) throw std::invalid_argument("empty weight set");
    const auto n_dir = static_cast<std::int64_t>(std::ceil(kPi / spacing));
    const std::size_t n = X.centers.size();
    const int jobs = std::max(1, parallel_jobs());
    std::vector<std::size_t> best_per_job(static_cast<std::size_t>(jobs), 0);
    const std::int64_t chunk = (n_dir + jobs - 1) / jobs;
    parallel_for(static_cast<std::int64_t>(jobs), [&](std::int64_t job) {
        const std::int64_t lo = job * chunk;
        const std::int64_t hi = std::min(n_dir, lo + chunk);
        if (lo >= hi) return;
        std::vector<std::pair<double, std::uint32_t>> proj(n);
        std::size_t best = 0;
        for (std::int64_t a = lo; a < hi; ++a) {
            const double th = kPi * static_cast<double>(a) / static_cast<double>(n_dir);
            const Vec2 nrm{std::cos(th), std::sin(th)};
            if (a == lo) {
                for (std::size_t i = 0; i < n; ++i)
                    proj[i] = {X.centers[i].dot(nrm), static_cast<std::uint32_t>(i)};
                std::sort(proj.begin(), proj.end());
            } else {
                for (auto& p : proj) p.first = X.centers[p.second].dot(nrm);
                for (std::size_t i = 1; i < n; ++i) {  // nearly sorted
                    auto v = proj[i];
                    std::size_t j = i;
                    while (j > 0 && proj[j - 1].first > v.first) {
                        proj[j] = proj[j - 1];
                        --j;
                    }
                    proj[j] = v;
                }
            }
            best = std::max(best, max_window_count(proj, 1.0));
        }
        best_per_job[static_cast<std::size_t>(job)] = best;
    });
    std::size_t best = 0;
    for (std::size_t b : best_per_job) best = std::max(best, b);
    return static_cast<double>(best) * kPi;
}

double mt_ratio(const SampledDensity& f, const WeightSet& X, double p, bool allow_low_p) {
    if (p < 18.0 / 5.0 - 1e-12 && !allow_low_p)
        throw std::invalid_argument("p below 18/5 requires the exploration override");
    const double fnorm = density_lp_norm(f, 2.0);
    if (fnorm == 0.0) return 0.0;
    const Field field = extension_evaluate(f, Curve::parabola(), X.to_point_set());
    const double lhs = std::pow(norm(field, p), p);
    return lhs / (mt_weight(X) * std::pow(fnorm, p));
}

// ---- maximal Schrodinger -------------------------------------------------------

FrequencyGrid schrodinger_grid(double R) {
    const auto M = next_pow2(static_cast<std::size_t>(std::ceil(kTwoPi * 60.0 * R)));
    const double h = kTwoPi / static_cast<double>(M);
    const auto half = static_cast<std::int64_t>(std::ceil(1.0 / h)) + 1;
    return FrequencyGrid::centered(2 * half, h);
}

namespace {

// u(x) = sum_j c_j e^{i x xi_j} for all integer x in [-4R, 4R] via one
// zero-padded FFT; xi_j = (j - n/2 + 1/2) h with h = 2 pi / M.
struct LatticeEvaluator {
    std::int64_t M = 0;
    std::int64_t half_nodes = 0;  // n/2
    double h = 0.0;

    std::vector<cplx> eval(const std::vector<std::pair<std::int64_t, cplx>>& coeffs,
                           std::int64_t x_abs) const {
        std::vector<cplx> bins(static_cast<std::size_t>(M), cplx{0.0, 0.0});
        for (const auto& [node, c] : coeffs) {
            const std::int64_t lat = node - half_nodes;  // signed lattice index
            const auto r = static_cast<std::size_t>((lat % M + M) % M);
            bins[r] += c;
        }
        fft_pow2(bins, +1);  // X(x) = sum_r bins[r] e^{+2 pi i r x / M}
        std::vector<cplx> out(static_cast<std::size_t>(2 * x_abs + 1));
        for (std::int64_t x = -x_abs; x <= x_abs; ++x) {
            const auto r = static_cast<std::size_t>((x % M + M) % M);
            const double ph = 0.5 * h * static_cast<double>(x);
            out[static_cast<std::size_t>(x + x_abs)] =
                bins[r] * cplx{std::cos(ph), std::sin(ph)} * h;
        }
        return out;
    }
};

}  // namespace

MaxSchrodingerRecord maximal_schrodinger_norm(const SampledDensity& fhat, double R, double q,
                                              double p) {
    if (!fhat.supported_in(-1.0, 1.0))
        throw std::invalid_argument("fhat must be supported in [-1, 1]");
    const FrequencyGrid want = schrodinger_grid(R);
    if (std::abs(fhat.grid.step - want.step) > 1e-15 || fhat.grid.count != want.count)
        throw std::invalid_argument("build fhat on schrodinger_grid(R)");
    MaxSchrodingerRecord rec;
    for (const auto& e : fhat.entries) rec.tail_bound += std::abs(e.value) * fhat.grid.step;

    const auto x_abs = static_cast<std::int64_t>(std::llround(4.0 * R));
    const auto t_abs = static_cast<std::int64_t>(std::llround(R));
    // the FFT ring is the full frequency lattice of period 2 pi / h, so that
    // e^{i x xi_j} = e^{2 pi i x lat_j / M} exactly for integer x
    const auto M_ring = static_cast<std::int64_t>(std::llround(kTwoPi / fhat.grid.step));
    if (!is_pow2(static_cast<std::size_t>(M_ring)) ||
        std::abs(kTwoPi / static_cast<double>(M_ring) - fhat.grid.step) > 1e-15)
        throw std::invalid_argument("build fhat on schrodinger_grid(R)");
    LatticeEvaluator lat{M_ring, fhat.grid.count / 2, fhat.grid.step};
    if (lat.M < fhat.grid.count || lat.M < 2 * x_abs + 2)
        throw std::runtime_error("FFT ring smaller than grid");

    bool real_fhat = true;
    for (const auto& e : fhat.entries)
        if (e.value.imag() != 0.0) real_fhat = false;

    const std::int64_t t_lo = real_fhat ? 0 : -t_abs;
    std::vector<double> supmax(static_cast<std::size_t>(2 * x_abs + 1), 0.0);
    std::vector<std::vector<double>> partial(
        static_cast<std::size_t>(parallel_jobs()),
        std::vector<double>(static_cast<std::size_t>(2 * x_abs + 1), 0.0));
    const std::int64_t n_t = t_abs - t_lo + 1;
    parallel_for(n_t, [&](std::int64_t it) {
        // slot by chunk matches the parallel_for partition, so writes never race
        const int jobs = std::max(1, parallel_jobs());
        const std::int64_t chunk = (n_t + jobs - 1) / jobs;
        const int my_slot = static_cast<int>(it / chunk);
        const double t = static_cast<double>(t_lo + it);
        std::vector<std::pair<std::int64_t, cplx>> coeffs;
        coeffs.reserve(fhat.entries.size());
        for (const auto& e : fhat.entries) {
            const double xi = fhat.grid.node(e.node);
            const double ph = t * xi * xi;
            coeffs.emplace_back(e.node, e.value * cplx{std::cos(ph), std::sin(ph)});
        }
        const auto u = lat.eval(coeffs, x_abs);
        auto& sm = partial[static_cast<std::size_t>(my_slot)];
        const std::size_t nx = u.size();
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double a = std::abs(u[ix]);
            sm[ix] = std::max(sm[ix], a);
            if (real_fhat) sm[nx - 1 - ix] = std::max(sm[nx - 1 - ix], a);
        }
    });
    for (const auto& sm : partial)
        for (std::size_t ix = 0; ix < supmax.size(); ++ix) supmax[ix] = std::max(supmax[ix], sm[ix]);

    double lhs_q = 0.0;
    for (double v : supmax) lhs_q += std::pow(v, q);
    rec.lhs = std::pow(lhs_q, 1.0 / q);  // dx = 1

    // ||f||_p on the quarter-integer grid over [-8R, 8R]
    {
        const auto y_abs = static_cast<std::int64_t>(std::llround(32.0 * R));  // in 1/4 steps
        LatticeEvaluator lat4{4 * lat.M, fhat.grid.count / 2, fhat.grid.step / 4.0};
        // y = n/4: e^{i (n/4) xi} = e^{i n (xi/4)}: reuse with scaled lattice
        std::vector<std::pair<std::int64_t, cplx>> coeffs;
        for (const auto& e : fhat.entries) coeffs.emplace_back(e.node, e.value);
        // scaled lattice: node spacing h/4 on ring 4M; lattice index must be
        // multiplied by 1 (the node index embeds as before, ring is 4x)
        std::vector<cplx> bins(static_cast<std::size_t>(lat4.M), cplx{0.0, 0.0});
        for (const auto& [node, c] : coeffs) {
            const std::int64_t latidx = node - fhat.grid.count / 2;
            const auto r = static_cast<std::size_t>((latidx % lat4.M + lat4.M) % lat4.M);
            bins[r] += c;
        }
        fft_pow2(bins, +1);
        double acc = 0.0;
        for (std::int64_t n = -y_abs; n <= y_abs; ++n) {
            const auto r = static_cast<std::size_t>((n % lat4.M + lat4.M) % lat4.M);
            const double ph = 0.5 * fhat.grid.step * static_cast<double>(n) / 4.0;
            const cplx v = bins[r] * cplx{std::cos(ph), std::sin(ph)} *
                           (fhat.grid.step / kTwoPi);
            acc += std::pow(std::abs(v), p) * 0.25;
        }
        rec.f_norm_p = std::pow(acc, 1.0 / p);
    }
    rec.bound = std::pow(R, 0.5 - 1.0 / p) * rec.f_norm_p;
    rec.ratio = rec.bound > 0.0 ? rec.lhs / rec.bound : 0.0;
    return rec;
}

}  // namespace extlab
