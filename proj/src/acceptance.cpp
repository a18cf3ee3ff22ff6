#include "extlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "extlab/broad.hpp"
#include "extlab/experiments.hpp"
#include "extlab/fractal.hpp"
#include "extlab/harness.hpp"
#include "extlab/incidence.hpp"
#include "extlab/io.hpp"
#include "extlab/rng.hpp"
#include "extlab/wavepackets.hpp"

namespace extlab::acceptance {

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> rows;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& s) {
        if (!detail.empty()) detail += "; ";
        detail += s;
    }
};

SpatialPointSet random_ball_points(double R, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec2> pts;
    while (pts.size() < n) {
        const Vec2 p{rng.uniform(-R, R), rng.uniform(-R, R)};
        if (p.norm() <= R) pts.push_back(p);
    }
    return SpatialPointSet::make(R, std::move(pts), 1.0);
}

// ---- criterion 1: exact pointwise broad inequalities -------------------------

Outcome c1_broad_inequalities() {
    Outcome out;
    const double R = 128.0;
    const FrequencyGrid grid = evaluation_grid(R);
    const Curve curve = Curve::parabola();
    double worst_narrow = 0.0, worst_triangle = 0.0;
    for (int cs = 0; cs < 100; ++cs) {
        const double K = (cs % 2 == 0) ? 8.0 : 16.0;
        const int A = 1 + cs % 3;
        const CapDecomposition caps = CapDecomposition::disjoint_cover(K);
        const SampledDensity f = make_random_density(grid, 192, 9000 + cs);
        const SampledDensity f2 = make_random_density(grid, 160, 19000 + cs);
        const SpatialPointSet pts = random_ball_points(R, 100, 500 + cs);
        const double rn = broad_narrow_residual(f, curve, caps, A, pts);
        const int A2 = 1 + (cs % 2);
        const double rt = broad_triangle_residual(f, f2, curve, caps, A, A2, pts);
        worst_narrow = std::max(worst_narrow, rn);
        worst_triangle = std::max(worst_triangle, rt);
        out.rows.push_back("case=" + std::to_string(cs) + " K=" + fmt_double(K) +
                           " A=" + std::to_string(A) + " narrow=" + fmt_double(rn) +
                           " triangle=" + fmt_double(rt));
    }
    out.require(worst_narrow <= 1e-9, "broad-narrow residual " + fmt_double(worst_narrow));
    out.require(worst_triangle <= 1e-9, "broad-triangle residual " + fmt_double(worst_triangle));
    out.note("worst narrow " + fmt_double(worst_narrow) + ", worst triangle " +
             fmt_double(worst_triangle));
    return out;
}

// ---- criterion 2: order statistic == subset enumeration ----------------------

double brute_force_broad(const std::vector<double>& values, int A) {
    const int n = static_cast<int>(values.size());
    if (A > n) return 0.0;
    std::vector<int> idx(static_cast<std::size_t>(A));
    for (int i = 0; i < A; ++i) idx[static_cast<std::size_t>(i)] = i;
    double best = 0.0;
    while (true) {
        double mn = values[static_cast<std::size_t>(idx[0])];
        for (int i = 1; i < A; ++i)
            mn = std::min(mn, values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
        best = std::max(best, mn);
        int i = A - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - A + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < A; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

Outcome c2_broad_equivalence() {
    Outcome out;
    Rng rng(424242);
    std::size_t mismatches = 0;
    for (int v = 0; v < 10000; ++v) {
        const int n = 1 + static_cast<int>(rng.below(20));
        const int A = 1 + static_cast<int>(rng.below(5));
        std::vector<double> values(static_cast<std::size_t>(n));
        for (auto& x : values) x = rng.uniform();
        const double fast = ath_largest(values, A);
        const double slow = brute_force_broad(values, A);
        if (fast != slow) ++mismatches;
    }
    out.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    out.note("10000 vectors, #Sigma <= 20, A <= 5, exact match");
    return out;
}

// ---- criterion 3: wave packet reconstruction + off-tube decay -----------------

Outcome c3_wave_packets() {
    Outcome out;
    double worst = 0.0;
    for (double R : {64.0, 256.0}) {
        const FrequencyGrid grid = packet_grid(R);
        for (int s = 0; s < 20; ++s) {
            const SampledDensity f = make_random_density(grid, 256, 7000 + s);
            const PacketSet ps = build_wave_packets(f, R, 0.05, 0.0);
            const SpatialPointSet pts = random_ball_points(R, 24, 80 + s);
            const double res = reconstruction_residual(f, ps, pts);
            worst = std::max(worst, res);
        }
        out.rows.push_back("R=" + fmt_double(R) + " worst_residual=" + fmt_double(worst));
    }
    out.require(worst <= 1e-9, "reconstruction residual " + fmt_double(worst));

    // Off-tube decay with the frozen bump family at R = 1024. The halfwidth
    // must clear the curvature drift of the packet before the 1e-3 gate is
    // meaningful, which pins eps0 = 0.2 at this scale; the default-geometry
    // value (eps0 = 0.05, drift-limited near 5e-2) is reported alongside.
    const double R = 1024.0;
    auto ratio4 = [&](double eps0) {
        const FrequencyGrid grid = packet_grid(R, eps0);
        std::vector<SampledDensity::Entry> ones;
        for (std::int64_t i = 0; i < grid.count; ++i) {
            const double xi = grid.node(i);
            if (xi >= -1.0 && xi <= 1.0) ones.push_back({i, cplx{1.0, 0.0}});
        }
        const SampledDensity f1 = SampledDensity::from_entries(grid, std::move(ones));
        const PacketSet ps = build_wave_packets(f1, R, eps0, 0.0);
        const std::size_t k = static_cast<std::size_t>(ps.spec().n_theta / 2) *
                                  static_cast<std::size_t>(ps.spec().N_v) +
                              static_cast<std::size_t>(ps.spec().N_v / 2);
        const auto profile = off_tube_decay_profile(ps, k, {0.0, 4.0, 8.0});
        return std::make_pair(profile[1].second, profile[2].second);
    };
    const auto [r4, r8] = ratio4(0.2);
    const auto [d4, d8] = ratio4(0.05);
    out.require(r4 <= 1e-3, "off-tube ratio at 4 halfwidths " + fmt_double(r4));
    out.require(r8 <= 1.1 * r4, "profile rises past 4 halfwidths");
    out.require(d4 <= 0.08, "default-geometry off-tube golden drifted: " + fmt_double(d4));
    out.note("worst reconstruction " + fmt_double(worst) + "; off-tube r(4)=" + fmt_double(r4) +
             " at eps0=0.2, default-geometry r(4)=" + fmt_double(d4));
    (void)d8;
    return out;
}

// ---- criterion 4: parabolic rescaling identity --------------------------------

Outcome c4_rescaling() {
    Outcome out;
    const double R = 256.0;
    const FrequencyGrid grid = evaluation_grid(R);
    const Curve curve = Curve::parabola();
    double worst = 0.0;
    for (double K : {2.0, 8.0}) {
        for (double xs : {0.0, 0.5}) {
            const Cap sigma{xs, 1.0 / (2.0 * K), K};
            const SampledDensity f = make_random_density(grid, 512, 31000 + static_cast<int>(K));
            const SpatialPointSet pts = random_ball_points(R, 50, 60 + static_cast<int>(10 * xs));
            const double res = rescale_identity_residual(f, curve, sigma, pts);
            worst = std::max(worst, res);
            out.rows.push_back("K=" + fmt_double(K) + " xi_sigma=" + fmt_double(xs) +
                               " residual=" + fmt_double(res));
        }
    }
    out.require(worst <= 1e-6, "rescaling residual " + fmt_double(worst));
    out.note("worst residual " + fmt_double(worst));
    return out;
}

// ---- criterion 5: Gauss-sum sharpness ------------------------------------------

Outcome c5_gauss() {
    Outcome out;
    const std::vector<int> q0 = {3, 4, 5, 6, 7};
    const harness::ExperimentOutput res = harness::run_gauss(q0, 2);
    out.rows = res.csv_rows;
    const double slope = res.summary.at("ratio_vs_area_slope").get<double>();
    const double med = res.summary.at("median_vs_R_slope").get<double>();
    const double oracle = res.summary.at("worst_oracle_rel_err").get<double>();
    const double frac = res.summary.at("worst_pointwise_fraction").get<double>();
    out.require(slope >= 0.10 && slope <= 0.23,
                "ratio slope " + fmt_double(slope) + " outside [0.10, 0.23]");
    out.require(med >= -0.65 && med <= -0.52,
                "median-|Ef| slope " + fmt_double(med) + " outside [-0.65, -0.52]");
    out.require(oracle <= 0.05, "oracle mismatch " + fmt_double(oracle));
    out.require(frac >= 0.5, "pointwise floor holds only on " + fmt_double(frac));
    out.note("slope=" + fmt_double(slope) + " median_slope=" + fmt_double(med) +
             " oracle_err=" + fmt_double(oracle));
    return out;
}

// ---- criterion 6: Knapp circular means -----------------------------------------

Outcome c6_knapp() {
    Outcome out;
    const std::vector<double> R_list = {64, 128, 256, 512, 1024};
    for (double p : {1.8, 2.0}) {
        std::vector<std::pair<double, double>> pairs;
        for (double R : R_list) {
            const double mean = circular_means(frostman_knapp(R), R, p);
            pairs.emplace_back(R, mean);
            out.rows.push_back("p=" + fmt_double(p) + " R=" + fmt_double(R) + " mean=" +
                               fmt_double(mean));
        }
        const ExponentFit fit = exponent_fit(pairs);
        const double target = -1.0 / (2.0 * p);
        out.require(std::abs(fit.slope - target) <= 0.05,
                    "p=" + fmt_double(p) + " slope " + fmt_double(fit.slope) + " vs " +
                        fmt_double(target));
        out.note("p=" + fmt_double(p) + " slope=" + fmt_double(fit.slope));
        if (p == 2.0) {
            const double power_slope = 2.0 * fit.slope;
            out.require(std::abs(power_slope + 0.5) <= 0.1,
                        "inner power slope " + fmt_double(power_slope) + " vs -1/2");
        }
    }
    return out;
}

// ---- criterion 7: non-violation sweeps ------------------------------------------

Outcome c7_nonviolation() {
    Outcome out;
    const std::vector<double> R_list = {256, 1024, 4096};
    const auto l2 = harness::run_weighted_l2(R_list, 50, 1);
    out.require(!l2.violation,
                "weighted_l2 growth " + fmt_double(l2.summary.at("fit_slope").get<double>()));
    const auto lq = harness::run_weighted_lq(R_list, 50, 1, 3.6);
    out.require(!lq.violation,
                "weighted_lq growth " + fmt_double(lq.summary.at("fit_slope").get<double>()));
    const auto mt = harness::run_mt(R_list, 50, 1, 3.6);
    out.require(!mt.violation,
                "mt growth " + fmt_double(mt.summary.at("fit_slope").get<double>()));
    out.note("slopes: l2 " + fmt_double(l2.summary.at("fit_slope").get<double>()) + ", lq " +
             fmt_double(lq.summary.at("fit_slope").get<double>()) + ", mt " +
             fmt_double(mt.summary.at("fit_slope").get<double>()));
    for (const auto& r : l2.csv_rows) out.rows.push_back("l2," + r);
    for (const auto& r : lq.csv_rows) out.rows.push_back("lq," + r);
    for (const auto& r : mt.csv_rows) out.rows.push_back("mt," + r);
    return out;
}

// ---- criterion 8: Katz-Tao machinery --------------------------------------------

double brute_force_katz_tao(const std::vector<Vec2>& pts, double delta, double s) {
    double best = 1.0;
    std::vector<double> radii;
    for (double r = delta; r < 1.0; r *= 2.0) radii.push_back(r);
    radii.push_back(1.0);
    for (const auto& x : pts) {
        for (double r : radii) {
            std::size_t count = 0;
            for (const auto& y : pts)
                if (dist(x, y) < r) ++count;
            best = std::max(best, static_cast<double>(count) / std::pow(r / delta, s));
        }
    }
    return best;
}

Outcome c8_katz_tao() {
    Outcome out;
    const double delta = 1.0 / 32.0;
    std::size_t mismatches = 0;
    for (int t = 0; t < 20; ++t) {
        Rng rng(600 + t);
        std::vector<Vec2> pts(200);
        for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
        const double fast = katz_tao_constant(pts, delta, 1.0);
        const double slow = brute_force_katz_tao(pts, delta, 1.0);
        if (fast != slow) ++mismatches;
    }
    out.require(mismatches == 0,
                std::to_string(mismatches) + " brute-force mismatches");

    // 100 seeded clustered inputs for random refinement
    const double rdelta = 1.0 / 64.0;
    int ok = 0;
    double worst_ratio_lo = 10.0, worst_ratio_hi = 0.0;
    for (int s = 0; s < 100; ++s) {
        Rng rng(7100 + s);
        std::vector<Vec2> pts;
        for (int c = 0; c < 20; ++c) {
            const Vec2 center{0.1 + 0.8 * rng.uniform(), 0.1 + 0.8 * rng.uniform()};
            for (int k = 0; k < 30; ++k) {
                pts.push_back({center.x + 6.0 * rdelta * (rng.uniform() - 0.5),
                               center.y + 6.0 * rdelta * (rng.uniform() - 0.5)});
            }
        }
        const RefineResult rr = random_refine(pts, rdelta, 5200 + static_cast<std::uint64_t>(s));
        worst_ratio_lo = std::min(worst_ratio_lo, rr.mass_ratio);
        worst_ratio_hi = std::max(worst_ratio_hi, rr.mass_ratio);
        out.rows.push_back("seed=" + std::to_string(s) + " gamma=" + fmt_double(rr.gamma) +
                           " kept=" + std::to_string(rr.kept.size()) + " constant=" +
                           fmt_double(rr.constant) + " mass_ratio=" + fmt_double(rr.mass_ratio) +
                           " attempts=" + std::to_string(rr.attempts));
        ++ok;
    }
    out.require(ok == 100, "refinement succeeded on " + std::to_string(ok) + "/100");
    out.note("mass ratios in [" + fmt_double(worst_ratio_lo) + ", " + fmt_double(worst_ratio_hi) +
             "]");
    return out;
}

// ---- criterion 9: two-ends Furstenberg ------------------------------------------

Outcome c9_furstenberg() {
    Outcome out;
    const std::vector<double> deltas = {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
    const auto res = harness::run_furstenberg(deltas, 50, 900);
    out.require(!res.violation, "a shading class decays steeper than delta^0.1");
    for (auto it = res.summary.begin(); it != res.summary.end(); ++it)
        out.note(it.key() + "=" + fmt_double(it.value().get<double>()));
    out.rows = res.csv_rows;

    // dual corollary preconditions, exact configurations
    const double delta = 1.0 / 64.0, eps1 = 0.4, eps2 = 0.2;
    const std::int64_t M = 10;
    {
        // disjoint families: distinct = M #Q
        std::vector<Vec2> balls;
        std::vector<std::vector<DualTube>> tq;
        for (int qi = 0; qi < 50; ++qi) {
            balls.push_back({0.1 + 0.015 * qi, 0.2});
            std::vector<DualTube> tubes;
            for (int m = 0; m < M; ++m)
                tubes.push_back({0.05 * m + 0.001 * qi + 0.0001, 2.0 * delta * (qi * M + m)});
            tq.push_back(std::move(tubes));
        }
        const DualTubeRecord rec = dual_tube_count(balls, delta, tq, eps1, eps2, M);
        out.require(rec.distinct == M * 50, "disjoint dual count " + std::to_string(rec.distinct));
        out.require(rec.ratio >= 1.0, "disjoint dual ratio " + fmt_double(rec.ratio));
    }
    {
        // shared bush: distinct = M
        std::vector<Vec2> balls;
        std::vector<std::vector<DualTube>> tq;
        std::vector<DualTube> bush;
        for (int m = 0; m < M; ++m) bush.push_back({0.05 * m + 0.0001, 0.3});
        for (int qi = 0; qi < 50; ++qi) {
            balls.push_back({0.1 + 0.015 * qi, 0.2});
            tq.push_back(bush);
        }
        const DualTubeRecord rec = dual_tube_count(balls, delta, tq, eps1, eps2, M);
        out.require(rec.distinct == M, "bush dual count " + std::to_string(rec.distinct));
        out.note("bush dual ratio " + fmt_double(rec.ratio) + (rec.ratio < 1.0 ? " (flagged)" : ""));
    }
    return out;
}

// ---- criterion 10: refined decoupling -------------------------------------------

Outcome c10_decoupling() {
    Outcome out;
    std::vector<double> medians;
    for (double R : {256.0, 1024.0}) {
        const PacketSet::Spec spec = packet_lattice(R, 0.05);
        std::vector<double> cs;
        for (int cfg = 0; cfg < 20; ++cfg) {
            Rng rng(3300 + cfg + static_cast<int>(R));
            std::vector<std::pair<int, double>> tv;
            std::vector<int> used;
            while (tv.size() < 10) {
                const int th = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n_theta)));
                if (std::find(used.begin(), used.end(), th) != used.end()) continue;
                used.push_back(th);
                const double c_v = std::floor(rng.uniform(-0.25, 0.25) * R / spec.W) * spec.W;
                tv.emplace_back(th, c_v);
            }
            const PacketSet ps = make_packet_atoms(R, 0.05, tv);
            std::vector<Vec2> balls;
            // ball at each pairwise tube-axis crossing that lands in B_{R/2},
            // plus seeded fill
            for (std::size_t a = 0; a < 10; ++a) {
                for (std::size_t b = a + 1; b < 10; ++b) {
                    const Tube ta = ps.tube(a), tb = ps.tube(b);
                    if (std::abs(ta.slope - tb.slope) < 1e-9) continue;
                    const double x2 = (tb.c_v - ta.c_v) / (tb.slope - ta.slope);
                    const double x1 = ta.c_v - x2 * ta.slope;
                    if (Vec2{x1, x2}.norm() <= 0.5 * R && balls.size() < 16)
                        balls.push_back({x1, x2});
                }
            }
            while (balls.size() < 24) {
                const Vec2 p{rng.uniform(-0.5 * R, 0.5 * R), rng.uniform(-0.5 * R, 0.5 * R)};
                balls.push_back(p);
            }
            const DecouplingRecord rec = refined_decoupling_ratio(ps, balls);
            cs.push_back(rec.C_obs);
            out.rows.push_back("R=" + fmt_double(R) + " cfg=" + std::to_string(cfg) + " M=" +
                               std::to_string(rec.M) + " C_obs=" + fmt_double(rec.C_obs));
            out.require(rec.C_obs <= 10.0 * std::pow(R, 0.05),
                        "C_obs " + fmt_double(rec.C_obs) + " above 10 R^0.05 at R=" + fmt_double(R));
        }
        std::sort(cs.begin(), cs.end());
        medians.push_back(cs[cs.size() / 2]);
    }
    const double growth = (std::log(medians[1]) - std::log(medians[0])) /
                          (std::log(1024.0) - std::log(256.0));
    out.require(growth <= 0.1, "C_obs growth exponent " + fmt_double(growth));
    out.note("median C_obs " + fmt_double(medians[0]) + " -> " + fmt_double(medians[1]) +
             ", growth " + fmt_double(growth));
    return out;
}

// ---- criterion 11: determinism ---------------------------------------------------

std::string fast_suite_data(const std::string& dir);

Outcome c11_determinism(const std::string& artifact_dir) {
    Outcome out;
    const std::string a = fast_suite_data(artifact_dir + "/det_a");
    const std::string b = fast_suite_data(artifact_dir + "/det_b");
    out.require(a == b, "fast-suite data.csv differs between identical runs");
    out.note(std::to_string(a.size()) + " bytes compared");
    return out;
}

using CriterionFn = std::function<Outcome()>;

struct Entry {
    int id;
    const char* name;
};

constexpr Entry kEntries[] = {
    {1, "broad_pointwise_inequalities"},
    {2, "broad_order_statistic_equivalence"},
    {3, "wave_packet_reconstruction_and_decay"},
    {4, "parabolic_rescaling_identity"},
    {5, "gauss_sum_sharpness"},
    {6, "knapp_circular_means"},
    {7, "weighted_ratio_non_violation"},
    {8, "katz_tao_machinery"},
    {9, "two_ends_furstenberg"},
    {10, "refined_decoupling"},
    {11, "determinism"},
};

Outcome dispatch(int id, const std::string& artifact_dir) {
    switch (id) {
        case 1: return c1_broad_inequalities();
        case 2: return c2_broad_equivalence();
        case 3: return c3_wave_packets();
        case 4: return c4_rescaling();
        case 5: return c5_gauss();
        case 6: return c6_knapp();
        case 7: return c7_nonviolation();
        case 8: return c8_katz_tao();
        case 9: return c9_furstenberg();
        case 10: return c10_decoupling();
        case 11: return c11_determinism(artifact_dir);
        default: throw std::invalid_argument("unknown criterion id");
    }
}

std::string write_data_csv(const std::vector<CriterionResult>& results, const std::string& dir) {
    std::ostringstream ss;
    ss << "criterion,data\n";
    for (const auto& r : results)
        for (const auto& row : r.data_rows) ss << r.id << ',' << row << '\n';
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/data.csv", std::ios::binary);
    out << ss.str();
    return ss.str();
}

std::string fast_suite_data(const std::string& dir) {
    std::vector<CriterionResult> results;
    for (int id : fast_ids()) results.push_back(run_criterion(id, dir));
    return write_data_csv(results, dir);
}

}  // namespace

const std::vector<int>& fast_ids() {
    static const std::vector<int> ids = {1, 2, 4, 8};
    return ids;
}

const std::vector<int>& full_ids() {
    static const std::vector<int> ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    return ids;
}

CriterionResult run_criterion(int id, const std::string& artifact_dir) {
    CriterionResult res;
    res.id = id;
    for (const auto& e : kEntries)
        if (e.id == id) res.name = e.name;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out = dispatch(id, artifact_dir);
    const auto t1 = std::chrono::steady_clock::now();
    res.pass = out.pass;
    res.detail = out.detail;
    res.data_rows = std::move(out.rows);
    res.seconds = std::chrono::duration<double>(t1 - t0).count();
    return res;
}

std::vector<CriterionResult> run_suite(Suite suite, std::ostream& log,
                                       const std::string& artifact_dir) {
    const auto& ids = suite == Suite::fast ? fast_ids() : full_ids();
    std::vector<CriterionResult> results;
    for (int id : ids) {
        CriterionResult r = run_criterion(id, artifact_dir);
        log << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.name << "  ("
            << fmt_double(r.seconds) << " s)" << (r.detail.empty() ? "" : "  -- " + r.detail)
            << '\n';
        results.push_back(std::move(r));
    }
    write_data_csv(results, artifact_dir);
    return results;
}

}  // namespace extlab::acceptance
