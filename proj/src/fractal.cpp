#include "extlab/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "extlab/rng.hpp"

namespace extlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> dyadic_radii(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    std::vector<double> radii;
    for (double r = delta; r < 1.0; r *= 2.0) radii.push_back(r);
    radii.push_back(1.0);
    return radii;
}

struct CellKey {
    std::int64_t x, y;
    bool operator==(const CellKey& o) const { return x == o.x && y == o.y; }
};
struct CellHash {
    std::size_t operator()(const CellKey& k) const {
        return static_cast<std::size_t>(k.x * 0x9e3779b97f4a7c15ULL ^ (k.y + 0x7f4a7c15ULL));
    }
};

// sup over centers in pts and dyadic radii of count(B(x,r)) / (r/delta)^s,
// with open balls (strict inequality): a delta-spaced line then scores in
// [1, 2] as it should. Exact: cheap occupancy upper bounds prune points that
// cannot beat the running max, the survivors get a distance-filtered count.
double sup_count_ratio(std::span<const Vec2> pts, double delta, double s) {
    if (pts.empty()) throw std::invalid_argument("empty point family");
    double best = 1.0;  // r = delta ball always contains its own center
    for (double r : dyadic_radii(delta)) {
        const double denom = std::pow(r / delta, s);
        if (static_cast<double>(pts.size()) / denom <= best) continue;
        std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells;
        cells.reserve(pts.size() * 2);
        auto key_of = [r](const Vec2& p) {
            return CellKey{static_cast<std::int64_t>(std::floor(p.x / r)),
                           static_cast<std::int64_t>(std::floor(p.y / r))};
        };
        for (std::uint32_t i = 0; i < pts.size(); ++i)
            cells[key_of(pts[i])].push_back(i);
        for (std::uint32_t i = 0; i < pts.size(); ++i) {
            const CellKey k = key_of(pts[i]);
            std::size_t occupancy = 0;
            for (std::int64_t dx = -1; dx <= 1; ++dx)
                for (std::int64_t dy = -1; dy <= 1; ++dy) {
                    auto it = cells.find({k.x + dx, k.y + dy});
                    if (it != cells.end()) occupancy += it->second.size();
                }
            if (static_cast<double>(occupancy) / denom <= best) continue;
            std::size_t count = 0;
            for (std::int64_t dx = -1; dx <= 1; ++dx)
                for (std::int64_t dy = -1; dy <= 1; ++dy) {
                    auto it = cells.find({k.x + dx, k.y + dy});
                    if (it == cells.end()) continue;
                    for (std::uint32_t j : it->second)
                        if (dist(pts[i], pts[j]) < r) ++count;
                }
            best = std::max(best, static_cast<double>(count) / denom);
        }
    }
    return best;
}

double mollifier_bump(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

}  // namespace

double katz_tao_constant(std::span<const Vec2> pts, double delta, double s) {
    if (!(s > 0.0) && !(s <= 2.0)) throw std::invalid_argument("s must lie in (0,2]");
    return sup_count_ratio(pts, delta, s);
}

double gamma_constant(std::span<const Vec2> centers, double delta) {
    return kPi * sup_count_ratio(centers, delta, 1.0);
}

RefineResult random_refine(std::span<const Vec2> centers, double delta, std::uint64_t seed) {
    RefineResult res;
    res.gamma = gamma_constant(centers, delta);
    const double keep_p = std::min(1.0, 1.0 / res.gamma);
    const double threshold = 8.0 * std::log(1.0 / delta);
    const double expected = keep_p * static_cast<double>(centers.size());
    for (int attempt = 1; attempt <= 20; ++attempt) {
        Rng rng(seed + 0x51ed2701ULL * static_cast<std::uint64_t>(attempt));
        std::vector<Vec2> kept;
        for (const auto& c : centers)
            if (rng.bernoulli(keep_p)) kept.push_back(c);
        if (kept.empty()) continue;
        const double constant = katz_tao_constant(kept, delta, 1.0);
        const double mass_ratio = static_cast<double>(kept.size()) / expected;
        if (constant <= threshold && mass_ratio >= 0.25 && mass_ratio <= 4.0) {
            res.kept = std::move(kept);
            res.constant = constant;
            res.mass_ratio = mass_ratio;
            res.attempts = attempt;
            return res;
        }
    }
    throw std::runtime_error("random_refine: no admissible refinement in 20 attempts (gamma " +
                             std::to_string(res.gamma) + ", target constant " +
                             std::to_string(threshold) + ")");
}

namespace {

std::vector<Vec2> gauss_rational_centers(int q0, double& ball_radius) {
    const double R = std::pow(static_cast<double>(q0), 6.0);
    const double Rs = std::pow(static_cast<double>(q0), 3.0);
    ball_radius = 4.0 * kPi * R;
    std::vector<Vec2> centers;
    for (int q = q0; q <= 2 * q0; ++q) {
        if (q % 2 == 0) continue;
        std::vector<int> a_residues;
        for (int a = q0; a <= 2 * q0; ++a)
            if (std::gcd(a, q) == 1) a_residues.push_back(((a % q) + q) % q);
        std::sort(a_residues.begin(), a_residues.end());
        a_residues.erase(std::unique(a_residues.begin(), a_residues.end()), a_residues.end());
        for (int b = q0; b <= 2 * q0; ++b) {
            if (std::gcd(b, q) != 1) continue;
            const double x2 = 2.0 * kPi * R * static_cast<double>(b) / q;
            if (x2 >= ball_radius) continue;
            const double x1_max = std::sqrt(ball_radius * ball_radius - x2 * x2);
            const double stride = 2.0 * kPi * Rs;
            for (int r : a_residues) {
                const double base = stride * static_cast<double>(r) / q;
                const auto m_lo = static_cast<std::int64_t>(std::ceil((-x1_max - base) / stride));
                const auto m_hi = static_cast<std::int64_t>(std::floor((x1_max - base) / stride));
                for (std::int64_t m = m_lo; m <= m_hi; ++m)
                    centers.push_back({base + stride * static_cast<double>(m), x2});
            }
        }
    }
    return centers;
}

}  // namespace

GaussExample make_gauss_example(int q0) {
    if (q0 < 3) throw std::invalid_argument("invalid R for gauss_rational: need q0 >= 3");
    const double R = std::pow(static_cast<double>(q0), 6.0);
    const auto Rs = static_cast<std::int64_t>(std::llround(std::pow(double(q0), 3.0)));

    GaussExample ex;
    ex.scale = R;

    // density: 12 grid cells of width 1/(600 R) per lattice interval; the
    // interval edges land exactly on grid-cell boundaries, so
    // ||f||_2^2 = (sqrt(R)+1) / (50 R) holds exactly.
    const double h = 1.0 / (600.0 * R);
    FrequencyGrid grid = FrequencyGrid::uniform(-1.0, 1.0, h);
    std::vector<SampledDensity::Entry> entries;
    const auto nodes_per_interval = 12;
    for (std::int64_t k = 0; k <= Rs; ++k) {
        // interval center k/sqrt(R) - 1/2, width 1/(50 R)
        const std::int64_t start = 600 * k * Rs + 300 * static_cast<std::int64_t>(R) - 6;
        for (int j = 0; j < nodes_per_interval; ++j)
            entries.push_back({start + j, cplx{1.0, 0.0}});
    }
    ex.density = SampledDensity::from_entries(grid, std::move(entries));

    double ball_radius = 0.0;
    auto centers = gauss_rational_centers(q0, ball_radius);
    WeightSet w;
    w.R = ball_radius;
    w.centers = std::move(centers);
    w.kind = "gauss_rational";
    w.validate();
    const double area = w.area();
    if (area < R / 64.0 || area > 64.0 * R)
        throw std::runtime_error("gauss_rational weight area out of range");
    std::vector<Vec2> dilated(w.centers.size());
    for (std::size_t i = 0; i < w.centers.size(); ++i) dilated[i] = w.centers[i] * (1.0 / w.R);
    w.katz_tao_C = katz_tao_constant(dilated, 1.0 / w.R, 1.0);
    w.gamma = gamma_constant(dilated, 1.0 / w.R);
    ex.weight = std::move(w);
    return ex;
}

WeightSet generate_weight(WeightKind kind, double R, std::uint64_t seed, const WeightParams& params) {
    WeightSet w;
    w.R = R;
    w.seed = seed;
    Rng rng(seed);
    switch (kind) {
        case WeightKind::tube: {
            w.kind = "tube";
            const auto n = params.count > 0 ? params.count : static_cast<std::int64_t>(R);
            for (std::int64_t i = 0; i < n; ++i) {
                const double x = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1));
                if (std::abs(x) <= R) w.centers.push_back({x, 0.0});
            }
            break;
        }
        case WeightKind::lattice: {
            w.kind = "lattice";
            const auto n = params.count > 0 ? params.count : static_cast<std::int64_t>(R);
            const auto side = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
            const double spacing = std::max(1.0, 2.0 * R / (std::sqrt(2.0) * static_cast<double>(side)));
            for (std::int64_t i = 0; i < side; ++i)
                for (std::int64_t j = 0; j < side; ++j) {
                    const Vec2 p{(static_cast<double>(i) - 0.5 * static_cast<double>(side - 1)) * spacing,
                                 (static_cast<double>(j) - 0.5 * static_cast<double>(side - 1)) * spacing};
                    if (p.norm() <= R && static_cast<std::int64_t>(w.centers.size()) < n)
                        w.centers.push_back(p);
                }
            break;
        }
        case WeightKind::random_katz_tao: {
            w.kind = "random_katz_tao";
            const auto n = params.count > 0 ? params.count : std::min<std::int64_t>(1024, static_cast<std::int64_t>(R));
            // sequential rejection: a candidate is kept only while every
            // dyadic ball around it stays 1-dimensional (count <= 2r)
            std::vector<double> radii;
            for (double r = 1.0; r < 2.0 * R; r *= 2.0) radii.push_back(r);
            std::int64_t attempts_left = 400 * n;
            while (static_cast<std::int64_t>(w.centers.size()) < n && attempts_left-- > 0) {
                Vec2 cand{rng.uniform(-R, R), rng.uniform(-R, R)};
                if (cand.norm() > R) continue;
                bool ok = true;
                for (const auto& c : w.centers)
                    if (dist(cand, c) < 1.0) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                for (double r : radii) {
                    std::size_t count = 1;
                    for (const auto& c : w.centers)
                        if (dist(cand, c) <= r) ++count;
                    if (static_cast<double>(count) > std::max(2.0, 2.0 * r)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) w.centers.push_back(cand);
            }
            break;
        }
        case WeightKind::gauss_rational: {
            const auto q0 = params.q0 > 0
                                ? params.q0
                                : static_cast<int>(std::llround(std::pow(R, 1.0 / 6.0)));
            if (q0 < 3 || std::abs(std::pow(static_cast<double>(q0), 6.0) - R) > 1e-6)
                throw std::invalid_argument("invalid R for gauss_rational: R must be q0^6, q0 >= 3");
            GaussExample ex = make_gauss_example(q0);
            ex.weight.seed = seed;
            return ex.weight;
        }
        case WeightKind::bush: {
            w.kind = "bush";
            const auto n_lines = params.count > 0 ? params.count : 32;
            const double dang = kPi / static_cast<double>(n_lines);
            const double t0 = std::max(1.0, 0.8 / dang);  // keeps unit balls separated near the root
            for (std::int64_t l = 0; l < n_lines; ++l) {
                const double ang = dang * static_cast<double>(l);
                const Vec2 dir{std::cos(ang), std::sin(ang)};
                for (double t = t0; t <= R; t += 1.5)
                    w.centers.push_back(dir * t);
            }
            break;
        }
    }
    w.validate();
    if (!w.centers.empty()) {
        std::vector<Vec2> dilated(w.centers.size());
        for (std::size_t i = 0; i < w.centers.size(); ++i) dilated[i] = w.centers[i] * (1.0 / w.R);
        w.katz_tao_C = katz_tao_constant(dilated, 1.0 / w.R, 1.0);
        w.gamma = gamma_constant(dilated, 1.0 / w.R);
    }
    return w;
}

// ---- Frostman measures ------------------------------------------------------

FrostmanMeasure FrostmanMeasure::from_atoms(std::vector<Atom> atoms) {
    FrostmanMeasure mu;
    mu.separable_ = false;
    mu.atoms_ = std::move(atoms);
    return mu;
}

FrostmanMeasure FrostmanMeasure::separable(std::vector<double> x1, std::vector<cplx> w1, double d1,
                                           std::vector<double> x2, std::vector<cplx> w2, double d2) {
    FrostmanMeasure mu;
    mu.separable_ = true;
    mu.x1_ = std::move(x1);
    mu.w1_ = std::move(w1);
    mu.x2_ = std::move(x2);
    mu.w2_ = std::move(w2);
    mu.d1_ = d1;
    mu.d2_ = d2;
    return mu;
}

double FrostmanMeasure::total_mass() const {
    if (separable_) {
        double m1 = 0.0, m2 = 0.0;
        for (const auto& v : w1_) m1 += std::abs(v);
        for (const auto& v : w2_) m2 += std::abs(v);
        return m1 * d1_ * m2 * d2_;
    }
    double m = 0.0;
    for (const auto& a : atoms_) m += a.mass;
    return m;
}

void FrostmanMeasure::normalize() {
    const double m = total_mass();
    if (!(m > 0.0)) throw std::invalid_argument("measure has zero mass");
    if (separable_) {
        for (auto& v : w1_) v /= m;  // fold the whole constant into factor 1
    } else {
        for (auto& a : atoms_) {
            a.density /= m;
            a.mass /= m;
        }
    }
}

cplx FrostmanMeasure::fourier(const Vec2& omega) const {
    if (separable_) {
        cplx s1{0.0, 0.0}, s2{0.0, 0.0};
        for (std::size_t i = 0; i < x1_.size(); ++i) {
            const double ph = -omega.x * x1_[i];
            s1 += w1_[i] * cplx{std::cos(ph), std::sin(ph)};
        }
        for (std::size_t j = 0; j < x2_.size(); ++j) {
            const double ph = -omega.y * x2_[j];
            s2 += w2_[j] * cplx{std::cos(ph), std::sin(ph)};
        }
        return s1 * s2 * (d1_ * d2_);
    }
    cplx acc{0.0, 0.0};
    for (const auto& a : atoms_) {
        const double ph = -(omega.x * a.x.x + omega.y * a.x.y);
        acc += a.density * cplx{std::cos(ph), std::sin(ph)};
    }
    return acc;
}

const std::vector<FrostmanMeasure::Atom>& FrostmanMeasure::atoms() const {
    if (separable_ && atoms_.empty()) {
        atoms_.reserve(x1_.size() * x2_.size());
        for (std::size_t i = 0; i < x1_.size(); ++i)
            for (std::size_t j = 0; j < x2_.size(); ++j) {
                const cplx dens = w1_[i] * w2_[j] * d1_ * d2_;
                if (dens != cplx{0.0, 0.0})
                    atoms_.push_back({{x1_[i], x2_[j]}, dens, std::abs(dens)});
            }
    }
    return atoms_;
}

FrostmanMeasure frostman_knapp(double R) {
    if (!(R >= 4.0)) throw std::invalid_argument("frostman_knapp needs R >= 4");
    const double rs = std::sqrt(R);
    // thin direction x1 (width 2/sqrt(R)), long modulated direction x2
    const double d1 = std::min(1.0 / (10.0 * R), 2.0 / (rs * 64.0));
    const auto n1 = static_cast<std::size_t>(std::ceil(2.0 / (rs * d1)));
    std::vector<double> x1(n1);
    std::vector<cplx> w1(n1);
    for (std::size_t i = 0; i < n1; ++i) {
        x1[i] = 0.5 - 1.0 / rs + (static_cast<double>(i) + 0.5) * d1;
        w1[i] = cplx{mollifier_bump((x1[i] - 0.5) * rs), 0.0};
    }
    const double d2 = 1.0 / (20.0 * R);
    const auto n2 = static_cast<std::size_t>(std::llround(20.0 * R));
    std::vector<double> x2(n2);
    std::vector<cplx> w2(n2);
    for (std::size_t j = 0; j < n2; ++j) {
        x2[j] = (static_cast<double>(j) + 0.5) * d2;
        const double ph = R * x2[j];
        w2[j] = mollifier_bump(2.0 * x2[j] - 1.0) * cplx{std::cos(ph), std::sin(ph)};
    }
    FrostmanMeasure mu = FrostmanMeasure::separable(std::move(x1), std::move(w1), d1,
                                                    std::move(x2), std::move(w2), d2);
    mu.normalize();
    return mu;
}

double check_frostman(const FrostmanMeasure& mu, double s) {
    // bin |mu| onto a 1/128 grid over [0,1]^2, then scan grid-ball centers
    // against dyadic radii
    constexpr int kBins = 128;
    const double bin = 1.0 / kBins;
    std::vector<double> mass(static_cast<std::size_t>(kBins) * kBins, 0.0);
    auto bin_of = [&](double t) { return std::clamp(static_cast<int>(t * kBins), 0, kBins - 1); };
    if (mu.is_separable()) {
        std::vector<double> m1(kBins, 0.0), m2(kBins, 0.0);
        for (std::size_t i = 0; i < mu.x1().size(); ++i)
            m1[static_cast<std::size_t>(bin_of(mu.x1()[i]))] += std::abs(mu.w1()[i]) * mu.d1();
        for (std::size_t j = 0; j < mu.x2().size(); ++j)
            m2[static_cast<std::size_t>(bin_of(mu.x2()[j]))] += std::abs(mu.w2()[j]) * mu.d2();
        for (int i = 0; i < kBins; ++i)
            for (int j = 0; j < kBins; ++j)
                mass[static_cast<std::size_t>(i) * kBins + j] = m1[static_cast<std::size_t>(i)] *
                                                                m2[static_cast<std::size_t>(j)];
    } else {
        for (const auto& a : mu.atoms())
            mass[static_cast<std::size_t>(bin_of(a.x.x)) * kBins + bin_of(a.x.y)] += a.mass;
    }
    // prefix sums along each column for O(reach) disc sums
    std::vector<double> pre(static_cast<std::size_t>(kBins) * (kBins + 1), 0.0);
    for (int i = 0; i < kBins; ++i)
        for (int j = 0; j < kBins; ++j)
            pre[static_cast<std::size_t>(i) * (kBins + 1) + j + 1] =
                pre[static_cast<std::size_t>(i) * (kBins + 1) + j] +
                mass[static_cast<std::size_t>(i) * kBins + j];
    auto col_range = [&](int i, int jlo, int jhi) {
        jlo = std::max(jlo, 0);
        jhi = std::min(jhi, kBins - 1);
        if (jlo > jhi) return 0.0;
        return pre[static_cast<std::size_t>(i) * (kBins + 1) + jhi + 1] -
               pre[static_cast<std::size_t>(i) * (kBins + 1) + jlo];
    };
    // a ball of radius r around a bin center covers bins out to r + bin/2,
    // so the covered radius is what the ratio divides by
    double worst = 0.0;
    for (double r = 2.0 * bin; r <= 1.0; r *= 2.0) {
        const auto reach = static_cast<int>(std::floor(r / bin));
        for (int i = 0; i < kBins; ++i) {
            for (int j = 0; j < kBins; ++j) {
                if (mass[static_cast<std::size_t>(i) * kBins + j] == 0.0) continue;
                double ball = 0.0;
                for (int di = -reach; di <= reach; ++di) {
                    if (i + di < 0 || i + di >= kBins) continue;
                    const double rem = (r / bin) * (r / bin) - double(di) * double(di);
                    const auto wj = static_cast<int>(std::floor(std::sqrt(std::max(0.0, rem))));
                    ball += col_range(i + di, j - wj, j + wj);
                }
                worst = std::max(worst, ball / std::pow(r + 0.5 * bin, s));
            }
        }
    }
    return worst;
}

}  // namespace extlab
