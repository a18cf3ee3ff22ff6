#include "extlab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "extlab/rng.hpp"

namespace extlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double Line::chord_half() const {
    const double d = std::abs(point.dot(normal()));
    if (d >= 1.0) return 0.0;
    return std::sqrt(1.0 - d * d);
}

void LineShading::validate() const {
    if (lines.size() != shading.size())
        throw std::invalid_argument("one shading per line required");
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (std::abs(lines[i].angle - lines[j].angle) < delta - 1e-12)
                throw std::invalid_argument("line directions closer than delta");
        }
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Vec2 n = lines[i].normal();
        const double off = lines[i].point.dot(n);
        for (const auto& c : shading[i]) {
            if (std::abs(c.dot(n) - off) > delta + 1e-12)
                throw std::invalid_argument("shading ball further than delta from its line");
            if (c.norm() > 1.0 + 1e-12)
                throw std::invalid_argument("shading ball outside B(0,1)");
        }
    }
}

double shading_density(const LineShading& ls) {
    if (ls.lines.empty()) throw std::invalid_argument("empty line family");
    double lambda = 1.0 / 0.0;
    for (std::size_t i = 0; i < ls.lines.size(); ++i) {
        const double chord = 2.0 * ls.lines[i].chord_half();
        if (chord <= 0.0) {
            lambda = 0.0;
            continue;
        }
        const double y_area = static_cast<double>(ls.shading[i].size()) * kPi * ls.delta * ls.delta;
        const double n_area = 2.0 * ls.delta * chord;
        lambda = std::min(lambda, y_area / n_area);
    }
    return lambda;
}

double two_ends_statistic(const LineShading& ls, double eps1) {
    if (!(eps1 > 0.0 && eps1 < 1.0)) throw std::invalid_argument("eps1 must lie in (0,1)");
    const double jlen = std::pow(ls.delta, eps1);
    double worst = 0.0;
    for (std::size_t i = 0; i < ls.lines.size(); ++i) {
        if (ls.shading[i].empty()) continue;
        const Vec2 d = ls.lines[i].dir();
        std::vector<double> s(ls.shading[i].size());
        for (std::size_t k = 0; k < s.size(); ++k) s[k] = ls.shading[i][k].dot(d);
        std::sort(s.begin(), s.end());
        // slide J in delta/2 steps; a two-pointer pass per start grid
        const double lo = s.front(), hi = s.back();
        std::size_t a = 0, b = 0;
        for (double start = lo - jlen; start <= hi + ls.delta; start += 0.5 * ls.delta) {
            while (a < s.size() && s[a] < start) ++a;
            if (b < a) b = a;
            while (b < s.size() && s[b] <= start + jlen) ++b;
            worst = std::max(worst,
                             static_cast<double>(b - a) / static_cast<double>(s.size()));
        }
    }
    return worst;
}

namespace {

// rasterization at delta/2 over [-1,1]^2: pixel center inside some shading
// ball (closed, radius delta)
struct Raster {
    int n = 0;
    double px = 0.0;
    std::vector<std::uint8_t> hit;

    explicit Raster(double delta) {
        px = 0.5 * delta;
        n = static_cast<int>(std::ceil(2.0 / px));
        hit.assign(static_cast<std::size_t>(n) * n, 0);
    }
    void mark(const Vec2& c, double radius) {
        const int i0 = std::max(0, static_cast<int>(std::floor((c.x - radius + 1.0) / px)));
        const int i1 = std::min(n - 1, static_cast<int>(std::ceil((c.x + radius + 1.0) / px)));
        const int j0 = std::max(0, static_cast<int>(std::floor((c.y - radius + 1.0) / px)));
        const int j1 = std::min(n - 1, static_cast<int>(std::ceil((c.y + radius + 1.0) / px)));
        for (int i = i0; i <= i1; ++i) {
            for (int j = j0; j <= j1; ++j) {
                const Vec2 p{-1.0 + (i + 0.5) * px, -1.0 + (j + 0.5) * px};
                if (dist(p, c) <= radius) hit[static_cast<std::size_t>(i) * n + j] = 1;
            }
        }
    }
    double area() const {
        std::size_t cnt = 0;
        for (auto h : hit) cnt += h;
        return static_cast<double>(cnt) * px * px;
    }
};

}  // namespace

FurstenbergRecord furstenberg_ratio(const LineShading& ls, double eps1) {
    FurstenbergRecord rec;
    rec.lambda = shading_density(ls);
    Raster uni(ls.delta);
    double sum_area = 0.0;
    for (std::size_t i = 0; i < ls.lines.size(); ++i) {
        Raster one(ls.delta);
        for (const auto& c : ls.shading[i]) {
            uni.mark(c, ls.delta);
            one.mark(c, ls.delta);
        }
        sum_area += one.area();
    }
    rec.union_area = uni.area();
    rec.sum_area = sum_area;
    rec.lower = std::pow(ls.delta, 0.5 * eps1) * std::sqrt(std::max(rec.lambda, 0.0)) * sum_area;
    rec.ratio = rec.lower > 0.0 ? rec.union_area / rec.lower : 0.0;
    return rec;
}

DualTubeRecord dual_tube_count(const std::vector<Vec2>& balls, double delta,
                               const std::vector<std::vector<DualTube>>& tubes_per_ball,
                               double eps1, double eps2, std::int64_t M,
                               double concentration_constant) {
    if (balls.size() != tubes_per_ball.size())
        throw std::invalid_argument("one tube family per ball required");
    DualTubeRecord rec;
    const double arc = std::pow(delta, eps1);
    const double conc_cap = concentration_constant * std::pow(delta, eps2);
    for (const auto& tq : tubes_per_ball) {
        if (static_cast<std::int64_t>(tq.size()) < M)
            throw std::invalid_argument("a ball has fewer than M tubes");
        // concentration over sliding delta^{eps1}-arcs of directions
        std::vector<double> angles;
        angles.reserve(tq.size());
        for (const auto& t : tq) angles.push_back(t.angle);
        std::sort(angles.begin(), angles.end());
        std::size_t a = 0, b = 0;
        double worst = 0.0;
        for (double start = angles.front() - arc; start <= angles.back(); start += 0.5 * delta) {
            while (a < angles.size() && angles[a] < start) ++a;
            if (b < a) b = a;
            while (b < angles.size() && angles[b] <= start + arc) ++b;
            worst = std::max(worst, static_cast<double>(b - a) / static_cast<double>(angles.size()));
        }
        rec.worst_arc_concentration = std::max(rec.worst_arc_concentration, worst);
        if (worst > conc_cap + 1e-12)
            throw std::invalid_argument("per-arc tube concentration exceeds delta^{eps2} bound");
    }
    std::map<std::pair<std::int64_t, std::int64_t>, int> dedup;
    for (const auto& tq : tubes_per_ball)
        for (const auto& t : tq)
            dedup[{static_cast<std::int64_t>(std::floor(t.angle / delta)),
                   static_cast<std::int64_t>(std::floor(t.offset / delta))}] = 1;
    rec.distinct = static_cast<std::int64_t>(dedup.size());
    rec.lower = std::pow(delta, 0.5 * eps1) * std::pow(static_cast<double>(M), 1.5) *
                std::sqrt(delta) * static_cast<double>(balls.size());
    rec.ratio = static_cast<double>(rec.distinct) / rec.lower;
    return rec;
}

// ---- generators --------------------------------------------------------------

LineShading make_random_two_ends(double delta, double lambda, std::uint64_t seed) {
    Rng rng(seed);
    LineShading ls;
    ls.delta = delta;
    const auto n_lines = static_cast<std::size_t>(std::floor(1.0 / delta));
    for (std::size_t i = 0; i < n_lines; ++i) {
        Line l;
        l.angle = -0.5 + (static_cast<double>(i) + 0.5) * delta;
        l.point = {rng.uniform(-0.6, 0.6), 0.0};
        ls.lines.push_back(l);
        std::vector<Vec2> y;
        const double ch = l.chord_half();
        if (ch > 0.0) {
            const Vec2 d = l.dir();
            const Vec2 base = l.point - l.point.dot(d) * d;  // foot of perpendicular
            const auto slots = static_cast<std::int64_t>(std::floor(2.0 * ch / delta));
            for (std::int64_t k = 0; k < slots; ++k) {
                if (!rng.bernoulli(lambda)) continue;
                const double s = -ch + (static_cast<double>(k) + 0.5) * delta;
                const Vec2 c = base + s * d;
                if (c.norm() <= 1.0) y.push_back(c);
            }
        }
        ls.shading.push_back(std::move(y));
    }
    return ls;
}

LineShading make_bush_shading(double delta, const Vec2& root) {
    LineShading ls;
    ls.delta = delta;
    const auto n_lines = static_cast<std::size_t>(std::floor(1.0 / delta));
    for (std::size_t i = 0; i < n_lines; ++i) {
        Line l;
        l.angle = -0.5 + (static_cast<double>(i) + 0.5) * delta;
        const Vec2 d = l.dir();
        // shift so the line passes through the root
        l.point = root - root.dot(d) * d;
        ls.lines.push_back(l);
        std::vector<Vec2> y;
        const double ch = l.chord_half();
        const Vec2 base = l.point;
        const auto slots = static_cast<std::int64_t>(std::floor(2.0 * ch / delta));
        for (std::int64_t k = 0; k < slots; ++k) {
            const double s = -ch + (static_cast<double>(k) + 0.5) * delta;
            const Vec2 c = base + s * d;
            if (c.norm() <= 1.0) y.push_back(c);
        }
        ls.shading.push_back(std::move(y));
    }
    return ls;
}

void write_union_pgm(const LineShading& ls, const std::string& path) {
    Raster uni(ls.delta);
    for (std::size_t i = 0; i < ls.lines.size(); ++i)
        for (const auto& c : ls.shading[i]) uni.mark(c, ls.delta);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "P5\n" << uni.n << ' ' << uni.n << "\n255\n";
    // rows top to bottom: j decreasing
    for (int j = uni.n - 1; j >= 0; --j)
        for (int i = 0; i < uni.n; ++i)
            out.put(uni.hit[static_cast<std::size_t>(i) * uni.n + j] ? '\xff' : '\0');
}

LineShading make_train_tracks(double delta, std::uint64_t seed) {
    // near-parallel bundle shaded on evenly spread short blocks; the classic
    // near-extremal configuration for the two-ends bound
    Rng rng(seed);
    LineShading ls;
    ls.delta = delta;
    const auto n_lines = static_cast<std::size_t>(std::floor(0.5 / delta));
    const int n_blocks = 8;
    for (std::size_t i = 0; i < n_lines; ++i) {
        Line l;
        l.angle = -0.25 + (static_cast<double>(i) + 0.5) * delta;
        l.point = {rng.uniform(-0.3, 0.3), 0.0};
        ls.lines.push_back(l);
        std::vector<Vec2> y;
        const double ch = l.chord_half();
        const Vec2 d = l.dir();
        const Vec2 base = l.point - l.point.dot(d) * d;
        const double block_len = 2.0 * ch / (3.0 * n_blocks);
        for (int bl = 0; bl < n_blocks; ++bl) {
            const double s0 = -ch + (3.0 * bl + 1.0) * block_len;
            for (double s = s0; s < s0 + block_len; s += delta) {
                const Vec2 c = base + s * d;
                if (c.norm() <= 1.0) y.push_back(c);
            }
        }
        ls.shading.push_back(std::move(y));
    }
    return ls;
}

}  // namespace extlab
