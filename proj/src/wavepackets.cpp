#include "extlab/wavepackets.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "extlab/fft.hpp"
#include "extlab/parallel.hpp"

namespace extlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

// Gevrey unit step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double theta_edge(const PacketSet::Spec& spec, int j) {
    if (j <= 0) return -1.0 - spec.dc;
    if (j >= spec.n_theta) return 1.0 + spec.dc;
    return -1.0 + static_cast<double>(j) * spec.dc;
}

std::vector<cplx> ifft_scaled(std::vector<cplx> a) {
    fft_pow2(a, +1);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v *= inv;
    return a;
}

}  // namespace

PacketSet::Spec packet_lattice(double R, double eps0) {
    if (!(R >= 16.0)) throw std::invalid_argument("wave packets need R >= 16");
    PacketSet::Spec spec;
    spec.R = R;
    spec.eps0 = eps0;
    spec.n_theta = static_cast<int>(std::ceil(2.0 * std::sqrt(R) - 1e-12));
    spec.dc = 2.0 / static_cast<double>(spec.n_theta);
    spec.W = 2.5 / spec.dc;
    // evaluation points range over B_R, so resolve |x1| + |x2| sup|Phi'|
    const double h_pre = 1.0 / (40.0 * R);
    spec.N_v = static_cast<std::int64_t>(next_pow2(
        static_cast<std::size_t>(std::ceil(kTwoPi / (h_pre * spec.W)))));
    spec.h = kTwoPi / (static_cast<double>(spec.N_v) * spec.W);
    const auto half_count =
        static_cast<std::int64_t>(std::ceil((1.0 + 3.0 * spec.dc) / spec.h)) + 2;
    spec.grid = FrequencyGrid::centered(2 * half_count, spec.h);
    spec.halfwidth = std::pow(R, 0.5 + eps0);
    return spec;
}

double packet_phi(const PacketSet::Spec& spec, int j, double xi) {
    const double wt = 0.15 * spec.dc;
    const double e0 = theta_edge(spec, j);
    const double e1 = theta_edge(spec, j + 1);
    return smooth_step((xi - e0 + wt) / (2.0 * wt)) - smooth_step((xi - e1 + wt) / (2.0 * wt));
}

double packet_chi(const PacketSet::Spec& spec, double eta) {
    const double a = std::abs(eta);
    if (a <= 1.2 * spec.dc) return 1.0;
    if (a >= 2.0 * spec.dc) return 0.0;
    return 1.0 - smooth_step((a - 1.2 * spec.dc) / (0.8 * spec.dc));
}

PacketSet PacketSet::factored(Spec spec, Curve curve, std::vector<PacketInfo> packets,
                              std::vector<std::int64_t> block_start,
                              std::vector<std::vector<cplx>> block_g, std::vector<cplx> kernel,
                              std::int64_t L2, DiscardLedger ledger) {
    PacketSet ps;
    ps.spec_ = std::move(spec);
    ps.curve_ = curve;
    ps.packets_ = std::move(packets);
    ps.block_start_ = std::move(block_start);
    ps.block_g_ = std::move(block_g);
    ps.kernel_ = std::move(kernel);
    ps.L2_ = L2;
    ps.factored_ = true;
    ps.ledger_ = ledger;
    return ps;
}

PacketSet PacketSet::explicit_atoms(Spec spec, Curve curve, std::vector<PacketInfo> packets,
                                    std::vector<SampledDensity> atoms) {
    PacketSet ps;
    ps.spec_ = std::move(spec);
    ps.curve_ = curve;
    ps.packets_ = std::move(packets);
    ps.atoms_ = std::move(atoms);
    ps.factored_ = false;
    return ps;
}

Tube PacketSet::tube(std::size_t k) const {
    const PacketInfo& p = packets_[k];
    Tube t;
    t.R = spec_.R;
    t.c_v = p.c_v;
    t.slope = curve_.dphi(p.c_theta);
    t.halfwidth = spec_.halfwidth;
    return t;
}

const std::vector<double>& PacketSet::norms2() const {
    if (norms_ready_) return norms2_;
    norms2_.assign(packets_.size(), 0.0);
    if (!factored_) {
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            const double n = density_lp_norm(atoms_[k], 2.0);
            norms2_[k] = n * n;
        }
        norms_ready_ = true;
        return norms2_;
    }
    // per theta: ||f_{theta,v}||^2 for all v at once. With hat(f_v) =
    // h hat(g) hat(K)(. + m N_G/N_v), Plancherel turns the norms into a
    // cross-correlation of the two power spectra, one FFT family per theta.
    const auto n_blocks = static_cast<std::int64_t>(block_g_.size());
    parallel_for(n_blocks, [&](std::int64_t bi) {
        const auto& g = block_g_[static_cast<std::size_t>(bi)];
        const auto len = static_cast<std::int64_t>(g.size());
        const std::size_t N_G = next_pow2(static_cast<std::size_t>(
            std::max<std::int64_t>(len + 4 * L2_ + 2, spec_.N_v)));
        std::vector<cplx> A(N_G, cplx{0.0, 0.0});
        for (std::int64_t i = 0; i < len; ++i) A[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)];
        fft_pow2(A, -1);
        std::vector<cplx> P(N_G), B(N_G, cplx{0.0, 0.0});
        for (std::size_t k = 0; k < N_G; ++k) P[k] = cplx{std::norm(A[k]), 0.0};
        std::vector<cplx> Kpad(N_G, cplx{0.0, 0.0});
        for (std::int64_t l = -L2_; l <= L2_; ++l) {
            const auto idx = static_cast<std::size_t>((l % static_cast<std::int64_t>(N_G) +
                                                       static_cast<std::int64_t>(N_G)) %
                                                      static_cast<std::int64_t>(N_G));
            Kpad[idx] = kernel_[static_cast<std::size_t>(L2_ + l)];
        }
        fft_pow2(Kpad, -1);
        for (std::size_t k = 0; k < N_G; ++k) B[k] = cplx{std::norm(Kpad[k]), 0.0};
        // C(j) = sum_k P(k) B(k + j) = IFFT( FFT(B) . conj(FFT(P)) )
        fft_pow2(P, -1);
        fft_pow2(B, -1);
        for (std::size_t k = 0; k < N_G; ++k) B[k] *= std::conj(P[k]);
        const std::vector<cplx> C = ifft_scaled(std::move(B));
        const std::int64_t stride = static_cast<std::int64_t>(N_G) / spec_.N_v;
        const double scale = spec_.h * spec_.h * spec_.h / static_cast<double>(N_G);
        for (std::int64_t mi = 0; mi < spec_.N_v; ++mi) {
            const std::int64_t m = mi - spec_.N_v / 2;
            const auto shift = static_cast<std::size_t>(
                ((m * stride) % static_cast<std::int64_t>(N_G) + static_cast<std::int64_t>(N_G)) %
                static_cast<std::int64_t>(N_G));
            norms2_[static_cast<std::size_t>(bi * spec_.N_v + mi)] =
                std::max(0.0, scale * C[shift].real());
        }
    });
    norms_ready_ = true;
    return norms2_;
}

SampledDensity PacketSet::packet_density(std::size_t k) const {
    if (!factored_) return atoms_[k];
    const PacketInfo& p = packets_[k];
    const auto& g = block_g_[static_cast<std::size_t>(p.theta)];
    const std::int64_t start = block_start_[static_cast<std::size_t>(p.theta)];
    const auto len = static_cast<std::int64_t>(g.size());
    // twiddle table e^{-2 pi i r / N_v}
    std::vector<cplx> tw(static_cast<std::size_t>(spec_.N_v));
    for (std::int64_t r = 0; r < spec_.N_v; ++r) {
        const double a = -kTwoPi * static_cast<double>(r) / static_cast<double>(spec_.N_v);
        tw[static_cast<std::size_t>(r)] = cplx{std::cos(a), std::sin(a)};
    }
    std::vector<SampledDensity::Entry> entries;
    for (std::int64_t i = start - L2_; i <= start + len - 1 + L2_; ++i) {
        cplx acc{0.0, 0.0};
        const std::int64_t l_lo = std::max(-L2_, i - (start + len - 1));
        const std::int64_t l_hi = std::min(L2_, i - start);
        for (std::int64_t l = l_lo; l <= l_hi; ++l) {
            const std::int64_t r = ((p.m * l) % spec_.N_v + spec_.N_v) % spec_.N_v;
            acc += g[static_cast<std::size_t>(i - l - start)] *
                   kernel_[static_cast<std::size_t>(L2_ + l)] * tw[static_cast<std::size_t>(r)];
        }
        acc *= spec_.h;
        if (acc != cplx{0.0, 0.0}) entries.push_back({i, acc});
    }
    return SampledDensity::from_entries(spec_.grid, std::move(entries));
}

std::vector<cplx> PacketSet::packet_fields_at(const Vec2& x) const {
    std::vector<cplx> out(packets_.size(), cplx{0.0, 0.0});
    if (!factored_) {
        for (std::size_t k = 0; k < atoms_.size(); ++k)
            out[k] = extension_point(atoms_[k], curve_, x.x, x.y);
        return out;
    }
    for (std::size_t bi = 0; bi < block_g_.size(); ++bi) {
        const auto& g = block_g_[bi];
        const auto len = static_cast<std::int64_t>(g.size());
        const std::int64_t start = block_start_[bi];
        const std::int64_t out0 = start - L2_;
        const std::int64_t No = len + 2 * L2_;
        const std::size_t P2 = next_pow2(static_cast<std::size_t>(No + len));
        std::vector<cplx> A(P2, cplx{0.0, 0.0}), B(P2, cplx{0.0, 0.0});
        for (std::int64_t kk = 0; kk < No; ++kk) {
            const double xi = spec_.grid.node(out0 + kk);
            const double phase = x.x * xi + x.y * curve_.phi(xi);
            A[static_cast<std::size_t>(kk)] = cplx{std::cos(phase), std::sin(phase)};
        }
        for (std::int64_t kk = 0; kk < len; ++kk)
            B[static_cast<std::size_t>(kk)] = g[static_cast<std::size_t>(len - 1 - kk)];
        fft_pow2(A, -1);
        fft_pow2(B, -1);
        for (std::size_t k = 0; k < P2; ++k) A[k] *= B[k];
        const std::vector<cplx> C = ifft_scaled(std::move(A));
        // c(l) = C[l + L2 + len - 1]
        std::vector<cplx> folded(static_cast<std::size_t>(spec_.N_v), cplx{0.0, 0.0});
        const double h2 = spec_.h * spec_.h;
        for (std::int64_t l = -L2_; l <= L2_; ++l) {
            const auto r = static_cast<std::size_t>((l % spec_.N_v + spec_.N_v) % spec_.N_v);
            folded[r] += kernel_[static_cast<std::size_t>(L2_ + l)] *
                         C[static_cast<std::size_t>(l + L2_ + len - 1)] * h2;
        }
        fft_pow2(folded, -1);
        for (std::int64_t mi = 0; mi < spec_.N_v; ++mi) {
            const auto r = static_cast<std::size_t>((mi + spec_.N_v / 2) % spec_.N_v);
            out[bi * static_cast<std::size_t>(spec_.N_v) + static_cast<std::size_t>(mi)] =
                folded[r];
        }
    }
    return out;
}

SampledDensity PacketSet::total_density() const {
    if (!factored_) {
        SampledDensity total;
        total.grid = spec_.grid;
        bool first = true;
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            if (!packets_[k].kept) continue;
            total = first ? atoms_[k] : total.plus(atoms_[k]);
            first = false;
        }
        return total;
    }
    // sum_m f_{theta,m} = g_theta exactly; subtract the dropped few
    std::vector<cplx> dense(static_cast<std::size_t>(spec_.grid.count), cplx{0.0, 0.0});
    for (std::size_t bi = 0; bi < block_g_.size(); ++bi) {
        for (std::size_t i = 0; i < block_g_[bi].size(); ++i)
            dense[static_cast<std::size_t>(block_start_[bi]) + i] += block_g_[bi][i];
    }
    for (std::size_t k = 0; k < packets_.size(); ++k) {
        if (packets_[k].kept) continue;
        const SampledDensity d = packet_density(k);
        for (const auto& e : d.entries) dense[static_cast<std::size_t>(e.node)] -= e.value;
    }
    return SampledDensity::from_dense(spec_.grid, dense);
}

PacketSet build_wave_packets(const SampledDensity& f, double R, double eps0, double tail_cut,
                             const Curve& curve) {
    PacketSet::Spec spec = packet_lattice(R, eps0);
    if (f.grid.step > 1.0 / (10.0 * R) + 1e-15)
        throw std::invalid_argument("grid too coarse: need h_xi <= 1/(10 R)");
    if (std::abs(f.grid.step - spec.h) > 1e-12 * spec.h || f.grid.count != spec.grid.count ||
        std::abs(f.grid.lo - spec.grid.lo) > 1e-12)
        throw std::invalid_argument("grid incompatible with packet lattice; build f on packet_grid(R)");
    if (!f.supported_in(-1.0, 1.0))
        throw std::invalid_argument("f must be supported in [-1, 1]");

    const auto L2 = static_cast<std::int64_t>(std::floor(2.0 * spec.dc / spec.h));
    std::vector<cplx> kernel(static_cast<std::size_t>(2 * L2 + 1));
    const double knorm = 1.0 / (static_cast<double>(spec.N_v) * spec.h);
    for (std::int64_t l = -L2; l <= L2; ++l)
        kernel[static_cast<std::size_t>(L2 + l)] =
            cplx{packet_chi(spec, static_cast<double>(l) * spec.h) * knorm, 0.0};

    std::vector<std::int64_t> block_start(static_cast<std::size_t>(spec.n_theta));
    std::vector<std::vector<cplx>> block_g(static_cast<std::size_t>(spec.n_theta));
    const double wt = 0.15 * spec.dc;
    for (int j = 0; j < spec.n_theta; ++j) {
        const double lo = theta_edge(spec, j) - wt;
        const double hi = theta_edge(spec, j + 1) + wt;
        const std::int64_t i0 = std::max<std::int64_t>(0, spec.grid.cell_of(lo) - 1);
        const std::int64_t i1 = std::min<std::int64_t>(spec.grid.count - 1, spec.grid.cell_of(hi) + 1);
        block_start[static_cast<std::size_t>(j)] = i0;
        auto& g = block_g[static_cast<std::size_t>(j)];
        g.assign(static_cast<std::size_t>(i1 - i0 + 1), cplx{0.0, 0.0});
        auto it = std::lower_bound(f.entries.begin(), f.entries.end(), i0,
                                   [](const SampledDensity::Entry& e, std::int64_t v) {
                                       return e.node < v;
                                   });
        for (; it != f.entries.end() && it->node <= i1; ++it) {
            const double xi = f.grid.node(it->node);
            const double w = packet_phi(spec, j, xi);
            if (w != 0.0) g[static_cast<std::size_t>(it->node - i0)] = it->value * w;
        }
    }

    std::vector<PacketInfo> packets;
    packets.reserve(static_cast<std::size_t>(spec.n_theta) * static_cast<std::size_t>(spec.N_v));
    for (int j = 0; j < spec.n_theta; ++j) {
        const double c_theta = -1.0 + (static_cast<double>(j) + 0.5) * spec.dc;
        for (std::int64_t mi = 0; mi < spec.N_v; ++mi) {
            PacketInfo p;
            p.theta = j;
            p.m = mi - spec.N_v / 2;
            p.c_theta = c_theta;
            p.c_v = static_cast<double>(p.m) * spec.W;
            packets.push_back(p);
        }
    }

    PacketSet ps = PacketSet::factored(spec, curve, std::move(packets), std::move(block_start),
                                       std::move(block_g), std::move(kernel), L2, DiscardLedger{});
    if (tail_cut > 0.0) {
        const double fnorm = density_lp_norm(f, 2.0);
        const double threshold =
            tail_cut * fnorm / static_cast<double>(ps.packet_count());
        const auto& n2 = ps.norms2();
        DiscardLedger ledger;
        const double supp_measure = (2.0 * 0.15 + 1.0 + 4.0) * spec.dc;  // |supp f_T| bound
        std::vector<PacketInfo> marked = ps.packets();
        for (std::size_t k = 0; k < marked.size(); ++k) {
            const double nk = std::sqrt(n2[k]);
            if (nk < threshold) {
                marked[k].kept = false;
                ledger.dropped += 1;
                ledger.norm2_sum += n2[k];
                ledger.field_bound += nk * std::sqrt(supp_measure);
            }
        }
        ps.set_kept_flags(marked, ledger);
    }
    return ps;
}

void PacketSet::set_kept_flags(const std::vector<PacketInfo>& updated, const DiscardLedger& ledger) {
    packets_ = updated;
    ledger_ = ledger;
}

PacketSet make_packet_atoms(double R, double eps0, const std::vector<std::pair<int, double>>& tv,
                            const Curve& curve) {
    PacketSet::Spec spec = packet_lattice(R, eps0);
    std::vector<PacketInfo> packets;
    std::vector<SampledDensity> atoms;
    const double wt = 0.15 * spec.dc;
    for (const auto& [j, c_v] : tv) {
        if (j < 0 || j >= spec.n_theta) throw std::invalid_argument("theta index out of range");
        PacketInfo p;
        p.theta = j;
        p.c_v = c_v;
        p.m = static_cast<std::int64_t>(std::llround(c_v / spec.W));
        p.c_theta = -1.0 + (static_cast<double>(j) + 0.5) * spec.dc;
        const double lo = theta_edge(spec, j) - wt;
        const double hi = theta_edge(spec, j + 1) + wt;
        std::vector<SampledDensity::Entry> entries;
        for (std::int64_t i = spec.grid.cell_of(lo); i <= spec.grid.cell_of(hi); ++i) {
            const double xi = spec.grid.node(i);
            const double w = packet_phi(spec, j, xi);
            if (w == 0.0) continue;
            const double ph = -c_v * xi;
            entries.push_back({i, w * cplx{std::cos(ph), std::sin(ph)}});
        }
        SampledDensity atom = SampledDensity::from_entries(spec.grid, std::move(entries));
        const double n = density_lp_norm(atom, 2.0);
        if (n > 0.0) atom = atom.scaled(cplx{1.0 / n, 0.0});
        packets.push_back(p);
        atoms.push_back(std::move(atom));
    }
    return PacketSet::explicit_atoms(std::move(spec), curve, std::move(packets), std::move(atoms));
}

double reconstruction_residual(const SampledDensity& f, const PacketSet& packets,
                               const SpatialPointSet& pts) {
    const double fnorm = density_lp_norm(f, 2.0);
    if (fnorm == 0.0) return 0.0;
    std::vector<double> residuals(pts.points.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(pts.points.size()), [&](std::int64_t i) {
        const Vec2& x = pts.points[static_cast<std::size_t>(i)];
        const auto fields = packets.packet_fields_at(x);
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < fields.size(); ++k)
            if (packets.info(k).kept) acc += fields[k];
        const cplx direct = extension_point(f, packets.curve(), x.x, x.y);
        residuals[static_cast<std::size_t>(i)] = std::abs(direct - acc);
    });
    double worst = 0.0;
    for (double r : residuals) worst = std::max(worst, r);
    return worst / fnorm;
}

std::vector<std::pair<double, double>> off_tube_decay_profile(const PacketSet& packets,
                                                              std::size_t packet,
                                                              const std::vector<double>& offsets,
                                                              int samples_per_line) {
    const SampledDensity d = packets.packet_density(packet);
    const Tube t = packets.tube(packet);
    const double R = packets.spec().R;
    auto line_max = [&](double offset_units) {
        double mx = 0.0;
        for (int s = 0; s < samples_per_line; ++s) {
            const double x2 = -0.7 * R + 1.4 * R * static_cast<double>(s) /
                                              static_cast<double>(samples_per_line - 1);
            const double x1 = t.c_v - x2 * t.slope + offset_units * t.halfwidth;
            if (Vec2{x1, x2}.norm() > R) continue;  // profile lives in B_R
            mx = std::max(mx, std::abs(extension_point(d, packets.curve(), x1, x2)));
        }
        return mx;
    };
    const double core = line_max(0.0);
    std::vector<std::pair<double, double>> profile;
    for (double off : offsets)
        profile.emplace_back(off, core > 0.0 ? line_max(off) / core : 0.0);
    return profile;
}

DecouplingRecord refined_decoupling_ratio(const PacketSet& packets,
                                          const std::vector<Vec2>& ball_centers) {
    DecouplingRecord rec;
    const double R = packets.spec().R;
    const double rb = std::sqrt(R);
    const double q = 0.5 * rb;  // quadrature spacing

    const auto& n2 = packets.norms2();
    double nmin = kInfinity, nmax = 0.0;
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < packets.packet_count(); ++k) {
        if (!packets.info(k).kept) continue;
        kept.push_back(k);
        nmin = std::min(nmin, n2[k]);
        nmax = std::max(nmax, n2[k]);
    }
    if (kept.empty() || nmax == 0.0) return rec;
    if (std::sqrt(nmax / nmin) > 2.0 * (1.0 + 1e-9))
        throw std::invalid_argument("pigeonhole packets first");

    // multiplicity: tubes meeting each sqrt(R)-ball
    for (const auto& c : ball_centers) {
        std::int64_t m = 0;
        for (std::size_t k : kept) {
            const Tube t = packets.tube(k);
            const double d = std::abs(c.x - t.c_v + c.y * t.slope);
            if (d <= t.halfwidth + rb * std::hypot(1.0, t.slope) && c.norm() <= R + rb) ++m;
        }
        rec.M = std::max(rec.M, m);
    }

    // lhs on the union of the balls, deduplicated on a global q-lattice
    const SampledDensity total = packets.total_density();
    std::set<std::pair<std::int64_t, std::int64_t>> cells;
    for (const auto& c : ball_centers) {
        const auto reach = static_cast<std::int64_t>(std::ceil(rb / q));
        const auto ci = static_cast<std::int64_t>(std::floor(c.x / q));
        const auto cj = static_cast<std::int64_t>(std::floor(c.y / q));
        for (std::int64_t di = -reach; di <= reach; ++di)
            for (std::int64_t dj = -reach; dj <= reach; ++dj) {
                const Vec2 p{(static_cast<double>(ci + di) + 0.5) * q,
                             (static_cast<double>(cj + dj) + 0.5) * q};
                if (dist(p, c) <= rb) cells.insert({ci + di, cj + dj});
            }
    }
    std::vector<Vec2> xpts;
    xpts.reserve(cells.size());
    for (const auto& [i, j] : cells)
        xpts.push_back({(static_cast<double>(i) + 0.5) * q, (static_cast<double>(j) + 0.5) * q});
    std::vector<double> mags(xpts.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(xpts.size()), [&](std::int64_t i) {
        mags[static_cast<std::size_t>(i)] = std::abs(
            extension_point(total, packets.curve(), xpts[static_cast<std::size_t>(i)].x,
                            xpts[static_cast<std::size_t>(i)].y));
    });
    double lhs6 = 0.0;
    for (double m : mags) lhs6 += std::pow(m, 6.0) * q * q;
    rec.lhs = std::pow(lhs6, 1.0 / 6.0);

    // rhs: per-packet L^6 against the ball weight over the tube neighborhood
    auto weight = [&](const Vec2& x) {
        const double excess = std::max(0.0, x.norm() - R) / R;
        return std::pow(1.0 + excess, -200.0);
    };
    std::vector<double> packet6(kept.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(kept.size()), [&](std::int64_t ki) {
        const std::size_t k = kept[static_cast<std::size_t>(ki)];
        const SampledDensity d = packets.packet_density(k);
        const Tube t = packets.tube(k);
        double acc = 0.0;
        for (double lam = -8.0 * t.halfwidth; lam <= 8.0 * t.halfwidth; lam += q) {
            for (double x2 = -1.2 * R; x2 <= 1.2 * R; x2 += q) {
                const Vec2 x{t.c_v - x2 * t.slope + lam, x2};
                const double v = std::abs(extension_point(d, packets.curve(), x.x, x.y));
                acc += std::pow(v, 6.0) * weight(x) * q * q;
            }
        }
        packet6[static_cast<std::size_t>(ki)] = acc;
    });
    double sum6 = 0.0;
    for (double v : packet6) sum6 += v;
    rec.rhs = std::pow(static_cast<double>(rec.M), 1.0 / 3.0) * std::pow(sum6, 1.0 / 6.0);
    rec.C_obs = rec.rhs > 0.0 ? rec.lhs / rec.rhs : 0.0;
    return rec;
}

}  // namespace extlab
