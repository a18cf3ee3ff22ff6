#pragma once

#include <cstdint>
#include <vector>

#include "extlab/extension.hpp"
#include "extlab/grid.hpp"

namespace extlab {

// R^{1/2+eps0} x R slab in direction (1, Phi'(c_theta)).
struct Tube {
    double R = 0.0;
    double c_v = 0.0;
    double slope = 0.0;  // Phi'(c_theta)
    double halfwidth = 0.0;

    bool contains(const Vec2& x) const {
        return std::abs(x.x - c_v + x.y * slope) <= halfwidth && x.norm() <= R;
    }
};

struct PacketInfo {
    int theta = 0;         // index into the frequency cover
    std::int64_t m = 0;    // spatial lattice index, c_v = m W
    double c_theta = 0.0;
    double c_v = 0.0;
    bool kept = true;
};

// Discard ledger: what tail_cut dropped and the certified field bound.
struct DiscardLedger {
    std::int64_t dropped = 0;
    double norm2_sum = 0.0;       // sum of dropped ||f_T||_2^2
    double field_bound = 0.0;     // sum of dropped sup_x |Ef_T(x)| bounds
};

// f = sum_{theta, v} (f phi_theta) * psi_hat_v realized on a grid whose
// spatial lattice {c_v = m W} is DFT-complete: the v-sum telescopes exactly,
// so reconstruction with tail_cut = 0 is a machine-precision identity.
//
// Frequency cover: #Theta = ceil(2 sqrt(R)) cells of width dc = 2/#Theta,
// phi_theta a smooth-step partition of unity with supp phi_theta inside
// 2 theta. psi_hat is a smooth plateau indicator supported in [-2dc, 2dc],
// which pins supp f_T inside 3 theta exactly.
class PacketSet {
public:
    struct Spec {
        double R = 0.0;
        double eps0 = 0.0;
        int n_theta = 0;
        double dc = 0.0;        // theta cell width
        double W = 0.0;         // v spacing, 2.5 / dc
        std::int64_t N_v = 0;   // packets per theta (power of two)
        double h = 0.0;         // grid step, W h = 2 pi / N_v
        FrequencyGrid grid;
        double halfwidth = 0.0; // R^{1/2+eps0}
    };

    const Spec& spec() const { return spec_; }
    const Curve& curve() const { return curve_; }
    std::size_t packet_count() const { return packets_.size(); }
    const PacketInfo& info(std::size_t k) const { return packets_[k]; }
    const std::vector<PacketInfo>& packets() const { return packets_; }
    Tube tube(std::size_t k) const;
    const DiscardLedger& ledger() const { return ledger_; }

    // ||f_T||_2^2 per packet (lazy; one FFT-correlation pass per theta)
    const std::vector<double>& norms2() const;

    // the coefficient density f_{theta,v} of one packet
    SampledDensity packet_density(std::size_t k) const;

    // per-packet fields Ef_T(x), in packet order (dropped packets included,
    // marked by info().kept)
    std::vector<cplx> packet_fields_at(const Vec2& x) const;

    // sum of kept packet densities
    SampledDensity total_density() const;

    static PacketSet factored(Spec spec, Curve curve, std::vector<PacketInfo> packets,
                              std::vector<std::int64_t> block_start,
                              std::vector<std::vector<cplx>> block_g, std::vector<cplx> kernel,
                              std::int64_t L2, DiscardLedger ledger);
    static PacketSet explicit_atoms(Spec spec, Curve curve, std::vector<PacketInfo> packets,
                                    std::vector<SampledDensity> atoms);
    void set_kept_flags(const std::vector<PacketInfo>& updated, const DiscardLedger& ledger);

private:
    Spec spec_;
    Curve curve_ = Curve::parabola();
    std::vector<PacketInfo> packets_;
    // factored representation: per-theta g_theta = f phi_theta plus the
    // shared kernel psi_hat samples
    std::vector<std::int64_t> block_start_;
    std::vector<std::vector<cplx>> block_g_;
    std::vector<cplx> kernel_;  // kernel_[L2 + l], |l| <= L2
    std::int64_t L2_ = 0;
    bool factored_ = false;
    // explicit representation (synthetic packet families)
    std::vector<SampledDensity> atoms_;
    DiscardLedger ledger_;

    mutable std::vector<double> norms2_;
    mutable bool norms_ready_ = false;
};

// lattice parameters and the grid f must live on
PacketSet::Spec packet_lattice(double R, double eps0 = 0.05);
inline FrequencyGrid packet_grid(double R, double eps0 = 0.05) {
    return packet_lattice(R, eps0).grid;
}

// smooth partition pieces (exposed for tests)
double packet_phi(const PacketSet::Spec& spec, int j, double xi);
double packet_chi(const PacketSet::Spec& spec, double eta);

PacketSet build_wave_packets(const SampledDensity& f, double R, double eps0, double tail_cut,
                             const Curve& curve = Curve::parabola());

// synthetic equal-norm packet family: one unit-norm atom
// phi_theta(xi) e^{-i c_v xi} per requested (theta index, c_v) pair
PacketSet make_packet_atoms(double R, double eps0, const std::vector<std::pair<int, double>>& tv,
                            const Curve& curve = Curve::parabola());

// max over pts of |Ef(x) - sum_T Ef_T(x)| / ||f||_2
double reconstruction_residual(const SampledDensity& f, const PacketSet& packets,
                               const SpatialPointSet& pts);

// (offset, max |Ef_T| on the offset line / max on the core line); lines run
// parallel to the tube axis, offsets in units of the halfwidth
std::vector<std::pair<double, double>> off_tube_decay_profile(const PacketSet& packets,
                                                              std::size_t packet,
                                                              const std::vector<double>& offsets,
                                                              int samples_per_line = 33);

struct DecouplingRecord {
    double lhs = 0.0;
    std::int64_t M = 0;
    double rhs = 0.0;
    double C_obs = 0.0;
};

// lhs = ||Ef||_{L^6(X)} over the union of sqrt(R)-balls, M the max tube
// multiplicity over those balls, rhs = M^{1/3} (sum_T ||Ef_T||^6_{L^6(w)})^{1/6}
// with w = (1 + (|x|-R)^+/R)^{-200}.
DecouplingRecord refined_decoupling_ratio(const PacketSet& packets,
                                          const std::vector<Vec2>& ball_centers);

}  // namespace extlab
