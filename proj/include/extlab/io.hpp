#pragma once

#include <string>

#include "extlab/fractal.hpp"
#include "extlab/grid.hpp"
#include "extlab/wavepackets.hpp"

namespace extlab {

// decimal with 17 significant digits, round-trip safe
std::string fmt_double(double v);

// ball centers as CSV `x1,x2` plus a JSON sidecar {R, katz_tao_C, gamma, seed}
void write_weight_csv(const WeightSet& w, const std::string& csv_path,
                      const std::string& json_path);
WeightSet read_weight_csv(const std::string& csv_path, const std::string& json_path);

// `x1,x2,re,im`
void write_field_csv(const Field& f, const std::string& path);
// `x,t,re,im`
void write_product_field_csv(const ProductField& f, const std::string& path);
// `x1,x2,re,im,mass`
void write_measure_csv(const FrostmanMeasure& mu, const std::string& path);

// JSON manifest: one record per packet (theta, v, c_theta, c_v, norm, kept)
void write_packet_manifest(const PacketSet& ps, const std::string& path);

}  // namespace extlab
