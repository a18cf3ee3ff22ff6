#include "extlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace extlab {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_weight_csv(const WeightSet& w, const std::string& csv_path,
                      const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path);
    csv << "x1,x2\n";
    for (const auto& c : w.centers) csv << fmt_double(c.x) << ',' << fmt_double(c.y) << '\n';
    nlohmann::json j;
    j["R"] = w.R;
    j["katz_tao_C"] = w.katz_tao_C;
    j["gamma"] = w.gamma;
    j["seed"] = w.seed;
    j["kind"] = w.kind;
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("cannot open " + json_path);
    js << j.dump(2) << '\n';
}

WeightSet read_weight_csv(const std::string& csv_path, const std::string& json_path) {
    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path);
    std::string line;
    if (!std::getline(csv, line) || line != "x1,x2")
        throw std::runtime_error("bad weight CSV header in " + csv_path);
    WeightSet w;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("bad weight CSV row: " + line);
        w.centers.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    std::ifstream js(json_path);
    if (!js) throw std::runtime_error("cannot open " + json_path);
    nlohmann::json j;
    js >> j;
    w.R = j.at("R").get<double>();
    w.katz_tao_C = j.at("katz_tao_C").get<double>();
    w.gamma = j.at("gamma").get<double>();
    w.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("kind")) w.kind = j.at("kind").get<std::string>();
    return w;
}

void write_field_csv(const Field& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x1,x2,re,im\n";
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        out << fmt_double(f.pts.points[i].x) << ',' << fmt_double(f.pts.points[i].y) << ','
            << fmt_double(f.values[i].real()) << ',' << fmt_double(f.values[i].imag()) << '\n';
    }
}

void write_product_field_csv(const ProductField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x,t,re,im\n";
    for (std::size_t ix = 0; ix < f.x_nodes.size(); ++ix)
        for (std::size_t it = 0; it < f.t_nodes.size(); ++it) {
            const cplx v = f.at(ix, it);
            out << fmt_double(f.x_nodes[ix]) << ',' << fmt_double(f.t_nodes[it]) << ','
                << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
        }
}

void write_measure_csv(const FrostmanMeasure& mu, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x1,x2,re,im,mass\n";
    for (const auto& a : mu.atoms()) {
        out << fmt_double(a.x.x) << ',' << fmt_double(a.x.y) << ',' << fmt_double(a.density.real())
            << ',' << fmt_double(a.density.imag()) << ',' << fmt_double(a.mass) << '\n';
    }
}

void write_packet_manifest(const PacketSet& ps, const std::string& path) {
    nlohmann::json j;
    j["R"] = ps.spec().R;
    j["eps0"] = ps.spec().eps0;
    j["n_theta"] = ps.spec().n_theta;
    j["N_v"] = ps.spec().N_v;
    j["W"] = ps.spec().W;
    j["dropped"] = ps.ledger().dropped;
    j["dropped_norm2_sum"] = ps.ledger().norm2_sum;
    j["dropped_field_bound"] = ps.ledger().field_bound;
    nlohmann::json rows = nlohmann::json::array();
    const auto& n2 = ps.norms2();
    for (std::size_t k = 0; k < ps.packet_count(); ++k) {
        const PacketInfo& p = ps.info(k);
        rows.push_back({{"theta", p.theta},
                        {"v", p.m},
                        {"c_theta", p.c_theta},
                        {"c_v", p.c_v},
                        {"norm2", std::sqrt(n2[k])},
                        {"kept", p.kept}});
    }
    j["packets"] = std::move(rows);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump() << '\n';
}

}  // namespace extlab
