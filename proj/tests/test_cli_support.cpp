#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "extlab/experiments.hpp"
#include "extlab/harness.hpp"
#include "extlab/incidence.hpp"
#include "extlab/io.hpp"
#include "extlab/parallel.hpp"
#include "extlab/toml.hpp"
#include "extlab/wavepackets.hpp"

using namespace extlab;

TEST_CASE("toml: tables, scalars, arrays, comments") {
    const std::string text = R"(# experiment config
[experiment]
name = "weighted_l2"   # inline comment
seeds = 4
q = 3.6
flag = true
R = [64, 128, 256]
labels = ["a", "b"]
)";
    const TomlFile cfg = TomlFile::parse_string(text);
    CHECK(cfg.get_string("experiment.name") == "weighted_l2");
    CHECK(cfg.get_int("experiment.seeds") == 4);
    CHECK(cfg.get_double("experiment.q") == doctest::Approx(3.6));
    CHECK(cfg.get_bool("experiment.flag"));
    CHECK(cfg.get_double_array("experiment.R") == std::vector<double>{64.0, 128.0, 256.0});
    CHECK(cfg.get_string_array("experiment.labels") == std::vector<std::string>{"a", "b"});
    CHECK(cfg.get_int_or("experiment.missing", 7) == 7);
    CHECK_FALSE(cfg.has("experiment.missing"));
}

TEST_CASE("toml: line-anchored parse errors") {
    try {
        TomlFile::parse_string("[experiment]\nkey value\n", "bad.toml");
        CHECK(false);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("bad.toml:2") != std::string::npos);
    }
    CHECK_THROWS(TomlFile::parse_string("[oops\n"));
    CHECK_THROWS(TomlFile::parse_string("a = [1, 2\n"));
}

TEST_CASE("experiment registry") {
    CHECK(harness::experiment_names().size() == 7);
    for (const auto& n : harness::experiment_names()) CHECK(!harness::describe(n).empty());
    CHECK_THROWS(harness::describe("nope"));
    const TomlFile cfg = TomlFile::parse_string("[experiment]\nname = \"nope\"\n");
    CHECK_THROWS(harness::run_by_name("nope", cfg));
}

TEST_CASE("weight set round-trips through CSV + JSON") {
    const WeightSet w = generate_weight(WeightKind::random_katz_tao, 128.0, 77,
                                        WeightParams{.count = 64, .q0 = 0});
    const std::string dir = "test_io_artifacts";
    std::filesystem::create_directories(dir);
    write_weight_csv(w, dir + "/w.csv", dir + "/w.json");
    const WeightSet r = read_weight_csv(dir + "/w.csv", dir + "/w.json");
    REQUIRE(r.centers.size() == w.centers.size());
    for (std::size_t i = 0; i < w.centers.size(); ++i) {
        CHECK(r.centers[i].x == w.centers[i].x);  // 17 digits round-trip exactly
        CHECK(r.centers[i].y == w.centers[i].y);
    }
    CHECK(r.R == w.R);
    CHECK(r.seed == w.seed);
}

TEST_CASE("field, product-field and measure CSV emitters") {
    const std::string dir = "test_io_artifacts";
    std::filesystem::create_directories(dir);
    {
        Field f;
        f.pts = SpatialPointSet::make(10.0, {{1.0, 2.0}, {-3.0, 0.5}}, 1.0);
        f.values = {cplx{0.25, -1.0}, cplx{2.0, 0.0}};
        write_field_csv(f, dir + "/field.csv");
        std::ifstream in(dir + "/field.csv");
        std::string line;
        std::getline(in, line);
        CHECK(line == "x1,x2,re,im");
        std::getline(in, line);
        CHECK(line == "1,2,0.25,-1");
    }
    {
        const ProductField u =
            ProductField::make({0.0, 1.0}, {0.5}, 1.0, {cplx{1.0, 0.0}, cplx{0.0, 2.0}});
        write_product_field_csv(u, dir + "/pf.csv");
        std::ifstream in(dir + "/pf.csv");
        std::string line;
        std::getline(in, line);
        CHECK(line == "x,t,re,im");
    }
    {
        const FrostmanMeasure mu =
            FrostmanMeasure::from_atoms({{{0.5, 0.25}, cplx{0.5, 0.5}, std::sqrt(0.5)}});
        write_measure_csv(mu, dir + "/mu.csv");
        std::ifstream in(dir + "/mu.csv");
        std::string line;
        std::getline(in, line);
        CHECK(line == "x1,x2,re,im,mass");
        std::getline(in, line);
        CHECK(line.substr(0, 9) == "0.5,0.25,");
    }
}

TEST_CASE("packet manifest records every packet with its ledger") {
    const double R = 64.0;
    const extlab::FrequencyGrid g = extlab::packet_grid(R);
    std::vector<extlab::SampledDensity::Entry> e;
    for (std::int64_t i = g.count / 4; i < g.count / 4 + 200; ++i) e.push_back({i, cplx{1.0, 0.0}});
    const extlab::SampledDensity f = extlab::SampledDensity::from_entries(g, std::move(e));
    const extlab::PacketSet ps = extlab::build_wave_packets(f, R, 0.05, 1e-4);
    const std::string dir = "test_io_artifacts";
    std::filesystem::create_directories(dir);
    write_packet_manifest(ps, dir + "/packets.json");
    std::ifstream in(dir + "/packets.json");
    nlohmann::json j;
    in >> j;
    CHECK(j.at("packets").size() == ps.packet_count());
    CHECK(j.at("dropped").get<std::int64_t>() == ps.ledger().dropped);
    CHECK(ps.ledger().dropped > 0);  // tail_cut actually dropped something
}

TEST_CASE("union raster exports as a readable PGM") {
    const double delta = 1.0 / 32.0;
    const extlab::LineShading ls = extlab::make_bush_shading(delta, {0.1, 0.0});
    const std::string dir = "test_io_artifacts";
    std::filesystem::create_directories(dir);
    extlab::write_union_pgm(ls, dir + "/union.pgm");
    std::ifstream in(dir + "/union.pgm", std::ios::binary);
    std::string magic;
    in >> magic;
    CHECK(magic == "P5");
    int w = 0, h = 0, maxv = 0;
    in >> w >> h >> maxv;
    CHECK(w == h);
    CHECK(maxv == 255);
    in.get();
    std::vector<char> pix(static_cast<std::size_t>(w) * h);
    in.read(pix.data(), static_cast<std::streamsize>(pix.size()));
    CHECK(in.gcount() == static_cast<std::streamsize>(pix.size()));
    std::size_t lit = 0;
    for (char c : pix)
        if (c != 0) ++lit;
    CHECK(lit > 0);
    CHECK(lit < pix.size());
}

TEST_CASE("identical config and seeds give byte-identical rows") {
    const std::vector<double> R_list = {64, 128, 256};
    const auto a = harness::run_weighted_l2(R_list, 2, 5);
    const auto b = harness::run_weighted_l2(R_list, 2, 5);
    REQUIRE(a.csv_rows.size() == b.csv_rows.size());
    for (std::size_t i = 0; i < a.csv_rows.size(); ++i) CHECK(a.csv_rows[i] == b.csv_rows[i]);
}

TEST_CASE("results do not depend on the worker count") {
    const std::vector<double> R_list = {64, 128, 256};
    extlab::set_parallel_jobs(1);
    const auto serial = harness::run_weighted_l2(R_list, 2, 5);
    extlab::set_parallel_jobs(3);
    const auto threaded = harness::run_weighted_l2(R_list, 2, 5);
    extlab::set_parallel_jobs(0);  // back to the default
    REQUIRE(serial.csv_rows.size() == threaded.csv_rows.size());
    for (std::size_t i = 0; i < serial.csv_rows.size(); ++i)
        CHECK(serial.csv_rows[i] == threaded.csv_rows[i]);
}

TEST_CASE("artifact writing produces summary, data and manifest") {
    const auto out = harness::run_weighted_l2({64, 128, 256}, 1, 9);
    const std::string dir = "test_artifacts/weighted_l2/run1";
    nlohmann::json manifest;
    manifest["command"] = "run inline";
    harness::write_artifacts(out, dir, manifest);
    CHECK(std::filesystem::exists(dir + "/summary.json"));
    CHECK(std::filesystem::exists(dir + "/data.csv"));
    CHECK(std::filesystem::exists(dir + "/manifest.json"));
    std::ifstream csv(dir + "/data.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == out.csv_header);
    std::ifstream mf(dir + "/manifest.json");
    nlohmann::json j;
    mf >> j;
    CHECK(j.at("tool_version").get<std::string>() == harness::kToolVersion);
    CHECK(j.at("rows").get<std::size_t>() == out.csv_rows.size());
}

TEST_CASE("config hash is stable under key reordering") {
    const TomlFile a = TomlFile::parse_string("[experiment]\nname = \"mt\"\np = 3.6\nseeds = 4\n");
    const TomlFile b = TomlFile::parse_string("[experiment]\nseeds = 4\np = 3.6\nname = \"mt\"\n");
    const TomlFile c = TomlFile::parse_string("[experiment]\nseeds = 5\np = 3.6\nname = \"mt\"\n");
    CHECK(a.stable_hash() == b.stable_hash());
    CHECK(a.stable_hash() != c.stable_hash());
}

TEST_CASE("sigma_p fit wiring on a constant-mean family") {
    // point masses have |mu_hat| == 1, so the circular means are scale-free
    const MeasureFamily constant_family = [](double) {
        return FrostmanMeasure::from_atoms({{{0.5, 0.5}, cplx{1.0, 0.0}, 1.0}});
    };
    const std::vector<double> R_list = {8, 16, 32, 64};
    const ExponentFit fit = sigma_p_fit(constant_family, 2.0, R_list);
    CHECK(std::abs(fit.slope) <= 1e-6);
    CHECK_THROWS(sigma_p_fit(constant_family, 2.0, std::vector<double>{8, 16, 32}));
}
