// End-to-end runs and their output files.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "bayesphase/errors.hpp"
#include "bayesphase/experiment.hpp"

using namespace bayesphase;

namespace {

ExperimentConfig small_config() {
    return parse_config(
        "probe.family = noon\nprobe.N = 2\nprior.width = pi/2\nrun.mu_max = 60\n"
        "run.trajectories = 20\nrun.theta_nodes = 5\nrun.grid_size = 257\nrun.seed = 9\n");
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("curve CSV layout") {
    auto cfg = small_config();
    auto b = run_experiment(cfg, {1, nullptr});
    const auto csv = curve_csv(b.curve);
    CHECK(csv.find('\r') == std::string::npos);
    auto ls = lines(csv);
    REQUIRE(ls.size() == cfg.schedule().size() + 1);
    CHECK(ls[0] == "mu,mse,mse_stderr,qcrb,zzb,wwb,rel_err");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        auto f = fields(ls[i]);
        REQUIRE(f.size() == 7);
        CHECK(std::stoi(f[0]) == cfg.schedule()[i - 1]);
        const double mse = std::stod(f[1]), crb = std::stod(f[3]), rel = std::stod(f[6]);
        CHECK(std::abs(rel - 100.0 * std::abs(mse - crb) / mse) <= 1e-12 * std::max(1.0, rel));
        CHECK(crb == doctest::Approx(1.0 / (std::stoi(f[0]) * 4.0)).epsilon(1e-15));
        CHECK_FALSE(f[4].empty());
        CHECK_FALSE(f[5].empty());
    }
    CHECK(b.w0 == doctest::Approx(std::numbers::pi / 2));
    CHECK(b.curve.qfi == doctest::Approx(4.0));
}

TEST_CASE("switched-off bounds leave empty columns") {
    auto cfg = small_config();
    cfg.zzb = false;
    auto b = run_experiment(cfg, {1, nullptr});
    for (const auto& l : lines(curve_csv(b.curve))) {
        auto f = fields(l);
        REQUIRE(f.size() == 7);
        if (f[0] == "mu") continue;
        CHECK(f[4].empty());
        CHECK_FALSE(f[5].empty());
    }
}

TEST_CASE("output is independent of the worker count") {
    auto cfg = small_config();
    const auto a = run_experiment(cfg, {1, nullptr});
    const auto b = run_experiment(cfg, {3, nullptr});
    CHECK(curve_csv(a.curve) == curve_csv(b.curve));
    CHECK(bundle_json(a) == bundle_json(b));
    CHECK(a.mu_tau == b.mu_tau);
}

TEST_CASE("bundle files") {
    auto cfg = small_config();
    auto b = run_experiment(cfg, {1, nullptr});
    const auto dir = std::filesystem::temp_directory_path() / "bayesphase_bundle_test";
    std::filesystem::remove_all(dir);
    write_bundle(b, dir, "noon");
    for (const char* ext : {".csv", ".json", ".config", ".timing.json"}) CHECK(std::filesystem::exists(dir / ("noon" + std::string(ext))));
    CHECK(slurp(dir / "noon.csv") == curve_csv(b.curve));
    auto doc = nlohmann::json::parse(slurp(dir / "noon.json"));
    CHECK(doc.contains("config"));
    CHECK_FALSE(doc.dump().find("wall") != std::string::npos);
    CHECK(slurp(dir / "noon.config") == echo_config(cfg));
    auto reparsed = load_config((dir / "noon.config").string());
    CHECK(echo_config(reparsed) == echo_config(cfg));
    std::filesystem::remove_all(dir);
}

TEST_CASE("unsupported and invalid runs") {
    auto cfg = parse_config("probe.family = delta\nprobe.N = 2\nprobe.delta = 0.5\nprior.width = pi\nrun.seed = 1\n");
    CHECK_THROWS_AS(run_experiment(cfg), UnsupportedError);
    auto bad = small_config();
    bad.mu_max = 0;
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("labels") {
    const double pi = std::numbers::pi;
    CHECK(width_label(pi) == "pi");
    CHECK(width_label(pi / 2) == "pi/2");
    CHECK(width_label(2 * pi / 3) == "2pi/3");
    CHECK(width_label(2 * pi) == "2pi");
    CHECK(width_label(0.7) == "0.7");
    CHECK(mu_tau_label(std::nullopt, 1000) == ">1000");
    CHECK(mu_tau_label(42, 1000) == "42");
}
