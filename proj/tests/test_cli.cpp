#include <doctest.h>

#include "../tools/cli.hpp"
#include "invevo/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;
using invevo::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "invevo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string dir() {
    const fs::path d = fs::temp_directory_path() / "invevo_test_cli";
    fs::create_directories(d);
    return d.string() + "/";
}

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"augment", "--pde", "heat", "--bogus", "1", "--out", dir() + "x.ieda"}).code == 1);
    CHECK(invoke({"augment", "--pde", "wave", "--out", dir() + "x.ieda"}).code == 1);
    CHECK(invoke({"augment", "--pde", "heat", "--order", "4", "--out", dir() + "x.ieda"}).code == 1);
    CHECK(invoke({"augment", "--pde", "heat", "--dt", "-1", "--out", dir() + "x.ieda"}).code == 1);
    CHECK(invoke({"augment", "--pde", "heat", "--preprocess", "0.5,0", "--out", dir() + "x.ieda"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("generate, augment, verify, info") {
    const std::string src = dir() + "src.ieda", aug = dir() + "aug.ieda";
    auto g = invoke({"generate", "--pde", "burgers", "--resolution", "64", "--count", "3", "--t-final", "0.2",
                     "--save-every", "0.05", "--seed", "2", "--out", src});
    REQUIRE(g.code == 0);
    CHECK(invevo::read_header(src).scheme_order == 0);
    CHECK(invevo::read_header(src).pair_count == 12);

    auto a = invoke({"augment", "--pde", "burgers", "--resolution", "64", "--dt", "0.01", "--order", "2", "--count",
                     "8", "--seed", "5", "--source", src, "--out", aug});
    REQUIRE(a.code == 0);
    const auto h = invevo::read_header(aug);
    CHECK(h.pair_count == 8);
    CHECK(h.scheme_order == 2);

    auto info = invoke({"info", aug});
    CHECK(info.code == 0);
    CHECK(invevo::parse_info(info.out) == h);
    CHECK(info.out.find("run_config") != std::string::npos);

    const std::string report = dir() + "report.json", plot = dir() + "hist.svg";
    auto v = invoke({"verify", aug, "--out", report, "--plot", plot});
    CHECK(v.code == 0);
    const auto j = nlohmann::json::parse(slurp(report));
    CHECK(j.at("per_pair_errors").size() == 8);
    CHECK(j.at("mean").get<double>() < 1e-2);
    CHECK(slurp(plot).find("<svg") != std::string::npos);

    CHECK(invoke({"info", dir() + "nope.ieda"}).code == 2);
}

TEST_CASE("rerun from the sidecar is byte-identical") {
    const std::string first = dir() + "first.ieda", second = dir() + "second.ieda";
    REQUIRE(invoke({"augment", "--pde", "allen-cahn", "--resolution", "16", "--dt", "0.1", "--count", "6", "--seed",
                    "7", "--config", "/dev/null", "--out", first})
                .code == 0);
    REQUIRE(invoke({"augment", "--config", invevo::sidecar_path(first).string(), "--out", second}).code == 0);
    CHECK(slurp(first) == slurp(second));
    CHECK(slurp(first + ".meta") == slurp(second + ".meta"));
}

TEST_CASE("config file keys override flags") {
    const std::string cfg = dir() + "cfg.txt", out = dir() + "cfg.ieda";
    std::ofstream(cfg) << "pde = heat\nresolution = 32\ndt = 0.001\ncount = 4\n";
    REQUIRE(invoke({"augment", "--pde", "burgers", "--resolution", "64", "--config", cfg, "--out", out}).code == 0);
    const auto h = invevo::read_header(out);
    CHECK(h.pde_kind == 0);
    CHECK(h.n == 32);
    CHECK(h.pair_count == 4);
    std::ofstream(cfg) << "pde = heat\nwobble = 3\n";
    CHECK(invoke({"augment", "--config", cfg, "--out", out}).code == 1);
}

TEST_CASE("failures exit 2") {
    const std::string out = dir() + "fail.ieda", cfg = dir() + "rough.txt";
    std::ofstream(cfg) << "ic.offset = 0\nic.amplitude = 100\nsource.t_start = 0\n";
    auto r = invoke({"augment", "--pde", "heat", "--resolution", "64", "--dt", "1", "--order", "1", "--count", "4",
                     "--config", cfg, "--out", out});
    CHECK(r.code == 2);
    CHECK(r.err.find("blowup") != std::string::npos);

    const std::string good = dir() + "good.ieda";
    REQUIRE(invoke({"augment", "--pde", "heat", "--resolution", "32", "--dt", "0.001", "--count", "2", "--out", good})
                .code == 0);
    std::string bytes = slurp(good);
    bytes[invevo::kHeaderBytes + 3] ^= 0x10;
    std::ofstream(good, std::ios::binary | std::ios::trunc) << bytes;
    CHECK(invoke({"verify", good}).code == 2);
}

TEST_CASE("bench") {
    auto b = invoke({"bench", "--pde", "burgers", "--resolution", "64", "--count", "3", "--dt", "0.01"});
    CHECK(b.code == 0);
    CHECK(nlohmann::json::parse(b.out).is_object());
}

TEST_CASE("binary exit status") {
    const char* bin = std::getenv("INVEVO_BIN");
    REQUIRE(bin != nullptr);
    const std::string quiet = " >/dev/null 2>&1";
    const int ok = std::system((std::string(bin) + " info " + dir() + "src.ieda" + quiet).c_str());
    const int bad = std::system((std::string(bin) + " augment --nope" + quiet).c_str());
    REQUIRE(WIFEXITED(ok));
    REQUIRE(WIFEXITED(bad));
    CHECK(WEXITSTATUS(ok) == 0);
    CHECK(WEXITSTATUS(bad) == 1);
}
