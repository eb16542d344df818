#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path root = fs::temp_directory_path() / "afrac_cli_test";

int run(const std::string& args, const std::string& log = "/dev/null") {
    const std::string cmd = std::string("\"") + AFRAC_CLI + "\" " + args + " >" + log + " 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh(const std::string& name) {
    const auto d = root / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("barrier subcommand") {
    const auto d = fresh("barrier");
    CHECK(run("barrier --s 0.5 --n 2 --points 20 --out " + d.string()) == 0);
    const auto sum = json::parse(slurp(d / "summary.json"));
    CHECK(sum["c"].get<double>() == doctest::Approx(2.0).epsilon(5e-3));
    CHECK(fs::exists(d / "barrier.csv"));
    CHECK(slurp(d / "barrier.csv").rfind("x,y,value\n", 0) == 0);

    const auto m = json::parse(slurp(d / "manifest.json"));
    for (const char* key : {"command", "config", "seed", "threads", "versions", "summary", "outputs", "exit_code",
                            "wall_time_s"})
        CHECK_MESSAGE(m.contains(key), key);
    CHECK(m["exit_code"].get<int>() == 0);
    CHECK(m["config"]["s"].get<std::string>() == "0.5");

    const auto log = d / "stdout.txt";
    CHECK(run("barrier --s 0.5 --points 20 --json --out " + (d / "j").string(), log.string()) == 0);
    CHECK(json::parse(slurp(log))["pass"].get<bool>());
}

TEST_CASE("usage errors exit with 1") {
    const auto d = fresh("usage");
    CHECK(run("solve --domain \"ball(0,0)\" --s 0.25 --g const:1 --h 0.03125 --out " + d.string()) == 1);
    CHECK_FALSE(fs::exists(d / "u.csv"));
    CHECK(run("solve --bogus 1 --out " + d.string()) == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("") == 1);
    CHECK(run("barrier --s 1.5 --out " + d.string()) == 1);
}

TEST_CASE("violated bounds exit with 2") {
    const auto d = fresh("violation");
    CHECK(run("ellipticity --measure \"atoms = [(0, 1)]\" --out " + d.string()) == 2);
    CHECK(json::parse(slurp(d / "manifest.json"))["exit_code"].get<int>() == 2);
}

TEST_CASE("solve writes the grid and its sidecar") {
    const auto d = fresh("solve");
    CHECK(run("solve --domain \"ball(0,0,1)\" --s 0.25 --g const:1 --h 0.0625 --out " + d.string()) == 0);
    CHECK(slurp(d / "u.csv").rfind("i,j,x,y,value,interior_flag\n", 0) == 0);
    const auto side = json::parse(slurp(d / "u.json"));
    CHECK(side["h"].get<double>() == 0.0625);
    CHECK(side["s"].get<double>() == 0.25);
}

TEST_CASE("same config and seed give identical files") {
    const auto a = fresh("det_a"), b = fresh("det_b");
    const std::string args = "verify-lemmas --suite at1 --s 0.25 --trials 30 --seed 7 --out ";
    CHECK(run(args + a.string() + " --threads 1") == 0);
    CHECK(run(args + b.string() + " --threads 3") == 0);
    CHECK(slurp(a / "lemmas.csv") == slurp(b / "lemmas.csv"));
    CHECK(slurp(a / "lemmas.csv").find('\r') == std::string::npos);
    CHECK(slurp(a / "lemmas.csv").rfind("lemma,domain,params,value,bound,ratio,pass\n", 0) == 0);
}

TEST_CASE("config file values apply and flags win") {
    const auto d = fresh("config");
    std::ofstream(d / "run.ini") << "[barrier]\ns = 0.25\npoints = 5\n";
    CHECK(run("barrier --config " + (d / "run.ini").string() + " --out " + (d / "a").string()) == 0);
    auto m = json::parse(slurp(d / "a" / "manifest.json"));
    CHECK(m["config"]["s"].get<std::string>() == "0.25");
    CHECK(m["config"]["points"].get<std::string>() == "5");
    CHECK(run("barrier --config " + (d / "run.ini").string() + " --s 0.75 --out " + (d / "b").string()) == 0);
    m = json::parse(slurp(d / "b" / "manifest.json"));
    CHECK(m["config"]["s"].get<std::string>() == "0.75");
}

TEST_CASE("a failed run leaves no partial outputs") {
    const auto d = fresh("partial");
    // the sidecar path is taken by a directory, so writing it fails after u.csv exists
    fs::create_directories(d / "u.json");
    CHECK(run("solve --domain \"ball(0,0,1)\" --s 0.5 --g const:1 --h 0.125 --out " + d.string()) == 1);
    CHECK_FALSE(fs::exists(d / "u.csv"));
    CHECK_FALSE(fs::exists(d / "summary.json"));
    const auto m = json::parse(slurp(d / "manifest.json"));
    CHECK(m["exit_code"].get<int>() == 1);
    CHECK(m["outputs"].empty());
}
