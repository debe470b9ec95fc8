// Drives the installed binary through std::system, so these tests check the
// real exit codes and on-disk artifacts a user would see. The binary path
// arrives in the MALKIT_BIN environment variable (set by ctest).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* bin = std::getenv("MALKIT_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "MALKIT_BIN must point at the cli binary");
    return bin;
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("malkit_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// returns the process exit code, with stdout/stderr captured to a file
int run_cli(const std::string& args, const fs::path& capture) {
    std::string cmd = binary() + " " + args + " >" + capture.string() +
                      " 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("--help exits 0, unknown subcommand exits 1") {
    fs::path dir = scratch("exit_codes");
    CHECK(run_cli("--help", dir / "help.txt") == 0);
    CHECK(slurp(dir / "help.txt").find("synth") != std::string::npos);
    CHECK(run_cli("frobnicate", dir / "bad.txt") == 1);
    CHECK(run_cli("", dir / "none.txt") == 1);  // a subcommand is required
    CHECK(run_cli("run --config /nonexistent.json", dir / "noconf.txt") == 1);
}

TEST_CASE("synth then mal-plan prints within-range query indices") {
    fs::path dir = scratch("plan");
    REQUIRE(run_cli("synth --out-features " + (dir / "f.csv").string() +
                        " --out-labels " + (dir / "l.csv").string() +
                        " --per-blob 20 --dim 6 --separation 6 --seed 3",
                    dir / "synth.txt") == 0);
    REQUIRE(fs::exists(dir / "f.csv"));
    REQUIRE(fs::exists(dir / "l.csv"));

    REQUIRE(run_cli("mal-plan --features " + (dir / "f.csv").string() +
                        " --budget 5 --metric cosine",
                    dir / "plan.txt") == 0);
    std::istringstream lines(slurp(dir / "plan.txt"));
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        ++count;
        std::size_t idx = std::stoul(line);
        CHECK(idx < 80);
    }
    CHECK(count == 4);  // 5% of 80

    // same invocation, same plan
    REQUIRE(run_cli("mal-plan --features " + (dir / "f.csv").string() +
                        " --budget 5 --metric cosine",
                    dir / "plan2.txt") == 0);
    CHECK(slurp(dir / "plan.txt") == slurp(dir / "plan2.txt"));
}

TEST_CASE("malformed config names the offending key and exits 1") {
    fs::path dir = scratch("badconf");
    {
        std::ofstream cfg(dir / "bad.json");
        cfg << R"({"dataset": {"synth": {}}, "reducerr": "pca32"})";
    }
    CHECK(run_cli("run --config " + (dir / "bad.json").string(),
                  dir / "out.txt") == 1);
    CHECK(slurp(dir / "out.txt").find("reducerr") != std::string::npos);
}

TEST_CASE("run produces report + manifest; reruns are byte-identical") {
    fs::path dir = scratch("golden");
    {
        std::ofstream cfg(dir / "exp.json");
        cfg << R"({
  "name": "cli-golden",
  "dataset": {"synth": {"blobs": 4, "per_blob": 20, "dim": 6,
                         "separation": 6.0, "seed": 5}},
  "budgets": [10, 100],
  "folds": 2,
  "repeats": 1,
  "seed": 11,
  "grid": {"C": [1], "gamma": [0.3]}
})";
    }
    std::string base = "run --config " + (dir / "exp.json").string() +
                       " --out-dir ";
    REQUIRE(run_cli(base + (dir / "a").string(), dir / "run_a.txt") == 0);
    REQUIRE(run_cli(base + (dir / "b").string(), dir / "run_b.txt") == 0);
    REQUIRE(fs::exists(dir / "a" / "report.csv"));
    REQUIRE(fs::exists(dir / "a" / "manifest.json"));
    CHECK(slurp(dir / "a" / "report.csv") == slurp(dir / "b" / "report.csv"));

    // the manifest is valid json and echoes the config name and hash
    nlohmann::json manifest;
    {
        std::ifstream in(dir / "a" / "manifest.json");
        in >> manifest;
    }
    CHECK(manifest.at("config").at("name") == "cli-golden");
    CHECK(manifest.at("failures").empty());
    std::string report = slurp(dir / "a" / "report.csv");
    CHECK(report.find(manifest.at("config_hash").get<std::string>()) !=
          std::string::npos);

    // resume on a finished directory adds nothing and changes nothing
    std::string before = slurp(dir / "a" / "report.csv");
    REQUIRE(run_cli(base + (dir / "a").string(), dir / "run_c.txt") == 0);
    CHECK(slurp(dir / "a" / "report.csv") == before);
    // 2 tasks x 2 budgets x 2 folds x 2 strategies, all resumed
    CHECK(slurp(dir / "run_c.txt").find("16 resumed") != std::string::npos);
}

TEST_CASE("aggregate emits group and contrast tables") {
    fs::path dir = scratch("agg");
    {
        std::ofstream cfg(dir / "exp.json");
        cfg << R"({
  "dataset": {"synth": {"blobs": 4, "per_blob": 20, "dim": 6,
                         "separation": 6.0, "seed": 5}},
  "budgets": [50],
  "folds": 2,
  "repeats": 1,
  "seed": 2,
  "grid": {"C": [1], "gamma": [0.3]}
})";
    }
    REQUIRE(run_cli("run --config " + (dir / "exp.json").string() +
                        " --out-dir " + (dir / "out").string(),
                    dir / "run.txt") == 0);
    REQUIRE(run_cli("aggregate --report " +
                        (dir / "out" / "report.csv").string() +
                        " --group-by task,strategy --contrast-by task" +
                        " --out " + (dir / "summary.csv").string() +
                        " --contrast-out " + (dir / "contrast.csv").string(),
                    dir / "agg.txt") == 0);
    std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.rfind("task,strategy,count,mean_mcc,std_error\n", 0) == 0);
    std::string contrast = slurp(dir / "contrast.csv");
    CHECK(contrast.rfind("task,pairs,mean_diff,t_stat,p_value\n", 0) == 0);

    // grouping by the measurement is refused
    CHECK(run_cli("aggregate --report " +
                      (dir / "out" / "report.csv").string() +
                      " --group-by mcc",
                  dir / "bad.txt") == 1);
}

TEST_CASE("reduce rejects an unknown reducer, accepts pca2") {
    fs::path dir = scratch("reduce");
    REQUIRE(run_cli("synth --out-features " + (dir / "f.csv").string() +
                        " --out-labels " + (dir / "l.csv").string() +
                        " --per-blob 15 --dim 6 --seed 9",
                    dir / "synth.txt") == 0);
    CHECK(run_cli("reduce --features " + (dir / "f.csv").string() +
                      " --out " + (dir / "r.csv").string() +
                      " --reducer umap2",
                  dir / "bad.txt") == 1);
    REQUIRE(run_cli("reduce --features " + (dir / "f.csv").string() +
                        " --out " + (dir / "r.csv").string() +
                        " --reducer pca2 --seed 1",
                    dir / "ok.txt") == 0);
    std::string header = slurp(dir / "r.csv").substr(0, 9);
    CHECK(header == "id,f0,f1\n");
}
