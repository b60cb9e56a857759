#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "evstudy/csv.hpp"

namespace fs = std::filesystem;
using evstudy::read_file;
using evstudy::write_file;

namespace {

const fs::path kGolden = fs::path(EVSTUDY_SOURCE_DIR) / "tests" / "golden" / "cli";

struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome cli(const fs::path& dir, const std::string& args) {
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + EVSTUDY_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out.string()), read_file(err.string())};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("evstudy_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// synth + run + permute with the parameters the golden files were made with
fs::path golden_study(const std::string& name, const std::string& threads) {
    const auto dir = scratch(name);
    REQUIRE(cli(dir, "synth --out \"" + (dir / "s").string() + "\" --seed 3 --length 300 --events-per-group 5")
                .status == 0);
    const auto config = "--config \"" + (dir / "s" / "study.yaml").string() + "\" --threads " + threads;
    REQUIRE(cli(dir, "run " + config).status == 0);
    REQUIRE(cli(dir, "permute " + config + " --replications 40 --seed 9").status == 0);
    return dir / "s";
}

}  // namespace

TEST_CASE("end-to-end outputs match the golden files") {
    const auto s = golden_study("golden", "1");
    for (const auto& entry : fs::directory_iterator(kGolden)) {
        const auto name = entry.path().filename().string();
        const auto produced = name == "SYNTH.csv" || name == "events.csv" ? s / name : s / "out" / name;
        CAPTURE(name);
        REQUIRE(fs::exists(produced));
        CHECK(read_file(produced.string()) == read_file(entry.path().string()));
    }
}

TEST_CASE("outputs do not depend on thread count") {
    const auto a = golden_study("threads_a", "1");
    const auto b = golden_study("threads_b", "4");
    for (const auto& entry : fs::directory_iterator(a / "out")) {
        CAPTURE(entry.path().filename().string());
        CHECK(read_file(entry.path().string()) == read_file((b / "out" / entry.path().filename()).string()));
    }
}

TEST_CASE("validate and table") {
    const auto dir = scratch("validate");
    const auto s = golden_study("validate_study", "1");
    const auto v = cli(dir, "validate --config \"" + (s / "study.yaml").string() + "\"");
    CHECK(v.status == 0);
    CHECK(v.out.find("10 events") != std::string::npos);
    CHECK(v.out.find("panel: open 5, closed 5") != std::string::npos);

    const auto t = cli(dir, "table \"" + (kGolden / "synth_open.csv").string() + "\" \"" +
                                (kGolden / "synth_closed.csv").string() + "\" \"" +
                                (kGolden / "synth_diff.csv").string() +
                                "\" --headers \"SYNTH open\" \"SYNTH closed\" \"SYNTH diff\"");
    CHECK(t.status == 0);
    const auto table = read_file((kGolden / "table.txt").string());
    CHECK(table.rfind(t.out, 0) == 0);

    const auto mismatch = cli(dir, "table \"" + (kGolden / "synth_open.csv").string() + "\" --headers a b");
    CHECK(mismatch.status != 0);
    CHECK(mismatch.err.find("error:") == 0);
}

TEST_CASE("flag overrides") {
    const auto dir = scratch("flags");
    const auto s = golden_study("flags_study", "1");
    const auto config = "--config \"" + (s / "study.yaml").string() + "\" --out \"" + (dir / "o").string() + "\"";
    CHECK(cli(dir, "run " + config + " --estimator median --window 10").status == 0);
    const auto text = read_file((dir / "o" / "synth_diff.csv").string());
    CHECK(text.find("\n-10,") != std::string::npos);
    CHECK(text.find("\n-11,") == std::string::npos);
    CHECK(cli(dir, "run " + config + " --estimator lad --hac-lags 5").status == 0);
    CHECK(cli(dir, "run " + config + " --estimator probit").status != 0);
    CHECK(cli(dir, "run " + config + " --years 2030..2031").status != 0);
}

TEST_CASE("errors exit non-zero with a message") {
    const auto dir = scratch("errors");
    write_file((dir / "A.csv").string(), "DATE,A\n2024-01-01,1\n2024-01-02,2\n2024-01-03,3\n");
    write_file((dir / "events.csv").string(), "date,model,open\n");
    write_file((dir / "study.yaml").string(), "assets:\n  - path: A.csv\nevents: events.csv\n");
    const auto r = cli(dir, "run --config \"" + (dir / "study.yaml").string() + "\"");
    CHECK(r.status != 0);
    CHECK(r.err.find("no events") != std::string::npos);

    const auto missing = cli(dir, "run --config \"" + (dir / "nope.yaml").string() + "\"");
    CHECK(missing.status != 0);
    CHECK(cli(dir, "").status != 0);
    CHECK(cli(dir, "frobnicate").status != 0);
}
