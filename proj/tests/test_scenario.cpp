#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include <doctest.h>

#include "ffspec/errors.hpp"
#include "ffspec/scenario.hpp"

using namespace ffspec;
using namespace ffspec::scenario;
using io::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("ffspec_test_scenario_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& file) {
    std::ifstream is(file, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

json strip_times(json j) {
    if (j.is_object()) {
        j.erase("wall_time_s");
        for (auto& [k, v] : j.items()) v = strip_times(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_times(v);
    }
    return j;
}

json small_config() {
    return json::parse(R"({
      "name": "small",
      "k": 1.0,
      "scatterer": {"shape": "sphere", "radius": 1.0, "condition": "impedance", "eta": 1.0},
      "rule": {"n_polar": 6, "n_azimuth": 12},
      "tasks": ["forward", "spectrum", "retrieve", "translation"],
      "task_options": {"translation": {"shifts": 3}}
    })");
}

#ifdef FFSPEC_CLI
int cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + FFSPEC_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

}  // namespace

TEST_CASE("config errors are listed exhaustively") {
    auto j = json::parse(R"({"k": -1, "rule": {"n_polar": 4, "n_azimuth": 7}, "tasks": ["spectrum", "fly"], "colour": 1})");
    try {
        parse_config(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("name:") != std::string::npos);
        CHECK(msg.find("k: must be positive") != std::string::npos);
        CHECK(msg.find("scatterers: required") != std::string::npos);
        CHECK(msg.find("rule:") != std::string::npos);
        CHECK(msg.find("\"fly\"") != std::string::npos);
        CHECK(msg.find("colour: unknown field") != std::string::npos);
    }
}

TEST_CASE("compare needs two scatterers") {
    auto j = small_config();
    j["tasks"] = {"compare"};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j.erase("scatterer");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("dimension mismatch and bad blocks are rejected") {
    auto j = small_config();
    j["rule"] = {{"n_circle", 16}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = small_config();
    j["tolerances"] = {{"spectrum", {{"normality_residual", "tight"}}}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = small_config();
    j["task_options"] = {{"imaging", json::object()}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("corpus coverage") {
    const auto c = corpus();
    CHECK(c.size() >= 10);
    std::set<std::string> names, conditions, tasks;
    for (const auto& j : c) {
        const auto cfg = parse_config(j);
        names.insert(cfg.name);
        for (const auto& s : cfg.scatterers) conditions.insert(io::to_json(s)["condition"].get<std::string>());
        for (auto t : cfg.tasks) tasks.insert(to_string(t));
    }
    CHECK(names.size() == c.size());
    CHECK(conditions == std::set<std::string>{"dirichlet", "impedance", "penetrable"});
    CHECK(tasks == std::set<std::string>{"compare", "forward", "retrieve", "spectrum", "translation"});
}

TEST_CASE("run writes a complete, deterministic report") {
    const auto cfg = parse_config(small_config());
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    const auto ra = run(cfg, a);
    const auto rb = run(cfg, b);
    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    const auto report = io::read_json(a / "report.json");
    CHECK(report["status"] == "pass");
    CHECK(report["tasks"].size() == 4);
    for (const auto& t : report["tasks"]) {
        for (const auto& art : t["artifacts"]) CHECK(fs::exists(a / art.get<std::string>()));
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), a);
        if (rel == "report.json") continue;
        CHECK_MESSAGE(slurp(entry.path()) == slurp(b / rel), rel.string());
        ++compared;
    }
    CHECK(compared >= 8);
    CHECK(strip_times(report) == strip_times(io::read_json(b / "report.json")));
}

TEST_CASE("a failing task does not stop later tasks") {
    auto j = small_config();
    j["tasks"] = {"forward", "spectrum"};
    j["tolerances"] = {{"forward", {{"reciprocity_residual", -1.0}}}};
    const auto dir = scratch("partial");
    const auto r = run(parse_config(j), dir);
    CHECK(r.exit_code == 2);
    REQUIRE(r.tasks.size() == 2);
    CHECK(r.tasks[0].status == "fail");
    CHECK(r.tasks[1].status == "pass");

    j["tasks"] = {"spectrum"};
    j["task_options"] = {{"spectrum", {{"funk_hecke", {{"max_degree", 2}}}}}};
    j["scatterer"]["offset"] = {0.1, 0.0, 0.0};
    const auto e = run(parse_config(j), scratch("error"));
    CHECK(e.tasks[0].status == "error");
    CHECK(e.tasks[0].error.find("centred") != std::string::npos);
}

TEST_CASE("Dirichlet sphere spectrum scenario") {
    auto j = json::parse(R"({"name": "sd", "k": 1.0, "scatterer": {"shape": "sphere", "condition": "dirichlet"},
                             "rule": {"n_polar": 16, "n_azimuth": 32}, "tasks": ["spectrum"]})");
    const auto dir = scratch("sd");
    CHECK(run(parse_config(j), dir).exit_code == 0);
    const auto report = io::read_json(dir / "report.json");
    CHECK(report["tasks"][0]["metrics"]["normality_residual"].get<double>() <= 1e-8);
}

#ifdef FFSPEC_CLI
TEST_CASE("command line") {
    const auto dir = scratch("cli");
    const auto log = dir / "log.txt";

    auto bad = small_config();
    bad["tasks"] = {"compare"};
    io::write_json(bad, dir / "bad.json");
    CHECK(cli("run --config \"" + (dir / "bad.json").string() + "\"", log) == 1);
    CHECK(slurp(log).find("compare' requires two scatterers") != std::string::npos);

    CHECK(cli("run", log) == 1);
    CHECK(cli("fly", log) == 1);

    auto kite = json::parse(R"({"name": "kite", "k": 1.0,
                               "scatterer": {"shape": "curve", "curve": "kite", "boundary_points": 128, "condition": "dirichlet"},
                               "rule": {"n_circle": 64}, "tasks": ["retrieve"]})");
    io::write_json(kite, dir / "kite.json");
    CHECK(cli("run --config \"" + (dir / "kite.json").string() + "\" --output-dir \"" + (dir / "out").string() +
                  "\" --jobs 1",
              log) == 0);
    const auto report = io::read_json(dir / "out" / "report.json");
    CHECK(report["tasks"][0]["metrics"]["retrieval_error"].get<double>() <= 1e-4);

    CHECK(cli("corpus --dump \"" + (dir / "corpus").string() + "\"", log) == 0);
    std::size_t count = 0;
    for (const auto& e : fs::directory_iterator(dir / "corpus")) {
        CHECK_NOTHROW(load_config(e.path()));
        ++count;
    }
    CHECK(count == corpus().size());
}
#endif
