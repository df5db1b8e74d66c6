#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "helpers.hpp"

using namespace metricop;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("metricop_tests_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return Json::parse(in);
}

Json small_grid() { return Json{{"half_width", 4.0}, {"points", 21}}; }

Json small_family() { return Json{{"half_width", 4.0}, {"dl", 2.0}, {"points", 21}}; }

} // namespace

TEST_CASE("lattice scenario writes a structured report and exits cleanly") {
    fs::path dir = fresh_dir("lattice");
    Json scen{{"command", "lattice"}, {"recipe", "x2"}, {"grid", small_grid()}};
    RunResult run = run_scenario(scen, dir);
    REQUIRE(run.exit_code == 0);
    REQUIRE(run.report_path == dir / "lattice_report.json");
    REQUIRE(fs::exists(run.report_path));

    Json report = read_json(run.report_path);
    REQUIRE(report.contains("scenario"));
    REQUIRE(report.contains("results"));
    REQUIRE(report.contains("provenance"));
    REQUIRE(report["provenance"]["version"].get<std::string>() == tool_version);
    REQUIRE(report["provenance"].contains("wall_ms"));
    REQUIRE(report["results"]["lattice"]["nodes"].size() == 7);
    REQUIRE(report["results"]["lattice"]["edges"].size() == 8);
    REQUIRE(report["scenario"] == scen);
    fs::remove_all(dir);
}

TEST_CASE("domain errors still produce a report and an input-error exit") {
    fs::path dir = fresh_dir("badrecipe");
    Json scen{{"command", "lattice"}, {"recipe", "no_such_weight"}, {"grid", small_grid()}};
    RunResult run = run_scenario(scen, dir);
    REQUIRE(run.exit_code == 2);
    REQUIRE(fs::exists(dir / "lattice_report.json"));
    Json report = read_json(dir / "lattice_report.json");
    REQUIRE(report.contains("error"));
    REQUIRE_FALSE(report.contains("results"));
    fs::remove_all(dir);
}

TEST_CASE("scenarios without a command are rejected before any report is written") {
    fs::path dir = fresh_dir("nocommand");
    RunResult run = run_scenario(Json{{"recipe", "x2"}}, dir);
    REQUIRE(run.exit_code == 2);
    REQUIRE(run.report_path.empty());
    REQUIRE(fs::is_empty(dir));

    RunResult arr = run_scenario(Json::array(), dir);
    REQUIRE(arr.exit_code == 2);
    fs::remove_all(dir);
}

TEST_CASE("failed verdicts surface as a nonzero exit with the report intact") {
    fs::path dir = fresh_dir("klmnfail");
    // lambda = 1 hits the eigenvalue of x^2 + 1 at the center node
    Json scen{{"command", "klmn"},
              {"lambda", 1.0},
              {"family", small_family()},
              {"levels", 3}};
    RunResult run = run_scenario(scen, dir);
    REQUIRE(run.exit_code == 1);
    Json report = read_json(dir / "klmn_report.json");
    REQUIRE(report["results"]["certificate"]["verdict"].get<std::string>() == "fail");
    REQUIRE(report["results"]["certificate"]["min_singular_value"].get<double>() == 0.0);

    scen["lambda"] = -1.0;
    RunResult good = run_scenario(scen, dir);
    REQUIRE(good.exit_code == 0);
    Json healthy = read_json(dir / "klmn_report.json");
    REQUIRE(healthy["results"]["certificate"]["verdict"].get<std::string>() == "pass");
    fs::remove_all(dir);
}

TEST_CASE("demo expansion produces identical reports on repeat runs") {
    fs::path dir_a = fresh_dir("demo_a");
    fs::path dir_b = fresh_dir("demo_b");
    // shrink the canned grid so the unit suite stays fast; the override path
    // is exactly what the command line uses
    Json scen{{"command", "demo"},
              {"name", "projector_pair"},
              {"grid", Json{{"half_width", 6.0}, {"points", 81}}}};
    RunResult first = run_scenario(scen, dir_a);
    RunResult second = run_scenario(scen, dir_b);
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    REQUIRE(first.report_path == dir_a / "similarity_report.json");

    Json ra = read_json(first.report_path);
    Json rb = read_json(second.report_path);
    ra["provenance"].erase("wall_ms");
    rb["provenance"].erase("wall_ms");
    REQUIRE(ra.dump(2) == rb.dump(2));
    REQUIRE(ra["results"]["cluster_verdict"].get<std::string>() == "pass");
    REQUIRE(ra["results"]["resolvent_verdict"].get<std::string>() == "pass");
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("unknown demo names are input errors with no report") {
    fs::path dir = fresh_dir("demo_unknown");
    RunResult run = run_scenario(Json{{"command", "demo"}, {"name", "mystery"}}, dir);
    REQUIRE(run.exit_code == 2);
    REQUIRE(run.report_path.empty());
    REQUIRE(fs::is_empty(dir));
    fs::remove_all(dir);
}

TEST_CASE("atomic write replaces files without leaving temporaries") {
    fs::path dir = fresh_dir("atomic");
    fs::path target = dir / "note.txt";
    atomic_write(target, "one\n");
    atomic_write(target, "two\n");
    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(content == "two\n");
    size_t entries = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir)) ++entries;
    REQUIRE(entries == 1);
    fs::remove_all(dir);
}

TEST_CASE("demo catalogue is sorted and every entry expands to a runnable scenario") {
    const auto& demos = demo_descriptions();
    REQUIRE(demos.size() == 6);
    std::vector<std::string> names;
    for (const auto& [name, description] : demos) {
        names.push_back(name);
        REQUIRE_FALSE(description.empty());
        Json scen = demo_scenario(name);
        REQUIRE(scen.is_object());
        REQUIRE(scen.contains("command"));
    }
    REQUIRE(std::is_sorted(names.begin(), names.end()));
    REQUIRE_THROWS_AS(demo_scenario("mystery"), UnknownRecipe);
}

TEST_CASE("table-producing commands drop CSV side files next to the report") {
    fs::path dir = fresh_dir("csv");

    Json scale{{"command", "scale"},
               {"recipe", "x2"},
               {"xi", "gaussian"},
               {"grid", small_grid()},
               {"family", small_family()},
               {"alpha_grid", Json::array({0.0, 1.0})}};
    REQUIRE(run_scenario(scale, dir).exit_code == 0);
    REQUIRE(fs::exists(dir / "scale_growth.csv"));

    Json jay{{"command", "jay"},
             {"family", small_family()},
             {"alpha_grid", Json::array({-1.0, 0.0, 1.0})}};
    REQUIRE(run_scenario(jay, dir).exit_code == 0);
    REQUIRE(fs::exists(dir / "jay_norms.csv"));

    ComplexMatrix m(2, 2);
    m << Complex(2.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(-1.0, 0.0);
    Json spectrum{{"command", "spectrum"}, {"matrix", matrix_to_json(m)}};
    REQUIRE(run_scenario(spectrum, dir).exit_code == 0);
    REQUIRE(fs::exists(dir / "spectrum.csv"));
    Json report = read_json(dir / "spectrum_report.json");
    REQUIRE(report["results"]["source"].get<std::string>() == "inline");
    REQUIRE(report["results"]["spectrum"]["clusters"].size() == 2);
    fs::remove_all(dir);
}

TEST_CASE("spectrum command accepts metric recipes as a fallback") {
    fs::path dir = fresh_dir("sobolev");
    Json scen{{"command", "spectrum"}, {"recipe", "sobolev"}, {"grid", small_grid()}};
    RunResult run = run_scenario(scen, dir);
    REQUIRE(run.exit_code == 0);
    Json report = read_json(run.report_path);
    // Sobolev weights are at least one, so the lowest cluster sits at or above 1
    const Json& clusters = report["results"]["spectrum"]["clusters"];
    REQUIRE_FALSE(clusters.empty());
    REQUIRE(clusters.front()["re"].get<double>() >= 1.0 - 1e-9);
    fs::remove_all(dir);
}

TEST_CASE("pseudo scenario reports real low-lying levels") {
    fs::path dir = fresh_dir("pseudo");
    Json scen{{"command", "pseudo"},
              {"alpha", 1.0},
              {"omega", 1.0},
              {"grid", Json{{"half_width", 10.0}, {"points", 240}}}};
    RunResult run = run_scenario(scen, dir);
    REQUIRE(run.exit_code == 0);
    Json report = read_json(dir / "pseudo_report.json");
    REQUIRE(report["results"]["real_spectrum_verdict"].get<std::string>() == "pass");
    REQUIRE(report["results"]["match_verdict"].get<std::string>() == "pass");
    const Json& lowest = report["results"]["lowest_eigenvalues"];
    REQUIRE(lowest.size() == 3);
    REQUIRE(lowest[0].get<double>() == Catch::Approx(0.5).margin(1e-3));
    REQUIRE(fs::exists(dir / "pseudo_spectrum.csv"));
    fs::remove_all(dir);
}
