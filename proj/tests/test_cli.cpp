#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    const auto dir = std::filesystem::temp_directory_path() / "kslab_cli_test";
    std::filesystem::create_directories(dir);
    const auto out_file = dir / "stdout.txt";
    const auto err_file = dir / "stderr.txt";
    const std::string cmd = std::string(KSLAB_CLI_PATH) + " " + args + " > " + out_file.string() +
                            " 2> " + err_file.string();
    const int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WEXITSTATUS(rc);
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    res.out = slurp(out_file);
    res.err = slurp(err_file);
    return res;
}

std::string strip_wall_time(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("wall_time_ms") == std::string::npos) out << line << '\n';
    return out.str();
}

} // namespace

TEST_CASE("space-info reports the documented quantities") {
    const auto res = run_cli("space-info --space circle:100");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["schema"] == "kslab/1");
    CHECK(j.contains("version"));
    CHECK(j.contains("wall_time_ms"));
    CHECK(j["config"]["space"] == "circle:100");
    CHECK(j["result"]["n"] == 100);
    CHECK(j["result"]["total_mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(j["result"]["resolution_h"].get<double>() == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(j["result"]["doubling_Q_hat"].get<double>() == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("energy-sweep reproduces the sine constant") {
    const auto res =
        run_cli("energy-sweep --space circle:4000 --field sine --p 2 --radii 0.2,0.1,0.05,0.025");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    const double target = 2.0 * 3.14159265358979323846 * 3.14159265358979323846 / 3.0;
    CHECK(j["result"]["extrapolated"].get<double>() == doctest::Approx(target).epsilon(0.02));
}

TEST_CASE("invalid radius exits 2 and names the resolution rule") {
    const auto res = run_cli("energy-sweep --space circle:100 --field sine --p 2 --radii 1e-6");
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("resolution rule") != std::string::npos);
    CHECK(res.out.empty());
}

TEST_CASE("unknown flags and missing options exit 2") {
    CHECK(run_cli("energy-sweep --space circle:100").exit_code == 2); // missing --radii
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
}

TEST_CASE("reports are byte-identical for fixed config and seed") {
    const std::string args =
        "energy-sweep --space random:300:9:torus --field random:5 --p 2 --radii 0.4,0.35,0.3";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(strip_wall_time(a.out) == strip_wall_time(b.out));
    CHECK(strip_wall_time(a.out).find("wall_time") == std::string::npos);

    // results are independent of the worker cap (config echo differs)
    const auto c = run_cli(args + " --threads 3");
    REQUIRE(c.exit_code == 0);
    CHECK(nlohmann::json::parse(a.out)["result"] == nlohmann::json::parse(c.out)["result"]);
}

TEST_CASE("solve writes a report and converges on the ramp problem") {
    const auto dir = std::filesystem::temp_directory_path() / "kslab_cli_test";
    std::filesystem::create_directories(dir);
    const auto out = dir / "solve.json";
    const auto res = run_cli("solve --space interval:200 --ends 0,1 --p 2 --r 0.05 --tol 1e-8 "
                             "--max-iters 10000 --out " + out.string());
    REQUIRE(res.exit_code == 0);
    std::ifstream in(out);
    nlohmann::json j;
    in >> j;
    CHECK(j["result"]["converged"] == true);
    CHECK(j["result"]["final_energy"].get<double>() > 0.0);
    // energy history is non-increasing
    const auto hist = j["result"]["energy_history"].get<std::vector<double>>();
    for (std::size_t k = 1; k < hist.size(); ++k) CHECK(hist[k] <= hist[k - 1] * (1 + 1e-12));
}

TEST_CASE("solve accepts a boundary CSV") {
    const auto dir = std::filesystem::temp_directory_path() / "kslab_cli_test";
    std::filesystem::create_directories(dir);
    const auto bfile = dir / "boundary.csv";
    {
        std::ofstream b(bfile);
        b << "id,value\n";
        for (int i = 0; i < 10; ++i) b << i << ",0.0\n";
        for (int i = 190; i < 200; ++i) b << i << ",1.0\n";
    }
    const auto res = run_cli("solve --space interval:200 --boundary " + bfile.string() +
                             " --p 2 --r 0.06");
    CHECK(res.exit_code == 0);
}

TEST_CASE("pair-check holds the weak-form identity") {
    const auto res = run_cli("pair-check --space torus2:20 --p 3 --r 0.16 --count 5 --seed 2");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["result"]["pass"] == true);
    CHECK(j["result"]["max_rel_error"].get<double>() <= 1e-12);
}

TEST_CASE("perimeter and compare-bv emit plot-ready CSV") {
    const auto dir = std::filesystem::temp_directory_path() / "kslab_cli_test";
    std::filesystem::create_directories(dir);
    const auto csv = dir / "perim.csv";
    const auto res = run_cli("perimeter --space circle:1000 --arc 0.25,0.75 "
                             "--radii 0.1,0.05,0.025 --csv " + csv.string());
    REQUIRE(res.exit_code == 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "r,value");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("measure splits arcs and reports additivity inputs") {
    const auto res = run_cli("measure --space circle:800 --field sine --p 2 --r 0.05 "
                             "--cells-arcs 4");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    const auto masses = j["result"]["masses"].get<std::vector<double>>();
    REQUIRE(masses.size() == 4);
    double sum = 0.0;
    for (double m : masses) sum += m;
    CHECK(sum == doctest::Approx(j["result"]["total"].get<double>()).epsilon(1e-12));
}

TEST_CASE("measure accepts cells as JSON lists or per-cell CSV files") {
    const auto dir = std::filesystem::temp_directory_path() / "kslab_cli_test";
    std::filesystem::create_directories(dir);
    const auto cells = dir / "cells.json";
    {
        std::ofstream c(cells);
        c << "[[";
        for (int i = 0; i < 50; ++i) c << (i ? "," : "") << i;
        c << "],[";
        for (int i = 50; i < 100; ++i) c << (i > 50 ? "," : "") << i;
        c << "]]";
    }
    const auto res = run_cli("measure --space circle:100 --field sine --p 2 --r 0.05 --cells " +
                             cells.string());
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["result"]["masses"].size() == 2);

    const auto c1 = dir / "cell1.csv";
    const auto c2 = dir / "cell2.csv";
    {
        std::ofstream a(c1), b(c2);
        a << "id\n";
        for (int i = 0; i < 30; ++i) a << i << "\n";
        b << "id\n";
        for (int i = 30; i < 100; ++i) b << i << "\n";
    }
    const auto res2 = run_cli("measure --space circle:100 --field sine --p 2 --r 0.05 --cell " +
                              c1.string() + " --cell " + c2.string());
    REQUIRE(res2.exit_code == 0);

    // overlapping cells are a configuration error
    const auto res3 = run_cli("measure --space circle:100 --field sine --p 2 --r 0.05 --cell " +
                              c1.string() + " --cell " + c1.string());
    CHECK(res3.exit_code == 2);
}

TEST_CASE("compare-bv writes the table as CSV") {
    const auto dir = std::filesystem::temp_directory_path() / "kslab_cli_test";
    std::filesystem::create_directories(dir);
    const auto csv = dir / "compare.csv";
    const auto res = run_cli("compare-bv --space circle:800 --fields ramp --fields sine "
                             "--radii 0.1,0.05,0.025 --eps 0.1,0.05 --csv " + csv.string());
    REQUIRE(res.exit_code == 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "field,tv_extrapolated,miranda_upper,ratio,degenerate");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("net exports json and partition csv") {
    const auto dir = std::filesystem::temp_directory_path() / "kslab_cli_test";
    std::filesystem::create_directories(dir);
    const auto csv = dir / "partition.csv";
    const auto res = run_cli("net --space circle:500 --eps 0.05 --partition-csv " + csv.string());
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["result"]["covering_ok"] == true);
    CHECK(j["result"]["eps"] == 0.05);
    CHECK(j["result"]["overlap_at_5"].get<int>() <= 11);
    CHECK(std::filesystem::exists(csv));
}
