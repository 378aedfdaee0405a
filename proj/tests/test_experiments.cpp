#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "oscpert/experiments.hpp"

using namespace oscpert;
using namespace oscpert::experiments;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::stringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        out.push_back(cells);
    }
    return out;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "oscpert_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("experiments") {
    TEST_CASE("benchmark names") {
        CHECK(parse_benchmark("m") == BenchmarkId::num_ex_m);
        CHECK(parse_benchmark("num_ex_s") == BenchmarkId::num_ex_s);
        CHECK(parse_benchmark("l") == BenchmarkId::num_ex_l);
        CHECK_THROWS_AS(parse_benchmark("xl"), UnknownModel);
        CHECK_THROWS_AS(parse_benchmark(""), UnknownModel);
        for (auto id : kAllBenchmarks) CHECK(parse_benchmark(benchmark_name(id)) == id);
    }

    TEST_CASE("registry models have a singular frequency matrix at full coupling") {
        for (auto id : kAllBenchmarks) {
            const auto m = registry(id);
            CHECK(m.epsilon == 1.0);
            CHECK(std::abs(determinant(three_mode::omega_matrix(m))) < 1e-12);
        }
        CHECK(registry(BenchmarkId::num_ex_s).d[2] == 1.0 / 40.0);
    }

    TEST_CASE("sweep CSV layout") {
        SweepConfig cfg;
        cfg.model = BenchmarkId::num_ex_s;
        const auto rows = parse_csv(sweep_text(cfg));
        REQUIRE(rows.size() == 1 + 3 * 101);
        std::string header;
        for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
        CHECK(header == kSweepCsvHeader);
        for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r].size() == 12);
        // The first grid point is eps = 0: estimates are exact.
        for (std::size_t r = 1; r <= 3; ++r) {
            CHECK(rows[r][0] == "0");
            for (std::size_t c = 7; c <= 9; ++c) CHECK(std::stod(rows[r][c]) == 0.0);
            CHECK(rows[r][10] == "true");
            CHECK(rows[r][11] == "ok");
        }
        CHECK(rows.back()[0] == "1");
    }

    TEST_CASE("sweep output is deterministic and uses 17 significant digits") {
        SweepConfig cfg;
        cfg.model = BenchmarkId::num_ex_m;
        cfg.steps = 7;
        const std::string a = sweep_text(cfg);
        CHECK(a == sweep_text(cfg));
        const auto rows = parse_csv(a);
        const double x = std::stod(rows[4][2]);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        CHECK(rows[4][2] == buf);
    }

    TEST_CASE("unrequested levels stay empty") {
        SweepConfig cfg;
        cfg.model = BenchmarkId::num_ex_m;
        cfg.steps = 3;
        cfg.levels = {eigenfreq::EstimateLevel::app1};
        const auto rows = parse_csv(sweep_text(cfg));
        for (std::size_t r = 1; r < rows.size(); ++r) {
            CHECK(rows[r][4].empty());
            CHECK_FALSE(rows[r][5].empty());
            CHECK(rows[r][6].empty());
        }
    }

    TEST_CASE("non-real modes are marked") {
        SweepConfig cfg;
        cfg.model = BenchmarkId::num_ex_l;
        cfg.eps_start = 0.9;
        cfg.steps = 2;
        const auto rows = parse_csv(sweep_text(cfg));
        CHECK(rows[1][10] == "false");
        CHECK(rows[1][11] == "nonreal");
        CHECK(rows[1][7].empty());
        CHECK(rows[3][11] == "ok");
    }

    TEST_CASE("sweep JSON carries the coupling ratios") {
        SweepConfig cfg;
        cfg.model = BenchmarkId::num_ex_m;
        cfg.format = Format::json;
        cfg.eps_start = 0.5;
        cfg.steps = 2;
        const auto j = nlohmann::json::parse(sweep_text(cfg));
        REQUIRE(j["rows"].size() == 2);
        const auto& last = j["rows"][1];
        CHECK(last["epsilon"].get<double>() == 1.0);
        CHECK(last["xyz"]["absX"].get<double>() == doctest::Approx(1.148).epsilon(5e-4));
        CHECK(last["modes"].size() == 3);
        CHECK(last["modes"][0]["status"] == "ok");
    }

    TEST_CASE("sweep from a model file") {
        const auto path = scratch("model.json");
        write_file(path.string(), three_mode::model_to_json(registry(BenchmarkId::num_ex_s)));
        SweepConfig by_file;
        by_file.model = path.string();
        by_file.steps = 5;
        SweepConfig by_id = by_file;
        by_id.model = BenchmarkId::num_ex_s;
        CHECK(sweep_text(by_file) == sweep_text(by_id));
        const auto out = scratch("sweep.csv");
        by_file.output = out.string();
        sweep(by_file);
        CHECK(read_file(out.string()) == sweep_text(by_id));
    }

    TEST_CASE("sweep configuration errors") {
        SweepConfig cfg;
        cfg.model = BenchmarkId::num_ex_s;
        cfg.eps_start = 0.5;
        cfg.eps_end = 0.5;
        CHECK_THROWS_AS(sweep_text(cfg), InvalidArgument);
        cfg.eps_start = 0.0;
        cfg.eps_end = 1.5;
        CHECK_THROWS_AS(sweep_text(cfg), InvalidArgument);
        cfg.eps_end = 1.0;
        cfg.steps = 1;
        CHECK_THROWS_AS(sweep_text(cfg), InvalidArgument);
        cfg.steps = 3;
        CHECK_THROWS_AS(sweep(cfg), IoError);
        cfg.output = "/nonexistent-dir/out.csv";
        CHECK_THROWS_AS(sweep(cfg), IoError);
        cfg.model = std::string("/nonexistent-dir/model.json");
        CHECK_THROWS_AS(sweep_text(cfg), IoError);
    }

    TEST_CASE("tolerance from the environment") {
        unsetenv("OSC_PERT_TOL");
        CHECK(verify_tolerance_from_env() == kDefaultVerifyTol);
        setenv("OSC_PERT_TOL", "1e-5", 1);
        CHECK(verify_tolerance_from_env() == 1e-5);
        setenv("OSC_PERT_TOL", "abc", 1);
        CHECK_THROWS_AS(verify_tolerance_from_env(), InvalidArgument);
        setenv("OSC_PERT_TOL", "-1", 1);
        CHECK_THROWS_AS(verify_tolerance_from_env(), InvalidArgument);
        unsetenv("OSC_PERT_TOL");
    }

    TEST_CASE("quick verification passes on every benchmark") {
        for (auto id : kAllBenchmarks) {
            const auto rep = verify(id, Depth::quick);
            CHECK(rep.passed());
            for (const auto& c : rep.checks) {
                INFO(c.name << ": " << c.detail);
                CHECK(c.passed);
            }
        }
    }

    TEST_CASE("an impossible tolerance fails verification") {
        const auto rep = verify(BenchmarkId::num_ex_s, Depth::quick, 1e-30);
        CHECK_FALSE(rep.passed());
        CHECK_THROWS_AS(verify(BenchmarkId::num_ex_s, Depth::quick, 0.0), InvalidArgument);
    }

    TEST_CASE("decompose command on the worked example") {
        const auto g = scratch("graph.json");
        const auto li = scratch("li.json");
        write_file(g.string(), R"({"n":3,"edges":[[0,1,2],[0,2,1],[1,0,3],[1,2,3],[2,0,4],[2,1,2]]})");
        write_file(li.string(), "[[1,-1,0],[0,1,-1],[-1,0,1]]");
        const auto j = nlohmann::json::parse(decompose_cmd(g.string(), li.string()));
        CHECK(j["L0"] == nlohmann::json::parse("[[2,-1,-1],[-3,5,-2],[-3,-2,5]]"));
        const auto pm = nlohmann::json::parse(decompose_cmd(g.string(), std::nullopt));
        CHECK(pm["L0"] == nlohmann::json::parse("[[3,-2,-1],[-2,4,-2],[-1,-2,3]]"));
        write_file(li.string(), "[[0,0,0],[0,0,0],[0,0,0]]");
        CHECK_THROWS_AS(decompose_cmd(g.string(), li.string()), InvalidDecomposition);
        CHECK_THROWS_AS(decompose_cmd("/nonexistent-dir/g.json", std::nullopt), IoError);
    }
}
