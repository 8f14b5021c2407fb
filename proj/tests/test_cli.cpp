#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("QVE_CLI");
    REQUIRE_MESSAGE(p != nullptr, "QVE_CLI must point at the qve binary");
    return p;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string temp_file(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("solve computes the scalar solution and exits 0") {
    const RunResult r = run("solve --generate scalar,1,0.25,0 --solver newton");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["status"] == "converged");
    CHECK(std::abs(doc["solution"][0].get<double>() - 1.0 / 3.0) < 1e-10);
    CHECK(doc["minimality"] == "nonsingular_M");
}

TEST_CASE("perron on a critical problem reports e with a singular certificate") {
    const RunResult r = run("solve --generate scalar,1,0.5,0 --solver perron");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["solution"][0].get<double>() == 1.0);
    CHECK(doc["minimality"] == "singular_M");
}

TEST_CASE("exit codes follow the contract") {
    // malformed input file -> 1
    const std::string bad = temp_file("qve_cli_bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK(run("solve --input " + bad + " --solver newton").exit_code == 1);
    std::remove(bad.c_str());

    // unknown solver / missing problem -> 1
    CHECK(run("solve --generate scalar,1,0.25,0 --solver nope").exit_code == 1);
    CHECK(run("solve --solver newton").exit_code == 1);

    // starved iteration budget -> 2
    CHECK(run("solve --generate scalar,1,0.25,0 --solver depth --max-iters 3").exit_code == 2);

    // perron on reducible R -> structure error -> 1
    CHECK(run("solve --generate block_triangular,6,0.7,0 --solver perron").exit_code == 1);

    // bench without solvers -> 1
    CHECK(run("bench --n 4 --seeds 0 --lambda-grid 0.5").exit_code == 1);
}

TEST_CASE("bench emits the fixed CSV header and one row per cell") {
    const RunResult r =
        run("bench --n 5 --seeds 0,1 --lambda-grid 0.5,1.5 --solvers newton,auto");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "solver,variant,lambda_frac,n,seed,iterations,residual,wall_time,status");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2 * 2 * 2);  // solvers x fracs x seeds
    CHECK(r.out.find("converged") != std::string::npos);
}

TEST_CASE("analyze prints structure and certifies solutions") {
    const RunResult r = run("analyze --generate scalar,1,0.25,0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("supercritical, rho=1.5, irreducible") == 0);

    const RunResult blocks = run("analyze --generate block_triangular,6,0.7,0");
    CHECK(blocks.out.find("reducible") != std::string::npos);
    CHECK(blocks.out.find("components: 2") != std::string::npos);

    // x = e is not minimal on a supercritical problem
    const std::string sol = temp_file("qve_cli_sol.json");
    std::ofstream(sol) << "[1.0]";
    const RunResult cert =
        run("analyze --generate scalar,1,0.25,0 --solution " + sol);
    CHECK(cert.exit_code == 0);
    CHECK(cert.out.find("minimality: not_M") != std::string::npos);
    std::remove(sol.c_str());
}

TEST_CASE("generate writes a loadable problem and solve accepts it") {
    const std::string prob = temp_file("qve_cli_prob.json");
    CHECK(run("generate --family random_mbt --n 4 --lambda 0.5 --seed 7 --output " + prob)
              .exit_code == 0);
    const RunResult r = run("solve --input " + prob + " --solver auto");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["status"] == "converged");
    std::remove(prob.c_str());
}

TEST_CASE("solve writes report files that analyze accepts as solutions") {
    const std::string rep = temp_file("qve_cli_rep.json");
    CHECK(run("solve --generate random_mbt,6,1.0,2 --solver perron-newton --output " + rep)
              .exit_code == 0);
    const RunResult cert = run("analyze --generate random_mbt,6,1.0,2 --solution " + rep);
    CHECK(cert.exit_code == 0);
    CHECK(cert.out.find("minimality: nonsingular_M") != std::string::npos);
    std::remove(rep.c_str());
}

TEST_CASE("renormalize rescues off-normalization inputs") {
    const std::string prob = temp_file("qve_cli_off.json");
    std::ofstream(prob) << R"({"n": 1, "a": [0.3], "b": [[0, 0, 0, 0.75]]})";
    CHECK(run("solve --input " + prob + " --solver newton").exit_code == 1);
    const RunResult r = run("solve --input " + prob + " --renormalize --solver newton");
    CHECK(r.exit_code == 0);
    std::remove(prob.c_str());
}

TEST_CASE("validate passes on a trivial immediate-death problem") {
    const std::string prob = temp_file("qve_cli_dead.json");
    std::ofstream(prob) << R"({"n": 2, "a": [1.0, 1.0], "b": []})";
    const RunResult r = run("validate --input " + prob + " --trials 2000 --max-population 100");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("fail") == std::string::npos);
    std::remove(prob.c_str());
}
