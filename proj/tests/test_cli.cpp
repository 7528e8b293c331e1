#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace {

struct cli_result {
    int exit_code = -1;
    std::string output;  // stdout only
};

cli_result run_cli(const std::string& args) {
    const std::string cmd = std::string(OISL_CLI_PATH) + " " + args + " 2>/dev/null";
    std::FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    cli_result result;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        result.output.append(buf, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string temp_path(const std::string& tag) {
    return (std::filesystem::temp_directory_path() /
            ("oisl_cli_test_" + tag + "_" + std::to_string(::getpid())))
        .string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("help exits cleanly", "[cli]") {
    REQUIRE(run_cli("--help").exit_code == 0);
    REQUIRE(run_cli("channel --help").exit_code == 0);
}

TEST_CASE("missing or malformed arguments are configuration errors", "[cli]") {
    REQUIRE(run_cli("").exit_code == 2);
    REQUIRE(run_cli("frobnicate").exit_code == 2);
    REQUIRE(run_cli("rate --sigma-mode bogus").exit_code == 2);
}

TEST_CASE("channel sweep emits well-formed CSV", "[cli]") {
    const auto r = run_cli("channel --f-points 5");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 6);  // header + 5 rows
    REQUIRE(lines[0] ==
            "f_THz,z_m,sigma_s_m,mean_h_pe_analytic,capture_probability");
    const std::regex number(R"(-?\d\.\d{8}e[+-]\d{2,3})");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = fields_of(lines[i]);
        REQUIRE(fields.size() == 5);
        for (const auto& f : fields) REQUIRE(std::regex_match(f, number));
    }
}

TEST_CASE("degenerate frequency window produces a single row", "[cli]") {
    const auto r = run_cli("channel --f-min 200 --f-max 200");
    REQUIRE(r.exit_code == 0);
    REQUIRE(lines_of(r.output).size() == 2);
}

TEST_CASE("channel analytic mean increases along the frequency sweep", "[cli]") {
    const auto r = run_cli("channel");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 72);  // header + 71 default grid points
    double prev = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double mean = std::stod(fields_of(lines[i])[3]);
        REQUIRE(mean > prev);
        prev = mean;
    }
}

TEST_CASE("channel Monte Carlo column tracks the closed form", "[cli]") {
    const auto r = run_cli("channel --f-points 3 --mc 200000 --seed 11");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines[0] ==
            "f_THz,z_m,sigma_s_m,mean_h_pe_analytic,mean_h_pe_montecarlo,"
            "capture_probability");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = fields_of(lines[i]);
        REQUIRE(fields.size() == 6);
        const double analytic = std::stod(fields[3]);
        const double mc = std::stod(fields[4]);
        REQUIRE(std::abs(mc - analytic) / analytic < 0.01);
    }
}

TEST_CASE("rate sweep emits both evaluations and an outage flag", "[cli]") {
    const auto r = run_cli("rate --f-points 5");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines[0] ==
            "f_THz,delta_m,sigma_s_m,rate_analytic_Gbit_s,rate_quadrature_Gbit_s,"
            "outage");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = fields_of(lines[i]);
        REQUIRE(fields.size() == 6);
        const double analytic = std::stod(fields[3]);
        const double quadrature = std::stod(fields[4]);
        REQUIRE(std::abs(analytic - quadrature) / quadrature < 1e-6);
        REQUIRE(fields[5] == "0");
    }
}

TEST_CASE("rate sweep is unimodal under the default exponential model", "[cli]") {
    const auto r = run_cli("rate");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 72);
    std::vector<double> rates;
    for (std::size_t i = 1; i < lines.size(); ++i)
        rates.push_back(std::stod(fields_of(lines[i])[3]));
    int sign_changes = 0;
    int prev_sign = 0;
    for (std::size_t i = 1; i < rates.size(); ++i) {
        const double d = rates[i] - rates[i - 1];
        const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (s != 0 && prev_sign != 0 && s != prev_sign) ++sign_changes;
        if (s != 0) prev_sign = s;
    }
    REQUIRE(sign_changes == 1);
}

TEST_CASE("forcing the threshold above the peak reports outage", "[cli]") {
    const auto r = run_cli("rate --h-th 1.0 --f-min 200 --f-max 200");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 2);
    const auto fields = fields_of(lines[1]);
    REQUIRE(std::stod(fields[3]) == 0.0);
    REQUIRE(std::stod(fields[4]) == 0.0);
    REQUIRE(fields[5] == "1");
}

TEST_CASE("plan emits both modes and a summary", "[cli]") {
    const auto r = run_cli("plan --N-max 3 --T-th 1e9");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines[0] == "mode,N,delta_m,f_THz_used,rate_Gbit_s,total_latency_s");
    // header + 3 fixed rows + 3 optimized rows + 2 summary lines
    REQUIRE(lines.size() == 9);
    for (int i = 1; i <= 3; ++i) REQUIRE(fields_of(lines[static_cast<std::size_t>(i)])[0] == "fixed");
    for (int i = 4; i <= 6; ++i) REQUIRE(fields_of(lines[static_cast<std::size_t>(i)])[0] == "optimized");
    REQUIRE(lines[7].rfind("# min_satellites: feasible=1 N=1 ", 0) == 0);
    REQUIRE(lines[8].rfind("# joint_plan: feasible=1 N=1 ", 0) == 0);

    // Optimizing the carrier can only improve on holding it fixed.
    for (int N = 1; N <= 3; ++N) {
        const double fixed =
            std::stod(fields_of(lines[static_cast<std::size_t>(N)])[5]);
        const double optimized =
            std::stod(fields_of(lines[static_cast<std::size_t>(N + 3)])[5]);
        REQUIRE(optimized <= fixed * (1.0 + 1e-9));
    }
}

TEST_CASE("config file overrides defaults and flags override the file", "[cli]") {
    const std::string path = temp_path("config") + ".json";
    {
        std::ofstream out(path);
        out << "{\"z\": 2e6, \"f_points\": 4}\n";
    }
    const auto from_file = run_cli("channel --config " + path);
    REQUIRE(from_file.exit_code == 0);
    const auto file_lines = lines_of(from_file.output);
    REQUIRE(file_lines.size() == 5);  // f_points 4 from the file
    REQUIRE(fields_of(file_lines[1])[1] == "2.00000000e+06");

    const auto flag_wins = run_cli("channel --config " + path + " --z 3e6");
    REQUIRE(flag_wins.exit_code == 0);
    REQUIRE(fields_of(lines_of(flag_wins.output)[1])[1] == "3.00000000e+06");

    std::filesystem::remove(path);
}

TEST_CASE("unknown config keys are rejected", "[cli]") {
    const std::string path = temp_path("badkey") + ".json";
    {
        std::ofstream out(path);
        out << "{\"zz\": 1}\n";
    }
    REQUIRE(run_cli("channel --config " + path).exit_code == 2);
    std::filesystem::remove(path);
}

TEST_CASE("malformed config JSON is rejected", "[cli]") {
    const std::string path = temp_path("badjson") + ".json";
    {
        std::ofstream out(path);
        out << "{\"z\": \n";
    }
    REQUIRE(run_cli("channel --config " + path).exit_code == 2);
    std::filesystem::remove(path);
}

TEST_CASE("unwritable output path is an I/O failure", "[cli]") {
    REQUIRE(run_cli("channel --f-points 2 --out /nonexistent_dir_oisl/x.csv")
                .exit_code == 4);
}

TEST_CASE("output lands in the requested file", "[cli]") {
    const std::string path = temp_path("out") + ".csv";
    const auto r = run_cli("channel --f-points 3 --out " + path);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.empty());  // CSV went to the file
    const auto body = slurp(path);
    REQUIRE(lines_of(body).size() == 4);
    std::filesystem::remove(path);
}

TEST_CASE("identical invocations produce identical bytes", "[cli]") {
    const std::string args = "rate --f-points 7 --mc 100000 --seed 5";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.output == b.output);

    const std::string plan_args = "plan --N-max 4";
    const auto p1 = run_cli(plan_args);
    const auto p2 = run_cli(plan_args);
    REQUIRE(p1.exit_code == 0);
    REQUIRE(p1.output == p2.output);
}

TEST_CASE("validation suite passes clean and is deterministic", "[cli]") {
    const std::string args = "validate --seed 7 --mc 100000";
    const auto a = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.output.find("FAIL") == std::string::npos);
    const auto lines = lines_of(a.output);
    REQUIRE(lines.back() == "validate: 15/15 checks passed");

    const auto b = run_cli(args);
    REQUIRE(a.output == b.output);
}

TEST_CASE("validation suite catches an injected fault", "[cli]") {
    const auto r = run_cli("validate --seed 7 --mc 100000 --perturb 1e-3");
    REQUIRE(r.exit_code == 1);
    REQUIRE(r.output.find("FAIL") != std::string::npos);
}
