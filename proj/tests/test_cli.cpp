#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string tmp = "cli_test_stdout.txt";
    const std::string cmd = std::string(ENTROSTAT_BIN) + " " + args + " > " + tmp + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream f(tmp);
    std::stringstream ss;
    ss << f.rdbuf();
    std::remove(tmp.c_str());
    return {WEXITSTATUS(status), ss.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("phase diagram: u decreases from 2 toward 1 on the stable branch") {
    const auto r = run_cli("phase-diagram --beta-min 0 --beta-max 10 --points 21 --branch stable");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    REQUIRE(rows.size() >= 21);  // header + data
    // columns: beta, branch, m, delta, mu, u, s, beta_f, alpha, branch_id
    double prev = 1e9;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double u = std::stod(rows[i][5]);
        CHECK(u <= prev + 1e-12);
        prev = u;
    }
    CHECK(std::stod(rows[1][5]) == doctest::Approx(2.0));
    CHECK(prev > 1.0);
    CHECK(prev < 1.1);
}

TEST_CASE("phase diagram: metastable branch ids switch at the printed boundaries") {
    const auto r =
        run_cli("phase-diagram --beta-min -5 --beta-max -0.01 --points 400 --branch metastable");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    bool meta = false, upper = false, lower = false, arc = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::string& id = rows[i][9];
        if (id == "meta_wishart") meta = true;
        if (id == "asym_arcsine_upper") upper = true;
        if (id == "asym_arcsine_lower") lower = true;
        if (id == "arcsine") arc = true;
    }
    CHECK(meta);
    CHECK(upper);
    CHECK(lower);
    CHECK(arc);
}

TEST_CASE("phase diagram: stable branch switches to the alpha=2 phases below zero") {
    const auto r =
        run_cli("phase-diagram --beta-min -4 --beta-max -0.5 --points 8 --branch stable");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    bool typical = false, separable = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][9] == "wishart") {
            typical = true;
            CHECK(std::stod(rows[i][5]) == doctest::Approx(0.0));   // u
            CHECK(std::stod(rows[i][6]) == doctest::Approx(-0.5));  // s
            CHECK(rows[i][8] == "2");                               // alpha
        }
        if (rows[i][9] == "separable") {
            separable = true;
            CHECK(std::stod(rows[i][4]) > 0.5);  // detached eigenvalue
        }
    }
    CHECK(typical);
    CHECK(separable);
}

TEST_CASE("phase diagram: both branches coexist at beta = -1") {
    const auto r =
        run_cli("phase-diagram --beta-min -1 --beta-max -0.9999 --points 2 --branch both");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    REQUIRE(rows.size() >= 3);
    CHECK(rows[1][1] != rows[2][1]);  // stable vs metastable rows
    CHECK(rows[1][5] != rows[2][5]);  // distinct u
}

TEST_CASE("density command supports and flags divergences") {
    const auto r = run_cli("density --beta 2 --branch stable --grid-points 51");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    CHECK(std::stod(rows[1][0]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::stod(rows.back()[0]) == doctest::Approx(2.0));
    const auto bad = run_cli("density --branch stable");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("moments command emits exact rationals") {
    const auto r = run_cli("moments --mode pure-exact --n 4 --m 4");
    REQUIRE(r.exit_code == 0);
    CHECK(r.stdout_text.find("0.47058823529411764") != std::string::npos);  // 8/17
    const auto mixed = run_cli("moments --mode mixed-exact --n 3 --m 3 --x 0.1111111111111111");
    REQUIRE(mixed.exit_code == 0);
    CHECK(mixed.stdout_text.find("0.3333333333333") != std::string::npos);
    const auto missing = run_cli("moments --mode mixed-exact --n 3 --m 3");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("sample command writes reproducible output with metadata header") {
    const auto a = run_cli("sample --kind simplex --l 8 --samples 200 --seed 99");
    const auto b = run_cli("sample --kind simplex --l 8 --samples 200 --seed 99");
    REQUIRE(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(a.stdout_text.rfind("# {", 0) == 0);  // metadata first line
    CHECK(a.stdout_text.find("\"seed\":99") != std::string::npos);
    const auto c = run_cli("sample --kind simplex --l 8 --samples 200 --seed 100");
    CHECK(c.stdout_text != a.stdout_text);
}

TEST_CASE("minimize command reports a single basin at positive beta") {
    const auto r = run_cli("minimize --n 8 --beta 1");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    REQUIRE(rows.size() == 3);
    const double lt = std::stod(rows[1][3]);
    const double ls = std::stod(rows[2][3]);
    CHECK(lt == doctest::Approx(ls).epsilon(1e-6));
}

TEST_CASE("verify quick suites pass") {
    CHECK(run_cli("verify --suite analytic --budget quick").exit_code == 0);
    CHECK(run_cli("verify --suite moments --budget quick").exit_code == 0);
    const auto bad = run_cli("verify --suite nonsense");
    CHECK(bad.exit_code != 0);
}
