// End-to-end checks of the command-line tool: spawns the real binary (path
// injected by the build as CBTREE_BIN) and inspects exit codes and output.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

// Runs a shell command, capturing stdout (and stderr when the caller
// redirects it into the pipe).
RunResult run(const std::string& args) {
    const std::string cmd = std::string(CBTREE_BIN) + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), got);
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::string data_sheet() {
    return std::string(CBTREE_DATA_DIR) + "/example_convertible.terms";
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f{path};
    f << content;
    return path;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss{text};
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty())
            lines.push_back(line);
    return lines;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

// Pulls "key=value" off a one-line report.
std::string field(const std::string& line, const std::string& key) {
    const auto at = line.find(key + "=");
    REQUIRE(at != std::string::npos);
    const auto start = at + key.size() + 1;
    const auto end = line.find(' ', start);
    return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

const std::string kPlainSheet =
    "issue = 2009-01-06\nmaturity = 2014-01-05\nface = 100\nrecovery = 0.4\n";

} // namespace

TEST_CASE("price reports a one-line valuation") {
    const RunResult r = run("price --terms " + data_sheet() +
                            " --model constant --r 0.05 --sigma 0.25 --lambda0 0.062 "
                            "--spot 50 --steps 800");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 1);
    CHECK(contains(lines[0], "model=constant"));
    CHECK(contains(lines[0], "value="));
    CHECK(contains(lines[0], "delta="));
    const double value = std::stod(field(lines[0], "value"));
    // A coupon-rich convertible with a 105 put floors comfortably above the
    // defaultable-bond floor and below the forced-conversion ceiling.
    CHECK(value > 80.0);
    CHECK(value < 160.0);
    const double delta = std::stod(field(lines[0], "delta"));
    CHECK(delta > 0.0);
    CHECK(delta < 1.0);
}

TEST_CASE("price notes the degenerate no-default mode") {
    const RunResult with = run("price --terms " + data_sheet() +
                               " --lambda0 0 --spot 50 --steps 50");
    REQUIRE(with.exit_code == 0);
    CHECK(contains(with.output, "note=crr-equivalent"));

    const RunResult without = run("price --terms " + data_sheet() +
                                  " --lambda0 0.05 --spot 50 --steps 50");
    REQUIRE(without.exit_code == 0);
    CHECK_FALSE(contains(without.output, "crr-equivalent"));
}

TEST_CASE("profile writes the documented CSV") {
    const auto out = std::filesystem::temp_directory_path() / "cbtree_profile.csv";
    std::filesystem::remove(out);
    const RunResult r = run("profile --terms " + data_sheet() +
                            " --lambda0 0.062 --sigma 0.25 --spot-grid 10:100:10 --steps 300 "
                            "--out " + out.string());
    REQUIRE(r.exit_code == 0);
    std::ifstream f{out};
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "spot,value,delta,floor_extended,model");
    int rows = 0;
    double prev_value = 0.0;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        ++rows;
        std::istringstream ss{line};
        std::string spot_s, value_s, delta_s, ext_s, model_s;
        std::getline(ss, spot_s, ',');
        std::getline(ss, value_s, ',');
        std::getline(ss, delta_s, ',');
        std::getline(ss, ext_s, ',');
        std::getline(ss, model_s, ',');
        CHECK(ext_s == "false");
        CHECK(model_s == "constant");
        const double value = std::stod(value_s);
        CHECK(value >= prev_value - 1e-9);  // non-decreasing in spot
        prev_value = value;
    }
    CHECK(rows == 10);
}

TEST_CASE("profile marks spots the floor pushed out of reach") {
    const auto sheet = write_temp("cbtree_plain.terms", kPlainSheet);
    const RunResult r = run("profile --terms " + sheet.string() +
                            " --model synthesis --lambda0 0.3 --alpha -1 --s0 50 "
                            "--sigma 0.25 --spot-grid 0:50:11 --steps 50");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 12);  // header + 11 rows
    CHECK(contains(lines[1], ",true,synthesis"));   // spot 0 is extended
    CHECK(contains(lines[11], ",false,synthesis"));  // spot 50 is genuine
    // The spot-0 value is the recovery claim exactly: 0.4 * 100.
    CHECK(contains(lines[1], "0,40,"));
}

TEST_CASE("scalar pricing below the floor fails with its token") {
    const auto sheet = write_temp("cbtree_plain.terms", kPlainSheet);
    const RunResult r = run("price --terms " + sheet.string() +
                            " --model synthesis --lambda0 0.3 --alpha -1 --s0 50 "
                            "--sigma 0.25 --spot 2 --steps 50 2>&1");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "FLOOR_UNREACHABLE"));
}

TEST_CASE("converge reports shrinking errors against the closed form") {
    const auto sheet = write_temp("cbtree_zero.terms",
                                  "issue = 2009-01-06\nmaturity = 2014-01-05\nface = 100\n");
    const RunResult r = run("converge --terms " + sheet.string() +
                            " --lambda0 0 --spot 50 --ladder 25,100,400 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "n_steps,value,abs_error");
    // Discounting is exact at every step count here, so errors are ~0.
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto last_comma = lines[i].rfind(',');
        const double err = std::stod(lines[i].substr(last_comma + 1));
        CHECK(err <= 1e-9);
    }
}

TEST_CASE("converge against the finite-difference reference shrinks too") {
    const RunResult r = run("converge --terms " + data_sheet() +
                            " --lambda0 0.062 --sigma 0.25 --spot 50 "
                            "--ladder 50,200,800 --fd-space 400 --fd-time 400 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 4);
    const auto err_of = [&](size_t i) {
        const auto last_comma = lines[i].rfind(',');
        return std::stod(lines[i].substr(last_comma + 1));
    };
    // Coarse tree far from the reference, fine tree close.
    CHECK(err_of(3) < err_of(1));
    CHECK(err_of(3) < 0.5);
}

TEST_CASE("compare-hull emits both legs and fails fast when degenerate") {
    const RunResult ok = run("compare-hull --terms " + data_sheet() +
                             " --lambda0 0.03 --sigma 0.25 --spot-grid 20:100:5 --steps 400");
    REQUIRE(ok.exit_code == 0);
    const auto lines = lines_of(ok.output);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "spot,value_constant,value_hull,difference");

    const auto out = std::filesystem::temp_directory_path() / "cbtree_hull.csv";
    std::filesystem::remove(out);
    const RunResult bad = run("compare-hull --terms " + data_sheet() +
                              " --lambda0 0.07 --sigma 0.25 --spot-grid 20:100:5 "
                              "--steps 400 --out " + out.string() + " 2>&1");
    CHECK(bad.exit_code == 2);
    CHECK(contains(bad.output, "DEGENERATE_VOL"));
    CHECK_FALSE(std::filesystem::exists(out));  // failed before writing anything
}

TEST_CASE("validate-step speaks both verdicts") {
    const RunResult good = run("validate-step --r 0.05 --sigma 0.2 --eta 1 "
                               "--lambda0 0.02 --dt 0.01");
    REQUIRE(good.exit_code == 0);
    CHECK(contains(good.output, "valid=true"));
    CHECK(contains(good.output, "bound=0.019"));  // 0.0195 up to printing
    CHECK(contains(good.output, "p_down="));

    const RunResult bad = run("validate-step --r 0.05 --sigma 0.2 --eta 1 "
                              "--lambda0 3 --dt 0.01 2>&1");
    CHECK(bad.exit_code == 2);
    CHECK(contains(bad.output, "valid=false"));
    CHECK(contains(bad.output, "STEP_TOO_COARSE"));

    const RunResult syn = run("validate-step --model synthesis --r 0.05 --sigma 0.25 "
                              "--lambda0 0.062 --alpha -0.5 --s0 50 --dt 0.02");
    REQUIRE(syn.exit_code == 0);
    CHECK(contains(syn.output, "floor=0.0651"));
}

TEST_CASE("configuration problems exit with code one") {
    // Missing term sheet file.
    const RunResult missing = run("price --terms /nonexistent/x.terms --spot 50 2>&1");
    CHECK(missing.exit_code == 1);
    CHECK(contains(missing.output, "/nonexistent/x.terms"));

    // Unparseable sheet: the line number comes back.
    const auto broken = write_temp("cbtree_broken.terms",
                                   "issue = 2009-01-06\nmaturity = 2010-01-06\nface = ten\n");
    const RunResult parse = run("price --terms " + broken.string() + " --spot 50 2>&1");
    CHECK(parse.exit_code == 1);
    CHECK(contains(parse.output, "line 3"));

    // Synthesis without its shape parameters.
    const RunResult shapeless = run("price --terms " + data_sheet() +
                                    " --model synthesis --lambda0 0.062 --spot 50 2>&1");
    CHECK(shapeless.exit_code == 1);
    CHECK(contains(shapeless.output, "--alpha"));

    // Hull insists on total default.
    const RunResult partial = run("price --terms " + data_sheet() +
                                  " --model hull --lambda0 0.03 --eta 0.5 --spot 50 2>&1");
    CHECK(partial.exit_code == 1);

    // Unknown flag.
    const RunResult unknown = run("price --terms " + data_sheet() +
                                  " --spot 50 --frobnicate 2>&1");
    CHECK(unknown.exit_code == 1);

    // Bad grid syntax.
    const RunResult grid = run("profile --terms " + data_sheet() +
                               " --spot-grid nope 2>&1");
    CHECK(grid.exit_code == 1);
}

TEST_CASE("help is a success") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("price --help").exit_code == 0);
}

TEST_CASE("a coarse step count fails with the step token") {
    const RunResult r = run("price --terms " + data_sheet() +
                            " --lambda0 0.5 --sigma 0.25 --spot 50 --steps 4 2>&1");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "STEP_TOO_COARSE"));
}
