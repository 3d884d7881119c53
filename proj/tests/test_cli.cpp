// Exercises the installed command-line surface: exit codes, output
// formats, and byte determinism of generated files and reports.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = FELL_CLI_PATH;
const std::filesystem::path kData = FELL_TEST_DATA_DIR;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const auto out = std::filesystem::temp_directory_path() / "fell_cli_test_out.txt";
    const std::string command = kCli + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    std::ifstream in(out);
    std::ostringstream os;
    os << in.rdbuf();
    result.output = os.str();
    return result;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("validate: clean fixtures exit 0") {
    CHECK(run_cli("validate " + (kData / "p2_groupoid.json").string()).exit_code == 0);
    CHECK(run_cli("validate " + (kData / "p2_bundle.json").string()).exit_code == 0);
}

TEST_CASE("validate: axiom violations exit 1 and are reported") {
    const auto r = run_cli("validate " + (kData / "corrupt_groupoid.json").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("violations") != std::string::npos);
    const auto r2 = run_cli("validate " + (kData / "bad_custom_bundle.json").string());
    CHECK(r2.exit_code == 1);
    CHECK(r2.output.find("positivity") != std::string::npos);
}

TEST_CASE("validate: unreadable or malformed input exits 2") {
    CHECK(run_cli("validate " + (kData / "malformed.json").string()).exit_code == 2);
    CHECK(run_cli("validate /nonexistent/nowhere.json").exit_code == 2);
}

TEST_CASE("norm: the all-ones pair-groupoid section") {
    const auto r = run_cli("norm " + (kData / "p2_bundle.json").string() + " " +
                           (kData / "p2_ones_section.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"reduced_norm\": 2.0") != std::string::npos);
    CHECK(r.output.find("\"sup_norm\": 1.0") != std::string::npos);
}

TEST_CASE("convolve: squaring the all-ones section doubles it") {
    const auto r = run_cli("convolve " + (kData / "p2_bundle.json").string() + " " +
                           (kData / "p2_ones_section.json").string() + " " +
                           (kData / "p2_ones_section.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("2.0") != std::string::npos);
}

TEST_CASE("jcheck: fixtures pass, corrupted bundles are refused") {
    const auto r =
        run_cli("jcheck " + (kData / "p2_bundle.json").string() + " --random 5 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"all_pass\": true") != std::string::npos);

    const auto refused =
        run_cli("jcheck " + (kData / "bad_custom_bundle.json").string() + " --random 5");
    CHECK(refused.exit_code == 1);

    // --random 0 still runs the deterministic fixture checks
    const auto fixtures_only =
        run_cli("jcheck " + (kData / "p2_bundle.json").string() + " --random 0");
    CHECK(fixtures_only.exit_code == 0);
    CHECK(fixtures_only.output.find("fixture") != std::string::npos);
}

TEST_CASE("jcheck reports are byte-identical across runs") {
    const auto tmp = std::filesystem::temp_directory_path();
    const auto out1 = tmp / "fell_jcheck_run1.json";
    const auto out2 = tmp / "fell_jcheck_run2.json";
    const std::string base = "jcheck " + (kData / "p2_bundle.json").string() +
                             " --random 10 --seed 2026 --out ";
    CHECK(run_cli(base + out1.string()).exit_code == 0);
    CHECK(run_cli(base + out2.string()).exit_code == 0);
    const std::string a = slurp(out1);
    CHECK(a == slurp(out2));
    CHECK(!a.empty());
}

TEST_CASE("randgen emits stable bytes matching the golden files") {
    const auto tmp = std::filesystem::temp_directory_path();
    for (const std::string kind : {"trivial", "twist", "crossed"}) {
        const auto out1 = tmp / ("fell_rand_" + kind + "_1.json");
        const auto out2 = tmp / ("fell_rand_" + kind + "_2.json");
        CHECK(run_cli("randgen --kind " + kind + " --seed 0 --out " + out1.string()).exit_code ==
              0);
        CHECK(run_cli("randgen --kind " + kind + " --seed 0 --out " + out2.string()).exit_code ==
              0);
        CHECK(slurp(out1) == slurp(out2));
        const auto golden = kData / ("golden_randgen_" + kind + "_s0.json");
        CHECK(slurp(out1) == slurp(golden));
        // generated instances validate
        CHECK(run_cli("validate " + out1.string()).exit_code == 0);
    }
}

TEST_CASE("zwindow emits the convergence table in both formats") {
    const auto csv = run_cli("zwindow --coeffs -1:1:0 1:1:0 --windows 4 16 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.output.find("N,window_norm") != std::string::npos);
    const auto json = run_cli("zwindow --coeffs 0:1:0 --windows 4");
    CHECK(json.exit_code == 0);
    CHECK(json.output.find("\"all_ok\": true") != std::string::npos);
    const auto bad = run_cli("zwindow --coeffs nonsense");
    CHECK(bad.exit_code == 2);
}
