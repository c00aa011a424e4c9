#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

const std::string kCli = AUGDL_CLI_PATH;

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    out << content;
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n' ? 1 : 0;
    return lines;
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "augdl_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string small_csv(int rows) {
    std::ostringstream csv;
    csv << "a,b,y\n";
    for (int i = 0; i < rows; ++i) {
        csv << i << ',' << (i % 7) << ',' << (2 * i + (i % 3)) << '\n';
    }
    return csv.str();
}

}  // namespace

TEST_CASE("--help exits 0; usage errors exit 2") {
    CHECK(run("--help") == 0);
    CHECK(run("augment --help") == 0);
    CHECK(run("--bogus-flag") == 2);
    CHECK(run("") == 2);                       // missing subcommand
    CHECK(run("augment") == 2);                // missing required --plan
    CHECK(run("augment --plan") == 2);         // flag without value
}

TEST_CASE("malformed plan exits 3 and leaves no outputs") {
    const fs::path dir = temp_dir();
    const fs::path plan = dir / "broken.json";
    write_file(plan, "this is not json");
    const fs::path out = dir / "should_not_exist.csv";
    fs::remove(out);
    CHECK(run("augment --plan " + plan.string() + " --out " + out.string()) == 3);
    CHECK_FALSE(fs::exists(out));

    write_file(plan, R"({"dataset": {"generator": {"kind": "friedman1"}}, "strategies": ["nope"]})");
    CHECK(run("augment --plan " + plan.string() + " --out " + out.string()) == 3);
    CHECK_FALSE(fs::exists(out));
    CHECK(run("benchmark --plan " + dir.string() + "/missing_plan.json") == 3);
}

TEST_CASE("dataset errors exit 4") {
    const fs::path dir = temp_dir();
    const fs::path plan = dir / "missing_csv.json";
    write_file(plan, R"({"dataset": {"csv_path": ")" + (dir / "no_such.csv").string() +
                         R"(", "target": "y"}, "strategies": ["naive_noise"]})");
    CHECK(run("augment --plan " + plan.string() + " --out " + (dir / "x.csv").string()) == 4);

    const fs::path csv = dir / "bad_target.csv";
    write_file(csv, small_csv(10));
    const fs::path plan2 = dir / "bad_target.json";
    write_file(plan2, R"({"dataset": {"csv_path": ")" + csv.string() +
                          R"(", "target": "zz"}, "strategies": ["naive_noise"]})");
    CHECK(run("augment --plan " + plan2.string() + " --out " + (dir / "y.csv").string()) == 4);
}

TEST_CASE("augment: 100-row dataset with volume 10000 emits 10101 lines") {
    const fs::path dir = temp_dir();
    const fs::path csv = dir / "rows100.csv";
    write_file(csv, small_csv(100));
    const fs::path plan = dir / "augment_plan.json";
    write_file(plan, R"({
        "dataset": {"csv_path": ")" + csv.string() + R"(", "target": "y"},
        "strategies": ["naive_noise"],
        "volumes": [10000],
        "etas": [0.05],
        "base_seed": 5
    })");
    const fs::path out = dir / "augmented.csv";
    CHECK(run("augment --plan " + plan.string() + " --out " + out.string()) == 0);
    const std::string text = read_file(out);
    CHECK(line_count(text) == 10101);  // header + 100 original + 10000 synthetic

    // provenance column: empty for original rows, a source index for synthetic rows
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    CHECK(line.ends_with(",provenance"));
    std::getline(lines, line);
    CHECK(line.ends_with(","));
    for (int i = 0; i < 100; ++i) std::getline(lines, line);  // skip to first synthetic row
    CHECK_FALSE(line.ends_with(","));
}

TEST_CASE("benchmark CLI: determinism across reruns and --jobs") {
    const fs::path dir = temp_dir();
    const fs::path plan = dir / "bench_plan.json";
    write_file(plan, R"({
        "dataset": {"generator": {"kind": "linear", "coefficients": [2.0, -1.0], "n_rows": 90,
                                   "noise_sd": 0.2, "seed": 3}},
        "strategies": ["none", "teacher_noise"],
        "volumes": [20],
        "train_sizes": [30],
        "etas": [0.05],
        "trials": 2,
        "base_seed": 11,
        "teacher": {"candidates": ["ridge"], "cv_folds": 3},
        "student": {"architectures": [[6]], "max_epochs": 5, "batch_size": 16, "patience": 3},
        "output_dir": ")" + (dir / "out_a").string() + R"("
    })");

    CHECK(run("benchmark --plan " + plan.string()) == 0);
    CHECK(run("benchmark --plan " + plan.string() + " --out " + (dir / "out_b").string() + " --jobs 1") == 0);
    CHECK(run("benchmark --plan " + plan.string() + " --out " + (dir / "out_c").string() + " --jobs 2") == 0);

    const std::string a = read_file(dir / "out_a" / "trials.csv");
    CHECK(!a.empty());
    CHECK(a == read_file(dir / "out_b" / "trials.csv"));
    CHECK(a == read_file(dir / "out_c" / "trials.csv"));
    CHECK(read_file(dir / "out_a" / "summary.json") == read_file(dir / "out_b" / "summary.json"));

    // seed override changes results
    CHECK(run("benchmark --plan " + plan.string() + " --out " + (dir / "out_d").string() + " --seed 99") == 0);
    CHECK(a != read_file(dir / "out_d" / "trials.csv"));
}

TEST_CASE("curve and distill subcommands run end to end") {
    const fs::path dir = temp_dir();
    const fs::path plan = dir / "modes_plan.json";
    write_file(plan, R"({
        "dataset": {"generator": {"kind": "linear", "coefficients": [1.0, 1.0], "n_rows": 100,
                                   "noise_sd": 0.2, "seed": 4}},
        "strategies": ["teacher_noise"],
        "volumes": [15],
        "train_sizes": [25, 50],
        "etas": [0.05],
        "trials": 2,
        "base_seed": 13,
        "teacher": {"candidates": ["ridge"], "cv_folds": 3},
        "student": {"architectures": [[6]], "max_epochs": 5, "batch_size": 16, "patience": 3},
        "output_dir": ")" + (dir / "modes_out").string() + R"("
    })");
    CHECK(run("curve --plan " + plan.string() + " --out " + (dir / "curve_out").string()) == 0);
    CHECK(fs::exists(dir / "curve_out" / "summary.json"));
    CHECK(run("distill --plan " + plan.string() + " --out " + (dir / "distill_out").string()) == 0);
    const std::string summary = read_file(dir / "distill_out" / "summary.json");
    CHECK(summary.find("distill_only") != std::string::npos);
    CHECK(summary.find("teacher_advantage_pct") != std::string::npos);
}
