#include "cli.hpp"
#include "manifest.hpp"

#include "csrkit/data.hpp"
#include "csrkit/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;
using csrkit::cli::run;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "csrkit");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

struct Workdir {
    fs::path root;
    Workdir() : root(fs::temp_directory_path() / "csrkit_cli_unit") {
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~Workdir() { fs::remove_all(root); }
    std::string operator()(const std::string& name) const { return (root / name).string(); }
};

}  // namespace

TEST_CASE("sha256 of known strings") {
    CHECK(csrkit::cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(csrkit::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cli pipeline, determinism and replay") {
    Workdir w;
    auto r = invoke({"generate", "two-gaussians", "--n", "600", "--outlier-prob", "0.1", "--seed", "7", "--out", w("d.csv")});
    REQUIRE(r.code == 0);
    CHECK(csrkit::load_csv(w("d.csv")).size() == 600);
    CHECK(fs::exists(w("d.csv.manifest.json")));

    REQUIRE(invoke({"split", w("d.csv"), "--train", "0.4", "--calib", "0.3", "--test", "0.3", "--seed", "1", "--prefix", w("s")}).code == 0);
    CHECK(csrkit::load_csv(w("s_train.csv")).size() == 240);

    const std::vector<std::string> train{"train", w("s_train.csv"), "--kind", "svm", "--kernel", "gaussian",
                                         "--gamma", "1.0", "--C", "1.0", "--seed", "7", "--out", w("m.json")};
    REQUIRE(invoke(train).code == 0);
    const auto first = csrkit::read_text_file(w("m.json"));
    const auto first_manifest = csrkit::read_text_file(w("m.json.manifest.json"));
    REQUIRE(invoke(train).code == 0);
    CHECK(csrkit::read_text_file(w("m.json")) == first);
    CHECK(csrkit::read_text_file(w("m.json.manifest.json")) == first_manifest);

    REQUIRE(invoke({"calibrate", w("s_calib.csv"), "--model", w("m.json"), "--out", w("p.json")}).code == 0);
    REQUIRE(invoke({"evaluate", w("s_test.csv"), "--model", w("m.json"), "--profile", w("p.json"), "--epsilon", "0.1",
                    "--format", "json", "--out", w("e.json")}).code == 0);
    CHECK(nlohmann::json::parse(csrkit::read_text_file(w("e.json"))).size() == 1);

    REQUIRE(invoke({"sweep", w("s_test.csv"), "--model", w("m.json"), "--profile", w("p.json"), "--eps-grid",
                    "0.05,0.1,0.2", "--out", w("sw.csv")}).code == 0);
    const auto sweep_csv = csrkit::read_text_file(w("sw.csv"));
    CHECK(sweep_csv.substr(0, sweep_csv.find('\n')) == csrkit::kReportCsvHeader);
    CHECK(std::count(sweep_csv.begin(), sweep_csv.end(), '\n') == 4);

    REQUIRE(invoke({"region", "--model", w("m.json"), "--profile", w("p.json"), "--epsilon", "0.2", "--bounds",
                    "-2,2,-2,2", "--resolution", "5", "--out", w("g.csv")}).code == 0);
    const auto grid = csrkit::read_text_file(w("g.csv"));
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 26);

    const auto replay = invoke({"replay", w("m.json.manifest.json"), "--out-dir", w("again")});
    CHECK(replay.code == 0);
    CHECK(csrkit::read_text_file(w("again/m.json")) == first);
    CHECK(invoke({"replay", w("s.manifest.json")}).code == 0);

    csrkit::write_text_file_atomic(w("s_train.csv"), "f1,label\n1,1\n");
    const auto stale = invoke({"replay", w("m.json.manifest.json")});
    CHECK(stale.code == 2);
    CHECK(stale.err.find("input changed") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    Workdir w;
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"generate", "two-gaussians", "--n", "10", "--out", w("x.csv")}).code == 2);

    const auto bad_fraction = invoke({"generate", "two-gaussians", "--n", "10", "--outlier-prob", "1.5", "--seed", "1",
                                      "--out", w("x.csv")});
    CHECK(bad_fraction.code == 2);
    CHECK(bad_fraction.err.find("--outlier-prob") != std::string::npos);
    CHECK(invoke({"generate", "dns-surrogate", "--windows", "20", "--tunnel-fraction", "0", "--seed", "1"}).code == 2);

    csrkit::write_text_file_atomic(w("neg.csv"), "f1,f2,label\n0,0,-1\n1,1,-1\n");
    CHECK(invoke({"train", w("neg.csv"), "--kind", "svdd", "--seed", "1", "--out", w("m.json")}).code == 2);
    const auto split = invoke({"split", w("neg.csv"), "--train", "0.5", "--calib", "0.5", "--test", "0.5", "--seed", "1"});
    CHECK(split.code == 2);
    CHECK(split.err.find("--train + --calib + --test") != std::string::npos);

    REQUIRE(invoke({"generate", "two-gaussians", "--n", "200", "--seed", "3", "--out", w("d.csv")}).code == 0);
    CHECK(invoke({"train", w("d.csv"), "--kind", "svm", "--kernel", "gaussian", "--gamma", "0.5", "--seed", "1",
                  "--max-iterations", "2", "--out", w("m.json")}).code == 3);
    CHECK(invoke({"train", w("d.csv"), "--kernel", "sigmoid", "--seed", "1", "--out", w("m.json")}).code == 2);
    CHECK(invoke({"train", w("d.csv"), "--kernel", "gaussian", "--gamma", "1", "--gamma-heuristic", "median",
                  "--seed", "1", "--out", w("m.json")}).code == 2);
    REQUIRE(invoke({"train", w("d.csv"), "--kernel", "gaussian", "--gamma-heuristic", "median", "--seed", "1", "--out",
                    w("m.json")}).code == 0);

    csrkit::write_text_file_atomic(w("three.csv"), "f1,f2,f3,label\n0,0,0,1\n1,1,1,-1\n2,2,1,-1\n");
    REQUIRE(invoke({"train", w("three.csv"), "--seed", "1", "--out", w("m3.json")}).code == 0);
    REQUIRE(invoke({"calibrate", w("three.csv"), "--model", w("m3.json"), "--out", w("p3.json")}).code == 0);
    CHECK(invoke({"region", "--model", w("m3.json"), "--profile", w("p3.json"), "--epsilon", "0.5", "--bounds",
                  "-1,1,-1,1", "--resolution", "4", "--out", w("g.csv")}).code == 2);
    CHECK(invoke({"calibrate", w("missing.csv"), "--model", w("m3.json")}).code == 2);
    CHECK(invoke({"replay", w("missing.json")}).code == 2);
}
