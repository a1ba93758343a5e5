#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cli/app.hpp"
#include "cli/bench.hpp"
#include "strictmatch/pgm.hpp"
#include "strictmatch/scenario.hpp"
#include "test_support.hpp"

using namespace strictmatch;
using namespace strictmatch::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "strictmatch_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("match of the binary rows prints peak 5") {
    const fs::path dir = scratch("rows");
    write_file(dir / "t.pgm", write_pgm(testing::binary_row("0101110110"), PgmFormat::ascii));
    write_file(dir / "s.pgm", write_pgm(testing::binary_row("1010101100"), PgmFormat::ascii));
    const Run r = invoke({"match", "--template", (dir / "t.pgm").string(), "--signal", (dir / "s.pgm").string(),
                          "--levels", "1", "--fraction", "0.9", "--surface-csv", "--out-dir", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out == "command=match peak=5 lag_x=-1 lag_y=0 template_mass=6 levels=1 mode=linear detections=1\n");
    CHECK(read_file(dir / "out" / "detections.csv") ==
          "id,anchor_x,anchor_y,center_x,center_y,area,mass,peak\n1,-1,0,3.5,0,1,5,5\n");
    CHECK(fs::exists(dir / "out" / "surface.pgm"));
    CHECK(read_file(dir / "out" / "surface.csv").find("-1,0,5\n") != std::string::npos);
}

TEST_CASE("self match: top detection at zero displacement with peak = template mass") {
    const fs::path dir = scratch("self");
    std::mt19937_64 rng(89);
    const GrayImage img = testing::random_image(rng, 12, 9, 255);
    write_file(dir / "img.pgm", write_pgm(img));
    const Run r = invoke({"match", "--template", (dir / "img.pgm").string(), "--signal", (dir / "img.pgm").string(),
                          "--fraction", "1", "--out-dir", (dir / "out").string()});
    CHECK(r.code == 0);
    const std::uint64_t mass = template_mass(img, make_scheme(255, 4));
    CHECK(r.out.find("peak=" + std::to_string(mass) + " lag_x=0 lag_y=0 template_mass=" + std::to_string(mass)) !=
          std::string::npos);
    const std::string csv = read_file(dir / "out" / "detections.csv");
    CHECK(csv.find("\n1,0,0,5.5,4,1,") != std::string::npos);
}

TEST_CASE("scenario then match and correlate disagree on the argmax") {
    const fs::path dir = scratch("scenario");
    const Run scene = invoke({"scenario", "--seed", "0", "--out-dir", dir.string()});
    REQUIRE(scene.code == 0);
    const Scenario expected = make_fig1_scenario(0);
    CHECK(read_pgm_file(dir / "signal.pgm") == expected.signal);
    CHECK(read_file(dir / "truth.csv") == "lag_x,lag_y\n" + std::to_string(expected.true_lag.x) + ",0\n");
    const std::string lag = "lag_x=" + std::to_string(expected.true_lag.x) + " ";
    const std::vector<std::string> pair{"--template", (dir / "template.pgm").string(), "--signal",
                                        (dir / "signal.pgm").string()};
    std::vector<std::string> match_args{"match", "--levels", "16", "--out-dir", (dir / "m").string()};
    match_args.insert(match_args.end(), pair.begin(), pair.end());
    std::vector<std::string> corr_args{"correlate", "--out-dir", (dir / "c").string()};
    corr_args.insert(corr_args.end(), pair.begin(), pair.end());
    const Run m = invoke(match_args);
    const Run c = invoke(corr_args);
    CHECK(m.code == 0);
    CHECK(c.code == 0);
    CHECK(m.out.find(lag) != std::string::npos);
    CHECK(c.out.find(lag) == std::string::npos);
}

TEST_CASE("decompose writes g layers") {
    const fs::path dir = scratch("decompose");
    write_file(dir / "zero.pgm", write_pgm(GrayImage(4, 3, 255)));
    const Run r = invoke({"decompose", "--input", (dir / "zero.pgm").string(), "--levels", "3", "--out-dir",
                          (dir / "out").string()});
    CHECK(r.code == 0);
    for (const char* name : {"layer_01.pgm", "layer_02.pgm", "layer_03.pgm"}) {
        const GrayImage layer = read_pgm_file(dir / "out" / name);
        for (auto v : layer.pixels()) CHECK(v == 0);
    }
    CHECK_FALSE(fs::exists(dir / "out" / "layer_04.pgm"));
    CHECK(fs::exists(dir / "out" / "levels.pgm"));
}

TEST_CASE("correlate with a delta template renders the normalized input") {
    const fs::path dir = scratch("delta");
    const GrayImage signal(4, 2, 255, {0, 10, 20, 40, 5, 0, 40, 30});
    write_file(dir / "s.pgm", write_pgm(signal));
    write_file(dir / "d.pgm", write_pgm(GrayImage(1, 1, 255, {1})));
    const Run r = invoke({"correlate", "--template", (dir / "d.pgm").string(), "--signal", (dir / "s.pgm").string(),
                          "--out-dir", (dir / "out").string()});
    CHECK(r.code == 0);
    const GrayImage panel = read_pgm_file(dir / "out" / "surface.pgm");
    // v * 255 / 40, rounded half up
    CHECK(std::vector<std::uint32_t>(panel.pixels().begin(), panel.pixels().end()) ==
          std::vector<std::uint32_t>{0, 64, 128, 255, 32, 0, 255, 191});
}

TEST_CASE("detect on a hand-written surface PGM") {
    const fs::path dir = scratch("detect");
    write_file(dir / "surface.pgm", "P2\n5 3\n9\n9 0 0 0 4\n0 0 0 8 0\n0 0 0 0 0\n");
    const Run eight = invoke({"detect", "--surface", (dir / "surface.pgm").string(), "--out-dir", (dir / "a").string()});
    const Run four = invoke({"detect", "--surface", (dir / "surface.pgm").string(), "--connectivity", "4",
                             "--out-dir", (dir / "b").string()});
    CHECK(eight.code == 0);
    CHECK(eight.out == "command=detect threshold=4.5 detections=2\n");
    CHECK(four.out == "command=detect threshold=4.5 detections=2\n");
    CHECK(read_file(dir / "a" / "detections.csv") ==
          "id,anchor_x,anchor_y,center_x,center_y,area,mass,peak\n1,0,0,0,0,1,9,9\n2,3,1,3,1,1,8,8\n");
    const Run low = invoke({"detect", "--surface", (dir / "surface.pgm").string(), "--fraction", "0.4",
                            "--out-dir", (dir / "c").string()});
    CHECK(low.out == "command=detect threshold=3.6 detections=2\n");
    const Run low4 = invoke({"detect", "--surface", (dir / "surface.pgm").string(), "--fraction", "0.4",
                             "--connectivity", "4", "--out-dir", (dir / "d").string()});
    CHECK(low4.out == "command=detect threshold=3.6 detections=3\n");
    const Run shifted = invoke({"detect", "--surface", (dir / "surface.pgm").string(), "--origin-x", "2",
                                "--origin-y", "1", "--template-width", "3", "--template-height", "2", "--out-dir",
                                (dir / "e").string()});
    CHECK(shifted.code == 0);
    CHECK(read_file(dir / "e" / "detections.csv") ==
          "id,anchor_x,anchor_y,center_x,center_y,area,mass,peak\n1,-2,-1,-1,-0.5,1,9,9\n2,1,0,2,0.5,1,8,8\n");
    CHECK(invoke({"detect", "--surface", (dir / "surface.pgm").string(), "--origin-x", "9", "--out-dir",
                  (dir / "f").string()})
              .code == kConstraint);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("errors");
    write_file(dir / "bad.pgm", "P7\n");
    write_file(dir / "small.pgm", write_pgm(GrayImage(2, 2, 255)));
    write_file(dir / "big.pgm", write_pgm(GrayImage(4, 4, 255)));
    const auto pair = [&](const char* t, const char* s) {
        return std::vector<std::string>{"match", "--template", (dir / t).string(), "--signal", (dir / s).string(),
                                        "--out-dir", (dir / "out").string()};
    };
    CHECK(invoke(pair("bad.pgm", "big.pgm")).code == kBadInput);
    CHECK(invoke(pair("missing.pgm", "big.pgm")).code == kBadInput);
    const Run larger = invoke(pair("big.pgm", "small.pgm"));
    CHECK(larger.code == kConstraint);
    CHECK(larger.err.find("larger than signal") != std::string::npos);
    auto zero_levels = pair("small.pgm", "big.pgm");
    zero_levels.insert(zero_levels.end(), {"--levels", "0"});
    CHECK(invoke(zero_levels).code == kConstraint);
    auto bad_fraction = pair("small.pgm", "big.pgm");
    bad_fraction.insert(bad_fraction.end(), {"--fraction", "1.5"});
    CHECK(invoke(bad_fraction).code == kConstraint);
    auto bad_mode = pair("small.pgm", "big.pgm");
    bad_mode.insert(bad_mode.end(), {"--mode", "spiral"});
    CHECK(invoke(bad_mode).code == kConstraint);
    CHECK(invoke({"match"}).code == kConstraint);
    CHECK(invoke({}).code == kConstraint);
    CHECK(invoke({"--help"}).code == kOk);
}

TEST_CASE("oversampled levels warn but succeed") {
    const fs::path dir = scratch("oversampled");
    write_file(dir / "t.pgm", write_pgm(GrayImage::row(3, {3, 1})));
    write_file(dir / "s.pgm", write_pgm(GrayImage::row(3, {0, 3, 1, 2})));
    const Run r = invoke({"match", "--template", (dir / "t.pgm").string(), "--signal", (dir / "s.pgm").string(),
                          "--levels", "8", "--out-dir", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("artifacts are byte-identical across runs") {
    const fs::path dir = scratch("determinism");
    invoke({"scenario", "--seed", "3", "--dims", "2", "--out-dir", (dir / "scene").string()});
    std::string previous;
    for (const char* out : {"a", "b"}) {
        const Run r = invoke({"match", "--template", (dir / "scene" / "template.pgm").string(), "--signal",
                              (dir / "scene" / "signal.pgm").string(), "--surface-csv", "--out-dir",
                              (dir / out).string()});
        REQUIRE(r.code == 0);
        const std::string all = read_file(dir / out / "surface.pgm") + read_file(dir / out / "surface.csv") +
                                read_file(dir / out / "detections.csv");
        if (!previous.empty()) CHECK(all == previous);
        previous = all;
    }
}

TEST_CASE("bench on a tiny grid") {
    BenchGrid grid;
    grid.signal_sizes = {16, 24};
    grid.template_sizes = {4};
    grid.levels = {1, 4};
    const auto rows = run_bench(grid);
    CHECK(rows.size() == 4);  // |sizes| x |levels|
    const std::string csv = write_bench_csv(rows);
    CHECK(csv.rfind("signal_size,template_size,levels,threads,fft_seconds,naive_seconds,speedup\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

    const fs::path dir = scratch("bench");
    const Run r = invoke({"bench", "--signal-sizes", "16", "--template-sizes", "4", "--levels-grid", "1",
                          "--out-dir", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("command=bench rows=1 threads=1", 0) == 0);
    CHECK(fs::exists(dir / "bench.csv"));
}
