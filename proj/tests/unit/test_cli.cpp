#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const std::string kBin = STREAMHL_BIN;
const fs::path kFixtures = SHL_FIXTURE_DIR;

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const auto dir = fs::temp_directory_path() / "shl_test_cli";
    fs::create_directories(dir);
    const auto out = dir / "stdout.txt";
    const std::string cmd = "\"" + kBin + "\" " + args + " > \"" + out.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string fresh(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "shl_test_cli" / name;
    fs::remove_all(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("run and plot on a synthetic config") {
    const auto out = fresh("run");
    const auto r = run("run -c \"" + (kFixtures / "synthetic_small.conf").string() + "\" --out \"" + out + "\"");
    INFO(r.out);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("clips: ") != std::string::npos);
    for (const char* f : {"clips.jsonl", "manifest.json", "config.txt", "prediction_error.csv", "fused.csv",
                          "face_error.csv", "game_error.csv", "audio_features.csv"})
        CHECK(fs::exists(fs::path(out) / f));
    fs::remove_all(fs::path(out) / "plots");
    const auto p = run("plot \"" + out + "\"");
    CHECK(p.code == 0);
    CHECK(fs::exists(fs::path(out) / "plots" / "fused.svg"));
    CHECK(fs::exists(fs::path(out) / "plots" / "audio.svg"));
}

TEST_CASE("flags override the config file") {
    const auto out = fresh("flags");
    const auto r = run("run -c \"" + (kFixtures / "synthetic_small.conf").string() + "\" --out \"" + out +
                       "\" --modalities face --seed 11 --fraction 0.02 --set fusion.epochs=3");
    INFO(r.out);
    REQUIRE(r.code == 0);
    std::ifstream in(fs::path(out) / "config.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto snap = ss.str();
    CHECK(snap.find("modalities = face\n") != std::string::npos);
    CHECK(snap.find("seed = 11\n") != std::string::npos);
    CHECK(snap.find("clipper.fraction = 0.02\n") != std::string::npos);
    CHECK(snap.find("fusion.epochs = 3\n") != std::string::npos);
    CHECK_FALSE(fs::exists(fs::path(out) / "game_error.csv"));
}

TEST_CASE("summarize the annotation fixtures") {
    const auto r = run("summarize \"" + (kFixtures / "all_views_annotations.csv").string() + "\" --durations \"" +
                       (kFixtures / "durations.csv").string() + "\" --arm \"Face, Audio=" +
                       (kFixtures / "arm_face_audio.csv").string() + "\"");
    INFO(r.out);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Total,26,25,24,75,23") != std::string::npos);
    CHECK(r.out.find("\"Face, Audio\",95,0.22,0.23,0.28,0.74,0.26") != std::string::npos);
    CHECK(r.out.find("category,bin_0") != std::string::npos);
}

TEST_CASE("synth writes a recording that run can decode") {
    const auto dir = fresh("synth");
    const auto s = run("synth -c \"" + (kFixtures / "synthetic_small.conf").string() + "\" --out \"" + dir + "\"");
    INFO(s.out);
    REQUIRE(s.code == 0);
    CHECK(fs::exists(fs::path(dir) / "synthetic.avi"));
    CHECK(fs::exists(fs::path(dir) / "synthetic.wav"));
    CHECK(fs::exists(fs::path(dir) / "events.csv"));
    const auto out = fresh("synth_run");
    const auto r = run("run -c \"" + (fs::path(dir) / "recording.conf").string() + "\" --out \"" + out +
                       "\" --set vision.stages=1x4,1x8,1x8,1x8,1x8 --set vision.epochs=1 --set fusion.epochs=5"
                       " --fraction 0.01");
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(fs::exists(fs::path(out) / "clips.jsonl"));
    CHECK(fs::exists(fs::path(out) / "audio_features.csv"));
}

TEST_CASE("errors produce nonzero exit codes") {
    CHECK(run("run --set no.such.key=1").code == 1);
    CHECK(run("run --set video.path=/nonexistent.mp4").code == 1);
    const auto r = run("run -c \"" + (kFixtures / "synthetic_small.conf").string() + "\" --out \"" +
                       fresh("bad") + "\" --set synthetic.frame_size=24");
    CHECK(r.code == 2);
    CHECK(r.out.find("stage vision.face") != std::string::npos);
    CHECK(run("summarize").code == 1);
    CHECK(run("").code != 0);
}
