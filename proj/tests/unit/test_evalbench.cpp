#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "shl/app/config.hpp"
#include "shl/app/pipeline.hpp"
#include "shl/core/error.hpp"
#include "shl/evalbench/ablation.hpp"
#include "shl/evalbench/annotations.hpp"
#include "shl/evalbench/scoring.hpp"
#include "shl/evalbench/synthetic.hpp"

using namespace shl;
using namespace shl::evalbench;

namespace {

const std::filesystem::path kFixtures = SHL_FIXTURE_DIR;

SyntheticStreamSpec short_spec(std::uint64_t seed = 3) {
    SyntheticStreamSpec s;
    s.duration = 12.0;
    s.frame_size = 16;
    s.seed = seed;
    return s;
}

HighlightClip clip(double a, double b) { return {a, b, {}, std::nullopt}; }

}  // namespace

TEST_CASE("synthetic stream shape and determinism") {
    auto spec = short_spec();
    spec.events = {{5.0, {ViewId::face, ViewId::audio}, 1.0}};
    const auto a = generate_synthetic_stream(spec);
    const auto b = generate_synthetic_stream(spec);
    CHECK(a.face.size() == 120u);
    CHECK(a.game.size() == 120u);
    CHECK(a.audio.size() == 117u);
    CHECK(a.face.frames == b.face.frames);
    CHECK(a.game.frames == b.game.frames);
    CHECK(a.signal->samples == b.signal->samples);
    CHECK(a.event_times == std::vector<double>{5.0});
    CHECK(a.face.frames[0].width() == 16);
}

TEST_CASE("different seeds change frames but not event times") {
    auto s1 = short_spec(1), s2 = short_spec(2);
    s1.events = s2.events = {{4.0, {ViewId::game, ViewId::audio}, 1.0}};
    const auto a = generate_synthetic_stream(s1);
    const auto b = generate_synthetic_stream(s2);
    CHECK(a.face.frames != b.face.frames);
    CHECK(a.event_times == b.event_times);
}

TEST_CASE("events perturb only the views they name") {
    auto plain = short_spec();
    auto with = plain;
    with.events = {{6.0, {ViewId::face}, 1.0}};
    const auto a = generate_synthetic_stream(plain);
    const auto b = generate_synthetic_stream(with);
    CHECK(a.game.frames == b.game.frames);
    CHECK(a.signal->samples == b.signal->samples);
    CHECK(a.face.frames[60] != b.face.frames[60]);
    CHECK(a.face.frames[59] == b.face.frames[59]);
    CHECK(a.face.frames[70] == b.face.frames[70]);

    with.events = {{6.0, {ViewId::audio}, 1.0}};
    const auto c = generate_synthetic_stream(with);
    CHECK(a.face.frames == c.face.frames);
    CHECK(a.game.frames == c.game.frames);
    CHECK(a.signal->samples != c.signal->samples);
}

TEST_CASE("no events means base patterns only") {
    auto spec = short_spec();
    spec.frame_noise = 0.0;
    spec.audio_noise = 0.0;
    const auto s = generate_synthetic_stream(spec);
    for (std::size_t i = 0; i < s.face.size(); ++i) {
        const int k = static_cast<int>(s.face.timestamps[i] / spec.pattern_period) % spec.base_patterns;
        REQUIRE(s.face.frames[i] == base_pattern(ViewId::face, k, 16, spec.seed));
    }
    CHECK(s.event_times.empty());
}

TEST_CASE("synthetic spec validation") {
    auto spec = short_spec();
    spec.events = {{12.0, {ViewId::face}, 1.0}};
    CHECK_THROWS_AS(generate_synthetic_stream(spec), ConfigError);
    spec.events = {{-1.0, {ViewId::face}, 1.0}};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.events = {{1.0, {ViewId::face}, 0.0}};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.events = {{1.0, {}, 1.0}};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    const auto ref = reference_stream_spec();
    CHECK(ref.events.size() == 4u);
    for (const auto& e : ref.events) CHECK(e.views.size() >= 2u);
}

TEST_CASE("detection scoring examples") {
    const std::vector<double> events{20.0, 50.0};
    const auto perfect = score_detection({clip(10, 25), clip(40, 55)}, events, 0.0);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    const auto none = score_detection({}, events, 2.0);
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
    const auto half = score_detection({clip(10, 25), clip(100, 115)}, {20.0}, 2.0);
    CHECK(half.precision == 0.5);
    CHECK(half.recall == 1.0);
    // one clip cannot claim two events
    const auto shared = score_detection({clip(10, 25)}, {12.0, 20.0}, 0.0);
    CHECK(shared.matched == 1u);
    CHECK(shared.recall == 0.5);
    CHECK(score_detection({clip(0, 1)}, {}, 0.0).recall == 1.0);
    CHECK_THROWS_AS(score_detection({}, {}, -1.0), ConfigError);
}

TEST_CASE("recall is monotone in tolerance") {
    const std::vector<HighlightClip> clips{clip(10, 25), clip(30, 45), clip(80, 95)};
    const std::vector<double> events{8.0, 27.5, 50.0, 60.0, 97.0};
    double last = -1.0;
    for (double tol = 0.0; tol <= 20.0; tol += 0.5) {
        const auto s = score_detection(clips, events, tol);
        CHECK(s.recall >= last);
        CHECK((s.precision >= 0.0 && s.precision <= 1.0));
        last = s.recall;
    }
}

TEST_CASE("category summary over the annotation fixture") {
    const auto records = load_annotations(kFixtures / "all_views_annotations.csv");
    CHECK(records.size() == 98u);
    check_spans(records, load_durations(kFixtures / "durations.csv"));
    const auto sum = summarize_categories(records);
    CHECK(sum.total[Category::funny] == 26);
    CHECK(sum.total[Category::action] == 25);
    CHECK(sum.total[Category::interaction] == 24);
    CHECK(sum.total.highlights() == 75);
    CHECK(sum.total[Category::none] == 23);
    REQUIRE(sum.videos.size() == 11u);
    CHECK(sum.videos.front().first == "S1_1");
    CategoryCounts acc;
    for (const auto& [id, c] : sum.videos) acc += c;
    CHECK(acc == sum.total);
    const auto s23 = std::ranges::find_if(sum.videos, [](const auto& v) { return v.first == "S2_3"; });
    REQUIRE(s23 != sum.videos.end());
    CHECK(s23->second.highlights() == 12);
    CHECK(s23->second[Category::none] == 2);
    const auto table = render_category_table(sum);
    CHECK(table.find("S2_3,6,4,2,12,2\n") != std::string::npos);
    CHECK(table.find("Total,26,25,24,75,23\n") != std::string::npos);
}

TEST_CASE("annotation parsing edge cases") {
    CHECK(summarize_categories(parse_annotations("")).total == CategoryCounts{});
    CHECK(summarize_categories(parse_annotations("video_id,start_s,end_s,category\n")).total.clips() == 0);
    CHECK_THROWS_AS(parse_annotations("video_id,start_s,end_s,category\nv,1,2,boring\n"), ParseError);
    CHECK_THROWS_AS(parse_annotations("video_id,start_s,end_s,category\nv,1,x,none\n"), ParseError);
    CHECK_THROWS_AS(parse_annotations("id,a,b,c\nv,1,2,none\n"), ParseError);
    const auto recs = parse_annotations("video_id,start_s,end_s,category\nv,100,115,funny\n");
    CHECK_THROWS_AS(check_spans(recs, {{"v", 110.0}}), InputError);
    CHECK_THROWS_AS(check_spans(recs, {}), InputError);
}

TEST_CASE("fraction rows render to two decimals") {
    const auto all = summarize_categories(load_annotations(kFixtures / "all_views_annotations.csv")).total;
    const auto row = fraction_row("Face, Game, Audio", all);
    CHECK(row.clips == 98);
    CHECK(format_fraction(row.funny) == "0.27");
    CHECK(format_fraction(row.action) == "0.26");
    CHECK(format_fraction(row.interaction) == "0.24");
    CHECK(format_fraction(row.total) == "0.77");
    CHECK(format_fraction(row.none) == "0.23");
    const auto text = render_fraction_table({row});
    CHECK(text.find("\"Face, Game, Audio\",98,0.27,0.26,0.24,0.77,0.23") != std::string::npos);

    const auto fa = fraction_row("Face, Audio", summarize_categories(load_annotations(kFixtures / "arm_face_audio.csv")).total);
    CHECK(fa.clips == 95);
    CHECK(format_fraction(fa.funny) == "0.22");
    CHECK(format_fraction(fa.action) == "0.23");
    CHECK(format_fraction(fa.interaction) == "0.28");
    CHECK(format_fraction(fa.total) == "0.74");
    CHECK(format_fraction(fa.none) == "0.26");
    const auto ao = fraction_row("Audio Only", summarize_categories(load_annotations(kFixtures / "arm_audio_only.csv")).total);
    CHECK(ao.clips == 126);
    CHECK(format_fraction(ao.funny) == "0.08");
    CHECK(format_fraction(ao.action) == "0.29");
    CHECK(format_fraction(ao.interaction) == "0.18");
    CHECK(format_fraction(ao.total) == "0.56");
    CHECK(format_fraction(ao.none) == "0.44");
}

TEST_CASE("histogram binning") {
    CHECK(bin_index(0.5, 10) == 5);
    CHECK(bin_index(1.0, 10) == 9);
    CHECK(bin_index(0.0, 10) == 0);
    CHECK(bin_index(0.2999, 10) == 2);
    const std::map<std::string, double> d{{"v", 200.0}};
    HighlightClip c{90, 105, {100}, Category::action};
    auto h = highlights_over_time({c}, {"v"}, d, 10);
    CHECK(h.counts[Category::action][5] == 1);
    c.apexes = {200.0};
    c.end = 200.0;
    h = highlights_over_time({c}, {"v"}, d, 10);
    CHECK(h.counts[Category::action][9] == 1);
}

TEST_CASE("position histogram of the fixture") {
    const auto recs = load_annotations(kFixtures / "all_views_annotations.csv");
    const auto h = highlights_over_time(recs, load_durations(kFixtures / "durations.csv"), 10);
    auto share = [&](Category c, int from, int to) {
        const auto& v = h.counts.at(c);
        const int total = std::accumulate(v.begin(), v.end(), 0);
        return static_cast<double>(std::accumulate(v.begin() + from, v.begin() + to, 0)) / total;
    };
    CHECK(std::accumulate(h.counts.at(Category::none).begin(), h.counts.at(Category::none).end(), 0) == 23);
    CHECK(static_cast<int>(std::lround(100 * share(Category::none, 0, 3))) == 61);
    CHECK(static_cast<int>(std::lround(100 * share(Category::funny, 0, 3))) == 19);
    CHECK(static_cast<int>(std::lround(100 * share(Category::action, 0, 3))) == 4);
    CHECK(static_cast<int>(std::lround(100 * share(Category::action, 5, 10))) == 92);
    CHECK(static_cast<int>(std::lround(100 * share(Category::funny, 5, 10))) == 69);
    CHECK(static_cast<int>(std::lround(100 * share(Category::none, 5, 10))) == 22);
    CHECK(static_cast<int>(std::lround(100 * share(Category::action, 8, 10))) == 60);
    int late = 0, late_interesting = 0;
    for (const auto& [cat, v] : h.counts) {
        const int n = std::accumulate(v.begin() + 5, v.end(), 0);
        late += n;
        if (cat != Category::none) late_interesting += n;
    }
    CHECK(std::lround(100.0 * late_interesting / late) == 91);
    const auto text = render_histogram(h);
    CHECK(text.rfind("category,bin_0", 0) == 0);
}

TEST_CASE("ablation labels and parsing") {
    const auto arms = standard_ablations();
    REQUIRE(arms.size() == 5u);
    CHECK(arms[0].label() == "Face, Game, Audio");
    CHECK(arms[1].label() == "Face, Audio");
    CHECK(arms[2].label() == "Face Only");
    CHECK(arms[3].label() == "Game Only");
    CHECK(arms[4].label() == "Audio Only");
    CHECK(parse_ablation("audio,face").views.size() == 2u);
    CHECK_THROWS_AS(parse_ablation("face,face"), ConfigError);
    CHECK_THROWS_AS(parse_ablation("nose"), ConfigError);
    CHECK_THROWS_AS(parse_ablation(""), ConfigError);
}

TEST_CASE("game-only arm cannot beat face+audio on face+audio events") {
    app::PipelineConfig cfg;
    cfg.source = app::Source::synthetic;
    cfg.synthetic.duration = 90.0;
    cfg.synthetic.frame_size = 32;
    cfg.synthetic.seed = 5;
    cfg.synthetic.events = {{20.0, {ViewId::face, ViewId::audio}, 1.0},
                            {45.0, {ViewId::face, ViewId::audio}, 1.0},
                            {70.0, {ViewId::face, ViewId::audio}, 1.0}};
    cfg.vision_stages = "1x8,1x16,1x16,1x16,1x16";
    cfg.vision_epochs = 2;
    cfg.fusion_epochs = 40;
    cfg.fraction = 0.035;
    cfg.seed = 2;
    const auto bundle = app::compute_signals(cfg);
    const auto rows = run_ablation(bundle.signals, standard_ablations(), app::detection_options(cfg), &bundle.events);
    REQUIRE(rows.size() == 5u);
    for (const auto& r : rows) {
        REQUIRE(r.score.has_value());
        CHECK(r.apexes >= 1u);
    }
    MESSAGE("game only recall " << rows[3].score->recall << ", face+audio recall " << rows[1].score->recall);
    CHECK(rows[3].score->recall <= rows[1].score->recall);
    const auto table = render_ablation_table(rows);
    CHECK(table.find("\"Game Only\"") != std::string::npos);
}
