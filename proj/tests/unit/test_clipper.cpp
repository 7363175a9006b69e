#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "shl/clipper/clipper.hpp"
#include "shl/core/error.hpp"

using namespace shl;
using namespace shl::clipper;

namespace {

std::vector<double> indices_as_times(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
    return t;
}

}  // namespace

TEST_CASE("apex selection examples") {
    const std::vector<double> e{0.1, 0.9, 0.2, 0.8};
    CHECK(select_apexes(e, {}, 0.25).indices == std::vector<std::size_t>{1});
    CHECK(select_apexes(e, {}, 0.5).indices == std::vector<std::size_t>{1, 3});
    CHECK(select_apexes(e, {}, 0.5).threshold_value == 0.8);
    CHECK(apex_count(15000, 0.0001) == 2u);
    CHECK(apex_count(11700, 0.0001) == 2u);
    CHECK(apex_count(10000, 0.0001) == 1u);  // 0.0001 * 10000 is not exactly 1 in binary
    CHECK(apex_count(5, 0.0001) == 1u);
    CHECK(apex_count(4, 1.0) == 4u);
    std::vector<double> big(15000, 0.0);
    big[10] = 1.0;
    big[14000] = 2.0;
    const auto s = select_apexes(big, indices_as_times(big.size()), 0.0001);
    CHECK(s.indices == std::vector<std::size_t>{10, 14000});
    CHECK(s.timestamps == std::vector<double>{10.0, 14000.0});
}

TEST_CASE("ties go to the earlier timestep") {
    const std::vector<double> e{0.5, 0.7, 0.7, 0.7, 0.1};
    CHECK(select_apexes(e, {}, 0.4).indices == std::vector<std::size_t>{1, 2});
    const std::vector<double> flat(10, 1.0);
    CHECK(select_apexes(flat, {}, 0.3).indices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("selection matches a stable-sort oracle and is scale invariant") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> level(0, 20);  // coarse values to force ties
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> e(1 + trial * 3);
        for (double& v : e) v = level(rng) / 20.0;
        const double f = 0.01 + 0.05 * (trial % 7);
        const auto got = select_apexes(e, {}, f);
        CHECK(got.indices == oracle::top_k(e, apex_count(e.size(), f)));
        std::vector<double> scaled = e;
        for (double& v : scaled) v *= 37.5;
        CHECK(select_apexes(scaled, {}, f).indices == got.indices);
        // every selected error >= every unselected error
        std::set<std::size_t> chosen(got.indices.begin(), got.indices.end());
        for (std::size_t i = 0; i < e.size(); ++i)
            if (!chosen.count(i)) REQUIRE(e[i] <= got.threshold_value);
    }
}

TEST_CASE("selection errors") {
    CHECK_THROWS_AS(select_apexes(std::vector<double>{}, {}, 0.1), InputError);
    CHECK_THROWS_AS(select_apexes(std::vector<double>{1.0, NAN}, {}, 0.1), InputError);
    CHECK_THROWS_AS(select_apexes(std::vector<double>{1.0}, {}, 0.0), ConfigError);
    CHECK_THROWS_AS(select_apexes(std::vector<double>{1.0}, {}, 1.5), ConfigError);
    CHECK_THROWS_AS(select_apexes(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0}, 0.5), InputError);
}

TEST_CASE("linking examples") {
    CHECK(link_apexes(std::vector<double>{100, 105}) == std::vector<ApexGroup>{{100, 105}});
    CHECK(link_apexes(std::vector<double>{100, 200}) == std::vector<ApexGroup>{{100}, {200}});
    const auto g = link_apexes(std::vector<double>{100, 105, 118});
    CHECK(g == std::vector<ApexGroup>{{100, 105, 118}});
    const auto clips = clips_from_groups(g, 1200);
    REQUIRE(clips.size() == 1u);
    CHECK(clips[0].start == 90.0);
    CHECK(clips[0].end == 123.0);
    // a gap of exactly pre + post touches but does not overlap
    CHECK(link_apexes(std::vector<double>{100, 115}).size() == 2u);
    CHECK(link_apexes(std::vector<double>{}).empty());
    CHECK_THROWS_AS(link_apexes(std::vector<double>{5, 1}), InputError);
}

TEST_CASE("clip bounds and clamping") {
    CHECK(clips_from_groups({{100}}, 1200) == std::vector<HighlightClip>{{90, 105, {100}, std::nullopt}});
    CHECK(clips_from_groups({{4}}, 1200) == std::vector<HighlightClip>{{0, 9, {4}, std::nullopt}});
    CHECK(clips_from_groups({{1198}}, 1200) == std::vector<HighlightClip>{{1188, 1200, {1198}, std::nullopt}});
    CHECK_THROWS_AS(clips_from_groups({{1201}}, 1200), InputError);
    CHECK_THROWS_AS(clips_from_groups({{-1}}, 1200), InputError);
    const auto c = clips_from_groups({{500}}, 1200).front();
    CHECK(c.end - c.start == 15.0);
}

TEST_CASE("randomized apex sets agree with a pairwise-merge oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const double duration = 60.0 + (trial % 10) * 60.0;
        std::uniform_real_distribution<double> pos(0.0, duration);
        std::uniform_int_distribution<int> count(1, 25);
        std::vector<double> apexes(static_cast<std::size_t>(count(rng)));
        for (double& a : apexes) a = std::round(pos(rng));  // integer grid keeps gap comparisons exact
        std::ranges::sort(apexes);
        apexes.erase(std::unique(apexes.begin(), apexes.end()), apexes.end());

        const auto groups = link_apexes(apexes);
        const auto clips = clips_from_groups(groups, duration);
        const auto ref = oracle::merge_clips(apexes, duration);
        REQUIRE(clips.size() == ref.size());
        for (std::size_t i = 0; i < clips.size(); ++i) {
            REQUIRE(clips[i].start == ref[i].start);
            REQUIRE(clips[i].end == ref[i].end);
            REQUIRE(clips[i].apexes == ref[i].apexes);
        }
        for (std::size_t i = 1; i < clips.size(); ++i) REQUIRE(clips[i - 1].end <= clips[i].start);
        for (double a : apexes) {
            int inside = 0;
            for (const auto& c : clips) inside += (c.start <= a && a <= c.end);
            REQUIRE(inside >= 1);
        }
        // re-linking each emitted group's apexes reproduces that group
        for (const auto& grp : groups) REQUIRE(link_apexes(grp) == std::vector<ApexGroup>{grp});
    }
}

TEST_CASE("extract_clips end to end") {
    fusion::PredictionErrorSeries e;
    for (int i = 0; i < 1000; ++i) {
        e.values.push_back(0.01);
        e.timestamps.push_back(0.1 * (i + 1));
    }
    e.values[499] = 5.0;  // t = 50.0
    e.values[549] = 4.0;  // t = 55.0
    e.values[899] = 3.0;  // t = 90.0
    ClipperOptions opts;
    opts.fraction = 0.003;
    const auto clips = extract_clips(e, 100.0, opts);
    REQUIRE(clips.size() == 2u);
    CHECK(clips[0].start == doctest::Approx(40.0));
    CHECK(clips[0].end == doctest::Approx(60.0));
    CHECK(clips[0].apexes.size() == 2u);
    CHECK(clips[1].start == doctest::Approx(80.0));
    CHECK(clips[1].end == doctest::Approx(95.0));
}

TEST_CASE("category names") {
    for (auto c : {Category::funny, Category::action, Category::interaction, Category::none})
        CHECK(parse_category(category_name(c)) == c);
    CHECK_THROWS_AS(parse_category("boring"), ParseError);
}
