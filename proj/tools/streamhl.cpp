// streamhl: highlight detection for stream recordings.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "shl/app/config.hpp"
#include "shl/app/pipeline.hpp"
#include "shl/app/plots.hpp"
#include "shl/app/synth_recording.hpp"
#include "shl/core/error.hpp"
#include "shl/evalbench/ablation.hpp"
#include "shl/evalbench/annotations.hpp"

namespace {

using namespace shl;

struct CommonFlags {
    std::string config;
    std::vector<std::string> sets;
    std::string seed;
    std::string modalities;
    std::string fraction;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("-c,--config", f.config, "Config file (key = value lines)");
    cmd->add_option("--set", f.sets, "Override a config key, key=value")->take_all();
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--modalities", f.modalities, "Views to use, e.g. face,game,audio");
    cmd->add_option("--fraction", f.fraction, "Fraction of timesteps selected as apexes");
    cmd->add_option("--out", f.out, "Output directory");
}

app::PipelineConfig resolve(const CommonFlags& f) {
    app::PipelineConfig cfg;
    if (!f.config.empty()) cfg = app::load_config(f.config);
    for (const auto& s : f.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        app::set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!f.seed.empty()) app::set_config_value(cfg, "seed", f.seed);
    if (!f.modalities.empty()) app::set_config_value(cfg, "modalities", f.modalities);
    if (!f.fraction.empty()) app::set_config_value(cfg, "clipper.fraction", f.fraction);
    if (!f.out.empty()) app::set_config_value(cfg, "output.dir", f.out);
    return cfg;
}

int cmd_run(const CommonFlags& flags) {
    const auto cfg = resolve(flags);
    const auto r = app::run_pipeline(cfg);
    std::cout << "clips: " << r.clips.size() << "\n";
    for (const auto& c : r.clips) std::printf("  %.1f - %.1f s (%zu apexes)\n", c.start, c.end, c.apexes.size());
    if (!r.events.empty()) {
        const auto s = evalbench::score_detection(r.clips, r.events, 2.0);
        std::printf("precision %.3f recall %.3f (2 s tolerance)\n", s.precision, s.recall);
    }
    std::cout << "artifacts in " << cfg.output_dir.string() << "\n";
    return 0;
}

int cmd_ablate(const CommonFlags& flags, const std::vector<std::string>& arms, double tolerance) {
    auto cfg = resolve(flags);
    std::vector<evalbench::AblationSpec> specs;
    if (arms.empty()) {
        specs = evalbench::standard_ablations();
    } else {
        for (const auto& a : arms) specs.push_back(evalbench::parse_ablation(a));
    }
    // every view any arm needs is computed once
    std::vector<ViewId> needed;
    for (const auto& s : specs)
        for (ViewId v : s.views)
            if (std::find(needed.begin(), needed.end(), v) == needed.end()) needed.push_back(v);
    std::sort(needed.begin(), needed.end());
    cfg.modalities = needed;

    const auto bundle = app::compute_signals(cfg);
    const auto rows = evalbench::run_ablation(bundle.signals, specs, app::detection_options(cfg),
                                              bundle.events.empty() ? nullptr : &bundle.events, tolerance);
    const std::string table = evalbench::render_ablation_table(rows);
    std::cout << table;
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream(cfg.output_dir / "ablation.csv", std::ios::binary) << table;
    return 0;
}

int cmd_summarize(const std::string& annotations, const std::vector<std::string>& arms, const std::string& durations,
                  int bins) {
    if (!annotations.empty()) {
        const auto records = evalbench::load_annotations(annotations);
        std::cout << evalbench::render_category_table(evalbench::summarize_categories(records));
        if (!durations.empty()) {
            const auto d = evalbench::load_durations(durations);
            evalbench::check_spans(records, d);
            std::cout << '\n' << evalbench::render_histogram(evalbench::highlights_over_time(records, d, bins));
        }
    }
    if (!arms.empty()) {
        std::vector<evalbench::FractionRow> rows;
        for (const auto& a : arms) {
            const auto eq = a.find('=');
            if (eq == std::string::npos) throw ConfigError("--arm expects LABEL=FILE");
            const auto s = evalbench::summarize_categories(evalbench::load_annotations(a.substr(eq + 1)));
            rows.push_back(evalbench::fraction_row(a.substr(0, eq), s.total));
        }
        if (!annotations.empty()) std::cout << '\n';
        std::cout << evalbench::render_fraction_table(rows);
    }
    return 0;
}

int cmd_plot(const std::string& dir) {
    const auto report = app::emit_plots(dir);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : report.files) std::cout << f.string() << "\n";
    return 0;
}

int cmd_synth(const CommonFlags& flags) {
    auto cfg = resolve(flags);
    const auto rec = app::write_synthetic_recording(cfg.synthetic, cfg.output_dir);
    std::ofstream conf(cfg.output_dir / "recording.conf", std::ios::binary);
    conf << "source = recording\n"
         << "video.path = " << rec.video.string() << "\n"
         << "audio.path = " << rec.audio.string() << "\n"
         << "region.x = " << rec.region.x << "\nregion.y = " << rec.region.y << "\n"
         << "region.width = " << rec.region.width << "\nregion.height = " << rec.region.height << "\n"
         << "frame.size = " << cfg.synthetic.frame_size << "\n";
    std::cout << rec.video.string() << "\n" << rec.audio.string() << "\n" << rec.events.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Unsupervised multi-view highlight detection for stream recordings"};
    cli.require_subcommand(1);

    CommonFlags run_flags, ablate_flags, synth_flags;
    auto* run = cli.add_subcommand("run", "Run the full pipeline on one recording");
    add_common(run, run_flags);

    auto* ablate = cli.add_subcommand("ablate", "Compare modality subsets on one recording");
    add_common(ablate, ablate_flags);
    std::vector<std::string> arms;
    double tolerance = 2.0;
    ablate->add_option("--arm", arms, "Modality subset, e.g. face,audio (repeatable)");
    ablate->add_option("--tolerance", tolerance, "Event matching tolerance in seconds");

    auto* summarize = cli.add_subcommand("summarize", "Category tables from annotation files");
    std::string annotations, durations;
    std::vector<std::string> fraction_arms;
    int bins = 10;
    summarize->add_option("annotations", annotations, "Annotation CSV (video_id,start_s,end_s,category)");
    summarize->add_option("--arm", fraction_arms, "LABEL=FILE for a fraction row (repeatable)");
    summarize->add_option("--durations", durations, "CSV video_id,duration_s for the position histogram");
    summarize->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);

    auto* plot = cli.add_subcommand("plot", "Render SVG traces of a run directory");
    std::string plot_dir;
    plot->add_option("dir", plot_dir, "Run directory")->required();

    auto* synth = cli.add_subcommand("synth", "Write a synthetic recording (video, wav, events)");
    add_common(synth, synth_flags);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(run_flags);
        if (ablate->parsed()) return cmd_ablate(ablate_flags, arms, tolerance);
        if (summarize->parsed()) {
            if (annotations.empty() && fraction_arms.empty()) throw ConfigError("nothing to summarize");
            return cmd_summarize(annotations, fraction_arms, durations, bins);
        }
        if (plot->parsed()) return cmd_plot(plot_dir);
        if (synth->parsed()) return cmd_synth(synth_flags);
    } catch (const PipelineError& e) {
        std::cerr << "error: stage " << e.stage() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
