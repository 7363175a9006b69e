#include "shl/app/pipeline.hpp"

#include <chrono>
#include <fstream>

#include "json.hpp"

#include "shl/app/clip_manifest.hpp"
#include "shl/app/persistence.hpp"
#include "shl/app/plots.hpp"
#include "shl/audio/features.hpp"
#include "shl/core/error.hpp"
#include "shl/evalbench/synthetic.hpp"
#include "shl/ingest/ingest.hpp"
#include "shl/vision/novelty.hpp"

namespace shl::app {
namespace {

using Clock = std::chrono::steady_clock;

// Runs fn as a named stage: timed, and any library error re-tagged.
template <typename Fn>
auto stage(RunLog* log, const std::string& name, Fn&& fn) {
    const auto t0 = Clock::now();
    auto record = [&] {
        if (log) log->timings.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
    };
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record();
        } else {
            auto r = fn();
            record();
            return r;
        }
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(name, e.what());
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t salt) { return seed * 1000003ull + salt; }

NoveltySeries visual_novelty(const PipelineConfig& config, const FrameSeries& frames, RunLog* log) {
    const ViewId view = frames.view;
    const std::uint64_t salt = view == ViewId::face ? 10 : 20;
    vision::Autoencoder model(autoencoder_spec(config), derived_seed(config.seed, salt));
    vision::TrainOptions opts;
    opts.epochs = config.vision_epochs;
    opts.batch_size = config.vision_batch;
    opts.seed = derived_seed(config.seed, salt + 1);
    opts.optimizer = config.optimizer;
    if (view == ViewId::face && !config.face_encoder_weights.empty()) {
        model.load_encoder_weights(config.face_encoder_weights);
        opts.freeze_encoder = config.freeze_face_encoder;
    }
    const auto trained = vision::train_autoencoder(std::move(model), frames, opts);
    NoveltySeries s = vision::reconstruction_errors(trained, frames);
    if (log) {
        trained.model.save(log->add(weights_file(view)));
        write_novelty_csv(log->add(novelty_file(view)), s);
    }
    return s;
}

void write_manifest(const PipelineConfig& config, const RunLog& log, const std::string& status,
                    const std::string& failed_stage, std::size_t clips, std::size_t apexes) {
    nlohmann::ordered_json m;
    m["software"] = kSoftwareVersion;
    m["status"] = status;
    if (!failed_stage.empty()) m["failed_stage"] = failed_stage;
    m["video_id"] = config.resolved_video_id();
    m["seed"] = config.seed;
    m["simd"] = std::string(simd::isa_name(simd::kernels().isa));
    nlohmann::ordered_json cfg;
    for (const auto& key : config_keys()) cfg[key] = get_config_value(config, key);
    m["config"] = cfg;
    nlohmann::ordered_json timings = nlohmann::ordered_json::array();
    for (const auto& [name, seconds] : log.timings) timings.push_back({{"stage", name}, {"seconds", seconds}});
    m["stages"] = timings;
    auto artifacts = log.artifacts;
    artifacts.emplace_back(kRunManifestFile);
    m["artifacts"] = artifacts;
    m["clips"] = clips;
    m["apexes"] = apexes;
    std::ofstream out(log.dir / kRunManifestFile, std::ios::binary);
    if (!out) throw Error("cannot write " + (log.dir / kRunManifestFile).string());
    out << m.dump(2) << '\n';
}

}  // namespace

std::filesystem::path RunLog::add(const std::string& name) {
    artifacts.push_back(name);
    return dir / name;
}

vision::AutoencoderSpec autoencoder_spec(const PipelineConfig& config) {
    const int size = config.source == Source::synthetic ? config.synthetic.frame_size : config.frame_size;
    if (config.vision_stages == "vgg16") return vision::AutoencoderSpec::vgg16(size);
    return vision::AutoencoderSpec::compact(size, vision::parse_stages(config.vision_stages));
}

DetectionOptions detection_options(const PipelineConfig& config) {
    DetectionOptions o;
    o.forecaster.lstm_layers = config.lstm_layers;
    o.forecaster.hidden_units = config.hidden_units;
    o.training.epochs = config.fusion_epochs;
    o.training.bptt_window = config.bptt_window;
    o.training.seed = derived_seed(config.seed, 30);
    o.training.rho = config.optimizer.rho;
    o.training.epsilon = config.optimizer.epsilon;
    o.training.learning_rate = config.optimizer.learning_rate;
    o.clipper.fraction = config.fraction;
    o.clipper.pre = config.pre_s;
    o.clipper.post = config.post_s;
    return o;
}

SignalBundle compute_signals(const PipelineConfig& config, RunLog* log) {
    config.validate();
    const bool want_face = config.wants(ViewId::face);
    const bool want_game = config.wants(ViewId::game);
    const bool want_audio = config.wants(ViewId::audio);

    IngestedViews views;
    SignalBundle out;
    stage(log, "ingest", [&] {
        if (config.source == Source::synthetic) {
            auto stream = evalbench::generate_synthetic_stream(config.synthetic);
            if (want_face) views.face = std::move(stream.face);
            if (want_game) views.game = std::move(stream.game);
            if (want_audio) views.audio = std::move(stream.audio);
            out.events = std::move(stream.event_times);
            out.signals.duration = config.synthetic.duration;
            align_views(views);
        } else {
            const StreamRecording rec = probe_recording(config.video_path, config.audio_path);
            IngestOptions opts;
            opts.rate = config.frame_rate;
            opts.frame_size = config.frame_size;
            opts.region = config.region;
            opts.want_face = want_face;
            opts.want_game = want_game;
            opts.want_audio = want_audio;
            views = ingest_recording(rec, opts);
            out.signals.duration = rec.duration;
        }
    });

    if (views.face)
        out.signals.face = stage(log, "vision.face", [&] { return visual_novelty(config, *views.face, log); });
    if (views.game)
        out.signals.game = stage(log, "vision.game", [&] { return visual_novelty(config, *views.game, log); });
    if (views.audio) {
        out.signals.audio = stage(log, "audio", [&] {
            audio::FeatureOptions fo;
            fo.band = config.band;
            fo.pca_k = config.pca_k;
            auto r = audio::extract_features(*views.audio, fo);
            if (log) write_audio_features_csv(log->add(kAudioFeaturesFile), r.features);
            return std::move(r.features);
        });
    }
    return out;
}

RunResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    RunResult result;
    RunLog& log = result.log;
    log.dir = config.output_dir;
    std::filesystem::create_directories(log.dir);
    {
        std::ofstream snap(log.add(kConfigSnapshotFile), std::ios::binary);
        snap << to_text(config);
    }

    std::string failed;
    std::size_t apex_count = 0;
    try {
        SignalBundle bundle = compute_signals(config, &log);
        result.events = bundle.events;

        std::vector<ViewId> present;
        for (ViewId v : config.modalities)
            if (bundle.signals.has(v)) present.push_back(v);

        DetectionResult det = stage(&log, "fusion", [&] {
            return detect_highlights(bundle.signals, present, detection_options(config));
        });
        stage(&log, "persist", [&] {
            write_fused_csv(log.add(kFusedFile), det.fused);
            write_prediction_errors_csv(log.add(kPredictionErrorFile), det.errors);
            det.forecaster->save(log.add(kForecasterFile));
            export_clip_manifest(log.add(kClipManifestFile), [&] {
                std::vector<ClipRecord> records;
                for (const auto& c : det.clips) records.push_back({config.resolved_video_id(), c});
                return records;
            }());
        });
        stage(&log, "plots", [&] {
            for (const auto& f : emit_plots(log.dir).files)
                log.artifacts.push_back(std::filesystem::relative(f, log.dir).generic_string());
        });
        apex_count = det.apexes.indices.size();
        result.clips = std::move(det.clips);
        result.errors = std::move(det.errors);
    } catch (const PipelineError& e) {
        failed = e.stage();
        write_manifest(config, log, "failed", failed, 0, 0);
        throw;
    }
    write_manifest(config, log, "ok", "", result.clips.size(), apex_count);
    return result;
}

}  // namespace shl::app
