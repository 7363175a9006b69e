#include "shl/clipper/detect.hpp"

#include <algorithm>

#include "shl/core/error.hpp"

namespace shl {

bool ViewSignals::has(ViewId v) const noexcept {
    switch (v) {
    case ViewId::face: return face.has_value();
    case ViewId::game: return game.has_value();
    case ViewId::audio: return audio.has_value();
    }
    return false;
}

DetectionResult detect_highlights(const ViewSignals& signals, std::span<const ViewId> views,
                                  const DetectionOptions& options) {
    auto wants = [&](ViewId v) { return std::find(views.begin(), views.end(), v) != views.end(); };
    for (ViewId v : views)
        if (!signals.has(v)) throw PipelineError("fusion", std::string(view_name(v)) + " view is unavailable");

    DetectionResult r;
    try {
        r.fused = fusion::assemble(wants(ViewId::face) ? &*signals.face : nullptr,
                                   wants(ViewId::game) ? &*signals.game : nullptr,
                                   wants(ViewId::audio) ? &*signals.audio : nullptr);
        r.forecaster.emplace(fusion::train_forecaster(r.fused, options.forecaster, options.training));
        r.errors = fusion::prediction_errors(*r.forecaster, r.fused);
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError("fusion", e.what());
    }
    try {
        r.apexes = clipper::select_apexes(r.errors, options.clipper.fraction);
        r.clips = clipper::clips_from_groups(
            clipper::link_apexes(r.apexes.timestamps, options.clipper.pre, options.clipper.post), signals.duration,
            options.clipper.pre, options.clipper.post);
    } catch (const Error& e) {
        throw PipelineError("clipper", e.what());
    }
    return r;
}

}  // namespace shl
