#include "shl/fusion/fused_series.hpp"

#include <algorithm>
#include <cmath>

#include "shl/core/error.hpp"

namespace shl::fusion {

std::vector<double> normalize_series(std::span<const double> values) {
    if (values.empty()) throw InputError("cannot normalize an empty series");
    for (double v : values)
        if (!std::isfinite(v)) throw InputError("series contains non-finite values");
    const auto [lo, hi] = std::ranges::minmax(values);
    std::vector<double> out(values.size(), 0.0);
    const double range = hi - lo;
    if (range > 0.0) {
        for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / range;
    }
    return out;
}

FusedSeries assemble(const NoveltySeries* face, const NoveltySeries* game,
                     const AudioFeatureSeries* audio) {
    if (!face && !game && !audio) throw PipelineError("fusion", "no views to assemble");

    std::size_t t = static_cast<std::size_t>(-1);
    if (face) t = std::min(t, face->size());
    if (game) t = std::min(t, game->size());
    if (audio) t = std::min(t, audio->size());
    if (t == 0) throw InputError("cannot assemble empty views");

    FusedSeries out;
    std::vector<std::vector<double>> columns;
    auto add = [&](std::string label, std::span<const double> col) {
        out.dims.push_back(std::move(label));
        columns.push_back(normalize_series(col.first(t)));
    };
    if (face) add("face_error", face->values);
    if (game) add("game_error", game->values);
    if (audio) {
        for (Eigen::Index j = 0; j < audio->k(); ++j) {
            std::vector<double> col(t);
            for (std::size_t i = 0; i < t; ++i) col[i] = audio->values(static_cast<Eigen::Index>(i), j);
            add("audio_pc" + std::to_string(j + 1), col);
        }
    }

    out.values.resize(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < t; ++i)
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j][i];

    const std::vector<double>* stamps = face ? &face->timestamps : game ? &game->timestamps : &audio->timestamps;
    if (stamps->size() >= t) {
        out.timestamps.assign(stamps->begin(), stamps->begin() + static_cast<std::ptrdiff_t>(t));
    } else {
        out.timestamps.resize(t);
        for (std::size_t i = 0; i < t; ++i) out.timestamps[i] = static_cast<double>(i) / 10.0;
    }
    return out;
}

}  // namespace shl::fusion
