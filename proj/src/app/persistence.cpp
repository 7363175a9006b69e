#include "shl/app/persistence.hpp"

#include "shl/core/csv.hpp"
#include "shl/core/error.hpp"

namespace shl::app {
namespace {

Eigen::MatrixXd column(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> first_column(const SeriesTable& t) {
    std::vector<double> out(static_cast<std::size_t>(t.values.rows()));
    for (Eigen::Index r = 0; r < t.values.rows(); ++r) out[static_cast<std::size_t>(r)] = t.values(r, 0);
    return out;
}

SeriesTable read_expecting(const std::filesystem::path& path, std::size_t min_cols) {
    SeriesTable t = read_series_csv(path);
    if (t.header.front() != "timestamp_s" || t.header.size() < min_cols + 1)
        throw ParseError(path.string() + ": unexpected series header");
    return t;
}

}  // namespace

std::string novelty_file(ViewId view) { return std::string(view_name(view)) + "_error.csv"; }

std::string weights_file(ViewId view) { return std::string(view_name(view)) + "_autoencoder.shla"; }

void write_novelty_csv(const std::filesystem::path& path, const NoveltySeries& series) {
    write_series_csv(path, {{"timestamp_s", std::string(view_name(series.view)) + "_error"}, series.timestamps,
                            column(series.values)});
}

void write_audio_features_csv(const std::filesystem::path& path, const AudioFeatureSeries& series) {
    SeriesTable t{{"timestamp_s"}, series.timestamps, series.values};
    for (Eigen::Index j = 0; j < series.k(); ++j) t.header.push_back("audio_pc" + std::to_string(j + 1));
    write_series_csv(path, t);
}

void write_fused_csv(const std::filesystem::path& path, const fusion::FusedSeries& series) {
    SeriesTable t{{"timestamp_s"}, series.timestamps, series.values};
    t.header.insert(t.header.end(), series.dims.begin(), series.dims.end());
    write_series_csv(path, t);
}

void write_prediction_errors_csv(const std::filesystem::path& path, const fusion::PredictionErrorSeries& series) {
    write_series_csv(path, {{"timestamp_s", "prediction_error"}, series.timestamps, column(series.values)});
}

NoveltySeries read_novelty_csv(const std::filesystem::path& path, ViewId view) {
    const SeriesTable t = read_expecting(path, 1);
    return NoveltySeries{view, first_column(t), t.timestamps};
}

AudioFeatureSeries read_audio_features_csv(const std::filesystem::path& path) {
    SeriesTable t = read_expecting(path, 1);
    return AudioFeatureSeries{std::move(t.values), std::move(t.timestamps)};
}

fusion::PredictionErrorSeries read_prediction_errors_csv(const std::filesystem::path& path) {
    const SeriesTable t = read_expecting(path, 1);
    return fusion::PredictionErrorSeries{first_column(t), t.timestamps};
}

}  // namespace shl::app
