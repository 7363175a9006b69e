#include "shl/app/plots.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shl/app/clip_manifest.hpp"
#include "shl/app/persistence.hpp"
#include "shl/core/error.hpp"

namespace shl::app {
namespace {

constexpr double kWidth = 900, kHeight = 300, kMargin = 40;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

}  // namespace

std::string render_trace_svg(const std::string& title, std::span<const double> x, std::span<const double> y,
                             std::span<const double> marks) {
    if (x.size() != y.size() || x.empty()) throw InputError("trace needs matching, non-empty x and y");
    const auto [x0, x1] = std::ranges::minmax(x);
    const auto [y0, y1] = std::ranges::minmax(y);
    const double xr = x1 > x0 ? x1 - x0 : 1.0;
    const double yr = y1 > y0 ? y1 - y0 : 1.0;
    auto px = [&](double v) { return kMargin + (v - x0) / xr * (kWidth - 2 * kMargin); };
    auto py = [&](double v) { return kHeight - kMargin - (v - y0) / yr * (kHeight - 2 * kMargin); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kMargin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title)
        << "</text>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
        << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 10 << "\" font-size=\"10\">" << num(x0)
        << " s</text>\n";
    out << "<text x=\"" << kWidth - kMargin - 40 << "\" y=\"" << kHeight - 10 << "\" font-size=\"10\">" << num(x1)
        << " s</text>\n";
    for (double m : marks) {
        if (m < x0 || m > x1) continue;
        out << "<line class=\"apex\" x1=\"" << num(px(m)) << "\" y1=\"" << kMargin << "\" x2=\"" << num(px(m))
            << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"red\" stroke-dasharray=\"4,3\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) out << (i ? " " : "") << num(px(x[i])) << ',' << num(py(y[i]));
    out << "\"/>\n</svg>\n";
    return out.str();
}

PlotReport emit_plots(const std::filesystem::path& run_dir) {
    PlotReport report;
    const auto plot_dir = run_dir / "plots";
    std::filesystem::create_directories(plot_dir);

    std::vector<double> apexes;
    if (std::filesystem::exists(run_dir / kClipManifestFile)) {
        for (const auto& r : load_clip_manifest(run_dir / kClipManifestFile))
            apexes.insert(apexes.end(), r.clip.apexes.begin(), r.clip.apexes.end());
    } else {
        report.warnings.push_back("no clip manifest; apexes not marked");
    }

    auto emit = [&](const std::string& name, const std::string& title, const std::vector<double>& x,
                    const std::vector<double>& y) {
        if (y.empty()) {
            report.warnings.push_back(name + ": empty series, plot skipped");
            return;
        }
        const auto path = plot_dir / (name + ".svg");
        write_text(path, render_trace_svg(title, x, y, apexes));
        report.files.push_back(path);
    };

    const auto e_path = run_dir / kPredictionErrorFile;
    if (std::filesystem::exists(e_path)) {
        const auto e = read_prediction_errors_csv(e_path);
        emit("fused", "Fused prediction error", e.timestamps, e.values);
    } else {
        report.warnings.push_back("fused: prediction error series missing, plot skipped");
    }
    for (ViewId v : {ViewId::face, ViewId::game}) {
        const auto path = run_dir / novelty_file(v);
        if (!std::filesystem::exists(path)) continue;
        const auto s = read_novelty_csv(path, v);
        const std::string name(view_name(v));
        emit(name, name + " reconstruction error", s.timestamps, s.values);
    }
    const auto a_path = run_dir / kAudioFeaturesFile;
    if (std::filesystem::exists(a_path)) {
        const auto a = read_audio_features_csv(a_path);
        std::vector<double> pc1(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) pc1[i] = a.values(static_cast<Eigen::Index>(i), 0);
        emit("audio", "audio PC1", a.timestamps, pc1);
    }
    return report;
}

}  // namespace shl::app
