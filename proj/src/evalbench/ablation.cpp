#include "shl/evalbench/ablation.hpp"

#include <algorithm>
#include <sstream>

#include "shl/core/csv.hpp"
#include "shl/core/error.hpp"

namespace shl::evalbench {
namespace {

std::string capitalized(ViewId v) {
    std::string s(view_name(v));
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

}  // namespace

std::string AblationSpec::label() const {
    if (views.size() == 1) return capitalized(views[0]) + " Only";
    std::string out;
    for (std::size_t i = 0; i < views.size(); ++i) out += (i ? ", " : "") + capitalized(views[i]);
    return out;
}

AblationSpec parse_ablation(const std::string& text) {
    AblationSpec spec;
    for (const auto& name : split_csv_line(text)) {
        const auto v = parse_view(name);
        if (!v) throw ConfigError("unknown view '" + name + "'");
        if (std::find(spec.views.begin(), spec.views.end(), *v) != spec.views.end())
            throw ConfigError("view '" + name + "' listed twice");
        spec.views.push_back(*v);
    }
    if (spec.views.empty()) throw ConfigError("empty modality subset");
    return spec;
}

std::vector<AblationSpec> standard_ablations() {
    using enum ViewId;
    return {{{face, game, audio}}, {{face, audio}}, {{face}}, {{game}}, {{audio}}};
}

std::vector<AblationRow> run_ablation(const ViewSignals& signals, const std::vector<AblationSpec>& ablations,
                                      const DetectionOptions& options, const std::vector<double>* events,
                                      double tolerance) {
    std::vector<AblationRow> rows;
    for (const auto& spec : ablations) {
        if (spec.views.empty()) throw ConfigError("empty modality subset");
        AblationRow row;
        row.spec = spec;
        try {
            DetectionResult r = detect_highlights(signals, spec.views, options);
            row.apexes = r.apexes.indices.size();
            row.clips = std::move(r.clips);
        } catch (const PipelineError& e) {
            throw PipelineError(e.stage(), "ablation '" + spec.label() + "': " + e.what());
        }
        if (events) row.score = score_detection(row.clips, *events, tolerance);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_ablation_table(const std::vector<AblationRow>& rows) {
    const bool scored = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.score.has_value(); });
    std::ostringstream out;
    out << "modalities,clips,apexes";
    if (scored) out << ",precision,recall";
    out << '\n';
    for (const auto& r : rows) {
        out << '"' << r.spec.label() << "\"," << r.clips.size() << ',' << r.apexes;
        if (scored) {
            if (r.score)
                out << ',' << format_double(r.score->precision) << ',' << format_double(r.score->recall);
            else
                out << ",,";
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace shl::evalbench
