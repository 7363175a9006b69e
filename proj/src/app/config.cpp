#include "shl/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "shl/core/csv.hpp"
#include "shl/core/error.hpp"
#include "shl/vision/autoencoder.hpp"

namespace shl::app {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        return parse_double(v, key);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
        throw ConfigError(key + ": '" + v + "' is not an integer");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": '" + v + "' is not a boolean");
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

struct Field {
    std::string key;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string&)> set;
};

#define SHL_DOUBLE(k, member)                                                                       \
    Field { k, [](const PipelineConfig& c) { return format_double(c.member); },                      \
            [](PipelineConfig& c, const std::string& v) { c.member = to_double(k, v); } }
#define SHL_INT(k, member)                                                                          \
    Field { k, [](const PipelineConfig& c) { return std::to_string(c.member); },                     \
            [](PipelineConfig& c, const std::string& v) { c.member = to_int<decltype(c.member)>(k, v); } }
#define SHL_PATH(k, member)                                                                         \
    Field { k, [](const PipelineConfig& c) { return c.member.string(); },                            \
            [](PipelineConfig& c, const std::string& v) { c.member = v; } }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"source", [](const PipelineConfig& c) { return std::string(c.source == Source::synthetic ? "synthetic" : "recording"); },
         [](PipelineConfig& c, const std::string& v) {
             if (v == "recording") c.source = Source::recording;
             else if (v == "synthetic") c.source = Source::synthetic;
             else throw ConfigError("source: expected recording or synthetic");
         }},
        {"video.id", [](const PipelineConfig& c) { return c.video_id; },
         [](PipelineConfig& c, const std::string& v) { c.video_id = v; }},
        SHL_PATH("video.path", video_path),
        SHL_PATH("audio.path", audio_path),
        SHL_INT("region.x", region.x),
        SHL_INT("region.y", region.y),
        SHL_INT("region.width", region.width),
        SHL_INT("region.height", region.height),
        SHL_DOUBLE("frame.rate", frame_rate),
        SHL_INT("frame.size", frame_size),
        {"modalities", [](const PipelineConfig& c) { return format_modalities(c.modalities); },
         [](PipelineConfig& c, const std::string& v) { c.modalities = parse_modalities(v); }},
        {"vision.stages", [](const PipelineConfig& c) { return c.vision_stages; },
         [](PipelineConfig& c, const std::string& v) {
             if (v != "vgg16") vision::parse_stages(v);
             c.vision_stages = v;
         }},
        SHL_INT("vision.epochs", vision_epochs),
        SHL_INT("vision.batch", vision_batch),
        SHL_PATH("vision.face_encoder_weights", face_encoder_weights),
        {"vision.freeze_face_encoder", [](const PipelineConfig& c) { return from_bool(c.freeze_face_encoder); },
         [](PipelineConfig& c, const std::string& v) { c.freeze_face_encoder = to_bool("vision.freeze_face_encoder", v); }},
        {"optimizer.rho", [](const PipelineConfig& c) { return format_float(c.optimizer.rho); },
         [](PipelineConfig& c, const std::string& v) { c.optimizer.rho = static_cast<float>(to_double("optimizer.rho", v)); }},
        {"optimizer.epsilon", [](const PipelineConfig& c) { return format_float(c.optimizer.epsilon); },
         [](PipelineConfig& c, const std::string& v) { c.optimizer.epsilon = static_cast<float>(to_double("optimizer.epsilon", v)); }},
        {"optimizer.learning_rate", [](const PipelineConfig& c) { return format_float(c.optimizer.learning_rate); },
         [](PipelineConfig& c, const std::string& v) {
             c.optimizer.learning_rate = static_cast<float>(to_double("optimizer.learning_rate", v));
         }},
        SHL_DOUBLE("audio.band_low_hz", band.low),
        SHL_DOUBLE("audio.band_high_hz", band.high),
        SHL_INT("audio.pca_k", pca_k),
        SHL_INT("fusion.lstm_layers", lstm_layers),
        SHL_INT("fusion.hidden_units", hidden_units),
        SHL_INT("fusion.epochs", fusion_epochs),
        SHL_INT("fusion.bptt_window", bptt_window),
        SHL_DOUBLE("clipper.fraction", fraction),
        SHL_DOUBLE("clipper.pre_s", pre_s),
        SHL_DOUBLE("clipper.post_s", post_s),
        SHL_INT("seed", seed),
        SHL_PATH("output.dir", output_dir),
        SHL_DOUBLE("synthetic.duration", synthetic.duration),
        SHL_INT("synthetic.frame_size", synthetic.frame_size),
        SHL_DOUBLE("synthetic.frame_rate", synthetic.frame_rate),
        SHL_INT("synthetic.sample_rate", synthetic.sample_rate),
        SHL_INT("synthetic.base_patterns", synthetic.base_patterns),
        SHL_DOUBLE("synthetic.pattern_period", synthetic.pattern_period),
        SHL_DOUBLE("synthetic.frame_noise", synthetic.frame_noise),
        SHL_DOUBLE("synthetic.tone_hz", synthetic.tone_hz),
        SHL_DOUBLE("synthetic.tone_amplitude", synthetic.tone_amplitude),
        SHL_DOUBLE("synthetic.audio_noise", synthetic.audio_noise),
        SHL_DOUBLE("synthetic.burst_hz", synthetic.burst_hz),
        SHL_DOUBLE("synthetic.burst_amplitude", synthetic.burst_amplitude),
        SHL_DOUBLE("synthetic.event_length", synthetic.event_length),
        {"synthetic.events", [](const PipelineConfig& c) { return format_events(c.synthetic.events); },
         [](PipelineConfig& c, const std::string& v) { c.synthetic.events = parse_events(v); }},
        SHL_INT("synthetic.seed", synthetic.seed),
    };
    return table;
}

#undef SHL_DOUBLE
#undef SHL_INT
#undef SHL_PATH

const Field& field(const std::string& key) {
    for (const auto& f : fields())
        if (f.key == key) return f;
    throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

bool PipelineConfig::wants(ViewId v) const noexcept {
    return std::find(modalities.begin(), modalities.end(), v) != modalities.end();
}

std::string PipelineConfig::resolved_video_id() const {
    if (!video_id.empty()) return video_id;
    if (source == Source::synthetic) return "synthetic";
    return video_path.stem().string();
}

void PipelineConfig::validate() const {
    if (modalities.empty()) throw ConfigError("modalities must name at least one view");
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("clipper.fraction must lie in (0, 1]");
    if (!(pre_s >= 0.0) || !(post_s >= 0.0) || pre_s + post_s <= 0.0)
        throw ConfigError("clipper.pre_s and clipper.post_s must be non-negative with a positive sum");
    if (!(frame_rate > 0.0)) throw ConfigError("frame.rate must be positive");
    if (frame_size < 1) throw ConfigError("frame.size must be positive");
    if (vision_epochs < 1 || vision_batch < 1) throw ConfigError("vision.epochs and vision.batch must be positive");
    if (fusion_epochs < 1 || bptt_window < 1) throw ConfigError("fusion.epochs and fusion.bptt_window must be positive");
    if (lstm_layers < 1) throw ConfigError("fusion.lstm_layers must be positive");
    if (hidden_units < 0) throw ConfigError("fusion.hidden_units must be non-negative");
    if (pca_k < 1) throw ConfigError("audio.pca_k must be positive");
    if (!(band.low > 0.0 && band.low < band.high)) throw ConfigError("audio band must satisfy 0 < low < high");
    if (output_dir.empty()) throw ConfigError("output.dir must be set");
    if (!face_encoder_weights.empty() && !std::filesystem::exists(face_encoder_weights))
        throw ConfigError("face encoder weights not found: " + face_encoder_weights.string());
    if (source == Source::synthetic) {
        synthetic.validate();
        return;
    }
    if (video_path.empty()) throw ConfigError("video.path must be set for recordings");
    if (!std::filesystem::exists(video_path)) throw ConfigError("video not found: " + video_path.string());
    if (!audio_path.empty() && !std::filesystem::exists(audio_path))
        throw ConfigError("audio not found: " + audio_path.string());
    if ((wants(ViewId::face) || wants(ViewId::game)) && (region.width <= 0 || region.height <= 0))
        throw ConfigError("region.width and region.height must be set for the visual views");
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.push_back(f.key);
    return keys;
}

void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value) {
    field(key).set(config, trim(value));
}

std::string get_config_value(const PipelineConfig& config, const std::string& key) {
    return field(key).get(config);
}

PipelineConfig parse_config(const std::string& text, PipelineConfig base) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        try {
            set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string to_text(const PipelineConfig& config) {
    std::ostringstream out;
    for (const auto& f : fields()) out << f.key << " = " << f.get(config) << '\n';
    return out.str();
}

std::vector<evalbench::PlantedEvent> parse_events(const std::string& text) {
    std::vector<evalbench::PlantedEvent> events;
    if (trim(text).empty()) return events;
    for (const auto& item : split_csv_line(text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("event '" + item + "': expected time:views");
        evalbench::PlantedEvent e;
        e.time = to_double("synthetic.events", trim(item.substr(0, colon)));
        std::string views = item.substr(colon + 1);
        const auto at = views.find('@');
        if (at != std::string::npos) {
            e.magnitude = to_double("synthetic.events", trim(views.substr(at + 1)));
            views.erase(at);
        }
        std::replace(views.begin(), views.end(), '+', ',');
        e.views = parse_modalities(views);
        events.push_back(std::move(e));
    }
    return events;
}

std::string format_events(const std::vector<evalbench::PlantedEvent>& events) {
    std::string out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i) out += ',';
        out += format_double(events[i].time) + ':';
        for (std::size_t j = 0; j < events[i].views.size(); ++j)
            out += (j ? "+" : "") + std::string(view_name(events[i].views[j]));
        if (events[i].magnitude != 1.0) out += '@' + format_double(events[i].magnitude);
    }
    return out;
}

std::vector<ViewId> parse_modalities(const std::string& text) {
    std::vector<ViewId> out;
    for (const auto& name : split_csv_line(text)) {
        const auto v = parse_view(name);
        if (!v) throw ConfigError("unknown view '" + name + "'");
        if (std::find(out.begin(), out.end(), *v) != out.end()) throw ConfigError("view '" + name + "' listed twice");
        out.push_back(*v);
    }
    if (out.empty()) throw ConfigError("empty modality list");
    std::sort(out.begin(), out.end());
    return out;
}

std::string format_modalities(const std::vector<ViewId>& views) {
    std::string out;
    for (std::size_t i = 0; i < views.size(); ++i) out += (i ? "," : "") + std::string(view_name(views[i]));
    return out;
}

}  // namespace shl::app
