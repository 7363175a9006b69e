#include "shl/app/clip_manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "shl/core/error.hpp"

namespace shl::app {
namespace {

using nlohmann::json;

constexpr const char* kSchema = "streamhl.clips";
constexpr int kVersion = 1;

void check(const std::vector<ClipRecord>& records) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        const HighlightClip& c = records[i].clip;
        if (!(c.start >= 0.0 && c.start < c.end)) throw InvariantError("clip with empty or negative span");
        for (double a : c.apexes)
            if (a < c.start || a > c.end) throw InvariantError("apex outside its clip");
        if (i > 0 && records[i - 1].video_id == records[i].video_id && c.start < records[i - 1].clip.end)
            throw InvariantError("overlapping clips in " + records[i].video_id);
    }
}

}  // namespace

std::string format_clip_manifest(const std::vector<ClipRecord>& records) {
    check(records);
    std::ostringstream out;
    out << json{{"schema", kSchema}, {"version", kVersion}, {"clips", records.size()}}.dump() << '\n';
    for (const auto& r : records) {
        json j{{"video_id", r.video_id}, {"start_s", r.clip.start}, {"end_s", r.clip.end}, {"apexes_s", r.clip.apexes}};
        if (r.clip.category) j["category"] = category_name(*r.clip.category);
        out << j.dump() << '\n';
    }
    return out.str();
}

std::string format_clip_manifest(const std::string& video_id, const std::vector<HighlightClip>& clips) {
    std::vector<ClipRecord> records;
    for (const auto& c : clips) records.push_back({video_id, c});
    return format_clip_manifest(records);
}

void export_clip_manifest(const std::filesystem::path& path, const std::vector<ClipRecord>& records) {
    const std::string text = format_clip_manifest(records);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::vector<ClipRecord> parse_clip_manifest(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ClipRecord> records;
    bool header = false;
    std::size_t expected = 0;
    try {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line);
            if (!header) {
                if (j.value("schema", "") != kSchema || j.value("version", 0) != kVersion)
                    throw ParseError("not a clip manifest");
                expected = j.at("clips").get<std::size_t>();
                header = true;
                continue;
            }
            ClipRecord r;
            r.video_id = j.at("video_id").get<std::string>();
            r.clip.start = j.at("start_s").get<double>();
            r.clip.end = j.at("end_s").get<double>();
            r.clip.apexes = j.at("apexes_s").get<std::vector<double>>();
            if (j.contains("category")) r.clip.category = parse_category(j.at("category").get<std::string>());
            records.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("clip manifest: ") + e.what());
    }
    if (!header) throw ParseError("clip manifest: missing header");
    if (records.size() != expected) throw ParseError("clip manifest: record count does not match header");
    return records;
}

std::vector<ClipRecord> load_clip_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_clip_manifest(ss.str());
}

}  // namespace shl::app
