#include "shl/app/synth_recording.hpp"

#include <fstream>

#include "shl/core/csv.hpp"
#include "shl/core/error.hpp"
#include "shl/ingest/media.hpp"

namespace shl::app {

SyntheticRecording write_synthetic_recording(const evalbench::SyntheticStreamSpec& spec,
                                             const std::filesystem::path& dir) {
    const auto stream = evalbench::generate_synthetic_stream(spec);
    std::filesystem::create_directories(dir);
    SyntheticRecording out;
    out.video = dir / "synthetic.avi";
    out.audio = dir / "synthetic.wav";
    out.events = dir / "events.csv";
    const int s = spec.frame_size;
    out.region = RegionSpec{s, 0, s, s};

    VideoWriter writer(out.video, 2 * s, s, spec.frame_rate);
    for (std::size_t i = 0; i < stream.face.size(); ++i) {
        Image frame(2 * s, s, 3);
        const Image& game = stream.game.frames[i];
        const Image& face = stream.face.frames[i];
        for (int y = 0; y < s; ++y)
            for (int x = 0; x < s; ++x)
                for (int c = 0; c < 3; ++c) {
                    frame.at(x, y, c) = game.at(x, y, c);
                    frame.at(x + s, y, c) = face.at(x, y, c);
                }
        writer.write(frame);
    }
    writer.close();
    write_wav(out.audio, *stream.signal);

    std::ofstream ev(out.events, std::ios::binary);
    if (!ev) throw Error("cannot write " + out.events.string());
    ev << "time_s,views,magnitude\n";
    for (const auto& e : spec.events) {
        ev << format_double(e.time) << ',';
        for (std::size_t j = 0; j < e.views.size(); ++j) ev << (j ? "+" : "") << view_name(e.views[j]);
        ev << ',' << format_double(e.magnitude) << '\n';
    }
    return out;
}

}  // namespace shl::app
