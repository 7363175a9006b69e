// Video decoding and encoding through OpenCV's videoio (FFmpeg backend).

#include <opencv2/core.hpp>
#include <opencv2/videoio.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "shl/core/error.hpp"
#include "shl/ingest/ingest.hpp"
#include "shl/ingest/media.hpp"

namespace shl {
namespace {

struct VideoInfo {
    double fps = 0.0;
    std::size_t frame_count = 0;
};

cv::VideoCapture open_capture(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw DecodeError("video file not found: " + path.string());
    cv::VideoCapture cap(path.string(), cv::CAP_FFMPEG);
    if (!cap.isOpened()) throw DecodeError("cannot decode video: " + path.string());
    return cap;
}

VideoInfo video_info(cv::VideoCapture& cap, const std::filesystem::path& path) {
    VideoInfo info;
    info.fps = cap.get(cv::CAP_PROP_FPS);
    const double count = cap.get(cv::CAP_PROP_FRAME_COUNT);
    if (!(info.fps > 0.0) || !(count >= 0.0))
        throw DecodeError("video reports no frame rate: " + path.string());
    info.frame_count = static_cast<std::size_t>(std::llround(count));
    return info;
}

Image to_image(const cv::Mat& bgr) {
    if (bgr.type() != CV_8UC3) throw DecodeError("unsupported decoded pixel format");
    Image img(bgr.cols, bgr.rows, 3);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            img.at(x, y, 0) = row[x][2] / 255.0f;
            img.at(x, y, 1) = row[x][1] / 255.0f;
            img.at(x, y, 2) = row[x][0] / 255.0f;
        }
    }
    return img;
}

}  // namespace

StreamRecording probe_recording(const std::filesystem::path& video,
                                const std::filesystem::path& audio) {
    StreamRecording rec;
    rec.video_path = video;
    rec.audio_path = audio.empty() ? video : audio;
    auto cap = open_capture(video);
    const VideoInfo info = video_info(cap, video);
    rec.native_fps = info.fps;
    rec.duration = static_cast<double>(info.frame_count) / info.fps;
    rec.audio_sample_rate = probe_audio_sample_rate(rec.audio_path);
    return rec;
}

void for_each_sampled_frame(const StreamRecording& recording, double rate, const FrameVisitor& visit) {
    if (!(rate > 0.0)) throw ConfigError("sampling rate must be positive");
    if (!(recording.duration > 0.0)) return;
    auto cap = open_capture(recording.video_path);
    const VideoInfo info = video_info(cap, recording.video_path);
    if (rate > info.fps + 1e-9)
        throw ConfigError("sampling rate " + std::to_string(rate) + " exceeds native fps " +
                          std::to_string(info.fps));

    const std::size_t n = sampled_frame_count(recording.duration, rate);
    std::size_t next_native = 0;  // index of the frame the next grab() returns
    cv::Mat current;
    std::size_t current_index = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        const std::size_t want = nearest_native_frame(t, info.fps, info.frame_count);
        if (want != current_index) {
            while (next_native <= want) {
                if (!cap.grab())
                    throw DecodeError("video ended early at frame " + std::to_string(next_native) +
                                      ": " + recording.video_path.string());
                ++next_native;
            }
            if (!cap.retrieve(current) || current.empty())
                throw DecodeError("corrupt frame " + std::to_string(want) + " in " +
                                  recording.video_path.string());
            current_index = want;
        }
        visit(i, t, to_image(current));
    }
}

struct VideoWriter::Impl {
    cv::VideoWriter writer;
    int width = 0;
    int height = 0;
};

VideoWriter::VideoWriter(const std::filesystem::path& path, int width, int height, double fps)
    : impl_(std::make_unique<Impl>()) {
    impl_->width = width;
    impl_->height = height;
    impl_->writer.open(path.string(), cv::VideoWriter::fourcc('M', 'J', 'P', 'G'), fps,
                       cv::Size(width, height));
    if (!impl_->writer.isOpened()) throw DecodeError("cannot open video for writing: " + path.string());
}

VideoWriter::~VideoWriter() { close(); }

void VideoWriter::write(const Image& frame) {
    if (!impl_) throw InputError("video writer is closed");
    if (frame.width() != impl_->width || frame.height() != impl_->height || frame.channels() != 3)
        throw InputError("frame shape does not match the video writer");
    cv::Mat bgr(frame.height(), frame.width(), CV_8UC3);
    for (int y = 0; y < frame.height(); ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < frame.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                const float v = std::clamp(frame.at(x, y, c), 0.0f, 1.0f);
                row[x][2 - c] = static_cast<unsigned char>(std::lround(v * 255.0f));
            }
        }
    }
    impl_->writer.write(bgr);
}

void VideoWriter::close() {
    if (impl_) impl_->writer.release();
    impl_.reset();
}

}  // namespace shl
