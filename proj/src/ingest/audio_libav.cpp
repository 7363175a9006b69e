// Audio decoding through libavformat/libavcodec, plus a minimal WAV writer.

extern "C" {
#include <libavcodec/avcodec.h>
#include <libavformat/avformat.h>
#include <libavutil/opt.h>
#include <libswresample/swresample.h>
}

#include <cstdint>
#include <fstream>
#include <memory>
#include <string>

#include "shl/core/error.hpp"
#include "shl/ingest/ingest.hpp"
#include "shl/ingest/media.hpp"

namespace shl {
namespace {

struct FormatCloser {
    void operator()(AVFormatContext* ctx) const { avformat_close_input(&ctx); }
};
struct CodecCloser {
    void operator()(AVCodecContext* ctx) const { avcodec_free_context(&ctx); }
};
struct FrameFree {
    void operator()(AVFrame* f) const { av_frame_free(&f); }
};
struct PacketFree {
    void operator()(AVPacket* p) const { av_packet_free(&p); }
};
struct SwrFree {
    void operator()(SwrContext* s) const { swr_free(&s); }
};

using FormatPtr = std::unique_ptr<AVFormatContext, FormatCloser>;

std::string av_error(int code) {
    char buf[AV_ERROR_MAX_STRING_SIZE] = {};
    av_strerror(code, buf, sizeof(buf));
    return buf;
}

FormatPtr open_input(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw DecodeError("audio file not found: " + path.string());
    AVFormatContext* raw = nullptr;
    if (int rc = avformat_open_input(&raw, path.string().c_str(), nullptr, nullptr); rc < 0)
        throw DecodeError("cannot open " + path.string() + ": " + av_error(rc));
    FormatPtr ctx(raw);
    if (int rc = avformat_find_stream_info(ctx.get(), nullptr); rc < 0)
        throw DecodeError("cannot read stream info of " + path.string() + ": " + av_error(rc));
    return ctx;
}

int find_audio_stream(AVFormatContext* ctx) {
    return av_find_best_stream(ctx, AVMEDIA_TYPE_AUDIO, -1, -1, nullptr, 0);
}

}  // namespace

int probe_audio_sample_rate(const std::filesystem::path& path) {
    auto ctx = open_input(path);
    const int idx = find_audio_stream(ctx.get());
    if (idx < 0) return 0;
    return ctx->streams[idx]->codecpar->sample_rate;
}

AudioSignal decode_audio(const std::filesystem::path& path) {
    auto fmt = open_input(path);
    const int stream_index = find_audio_stream(fmt.get());
    if (stream_index < 0) throw ViewUnavailable("no audio track in " + path.string());
    AVStream* stream = fmt->streams[stream_index];

    const AVCodec* codec = avcodec_find_decoder(stream->codecpar->codec_id);
    if (codec == nullptr) throw DecodeError("no decoder for the audio track of " + path.string());
    std::unique_ptr<AVCodecContext, CodecCloser> dec(avcodec_alloc_context3(codec));
    if (!dec) throw DecodeError("out of memory allocating decoder");
    if (avcodec_parameters_to_context(dec.get(), stream->codecpar) < 0)
        throw DecodeError("bad audio codec parameters in " + path.string());
    if (int rc = avcodec_open2(dec.get(), codec, nullptr); rc < 0)
        throw DecodeError("cannot open audio decoder: " + av_error(rc));

    const int channels = dec->channels > 0 ? dec->channels : 1;
    const int64_t layout =
        dec->channel_layout != 0 ? static_cast<int64_t>(dec->channel_layout)
                                 : av_get_default_channel_layout(channels);

    // Convert to planar float at the native rate; channels are averaged below.
    std::unique_ptr<SwrContext, SwrFree> swr(swr_alloc_set_opts(
        nullptr, layout, AV_SAMPLE_FMT_FLTP, dec->sample_rate, layout, dec->sample_fmt,
        dec->sample_rate, 0, nullptr));
    if (!swr || swr_init(swr.get()) < 0) throw DecodeError("cannot initialise audio resampler");

    AudioSignal out;
    out.sample_rate = dec->sample_rate;
    std::unique_ptr<AVPacket, PacketFree> packet(av_packet_alloc());
    std::unique_ptr<AVFrame, FrameFree> frame(av_frame_alloc());
    std::vector<std::vector<float>> planes(static_cast<std::size_t>(channels));

    auto drain = [&]() {
        while (true) {
            const int rc = avcodec_receive_frame(dec.get(), frame.get());
            if (rc == AVERROR(EAGAIN) || rc == AVERROR_EOF) return;
            if (rc < 0) throw DecodeError("audio decode failed: " + av_error(rc));
            const int n = frame->nb_samples;
            for (auto& p : planes) p.resize(static_cast<std::size_t>(n));
            std::vector<uint8_t*> ptrs(planes.size());
            for (std::size_t c = 0; c < planes.size(); ++c)
                ptrs[c] = reinterpret_cast<uint8_t*>(planes[c].data());
            const int got = swr_convert(swr.get(), ptrs.data(), n,
                                        const_cast<const uint8_t**>(frame->extended_data), n);
            if (got < 0) throw DecodeError("audio sample conversion failed");
            for (int i = 0; i < got; ++i) {
                float sum = 0.0f;
                for (const auto& p : planes) sum += p[static_cast<std::size_t>(i)];
                out.samples.push_back(sum / static_cast<float>(channels));
            }
            av_frame_unref(frame.get());
        }
    };

    while (av_read_frame(fmt.get(), packet.get()) >= 0) {
        if (packet->stream_index == stream_index) {
            if (int rc = avcodec_send_packet(dec.get(), packet.get()); rc < 0 && rc != AVERROR(EAGAIN))
                throw DecodeError("corrupt audio packet in " + path.string() + ": " + av_error(rc));
            drain();
        }
        av_packet_unref(packet.get());
    }
    avcodec_send_packet(dec.get(), nullptr);
    drain();
    return out;
}

void write_wav(const std::filesystem::path& path, const AudioSignal& signal) {
    if (signal.sample_rate <= 0) throw InputError("WAV sample rate must be positive");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DecodeError("cannot write " + path.string());
    auto u32 = [&](uint32_t v) {
        const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
        os.write(b, 4);
    };
    auto u16 = [&](uint16_t v) {
        const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
        os.write(b, 2);
    };
    const auto data_bytes = static_cast<uint32_t>(signal.samples.size() * 2);
    os.write("RIFF", 4);
    u32(36 + data_bytes);
    os.write("WAVEfmt ", 8);
    u32(16);
    u16(1);  // PCM
    u16(1);  // mono
    u32(static_cast<uint32_t>(signal.sample_rate));
    u32(static_cast<uint32_t>(signal.sample_rate) * 2);
    u16(2);
    u16(16);
    os.write("data", 4);
    u32(data_bytes);
    for (float s : signal.samples) {
        const float clamped = s < -1.0f ? -1.0f : (s > 1.0f ? 1.0f : s);
        u16(static_cast<uint16_t>(static_cast<int16_t>(std::lround(clamped * 32767.0f))));
    }
    if (!os) throw DecodeError("failed writing " + path.string());
}

}  // namespace shl
