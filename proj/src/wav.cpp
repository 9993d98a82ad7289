#include "trackgen/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace trackgen {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

double clip_unit(double v) { return std::clamp(v, -1.0, 1.0); }

void append_sample(std::string& out, double v, WavDepth depth) {
    switch (depth) {
        case WavDepth::Pcm16: {
            const double c = clip_unit(v);
            const auto q = static_cast<std::int32_t>(std::lrint(c * 32768.0));
            put_u16(out, static_cast<std::uint16_t>(std::clamp(q, -32768, 32767)));
            break;
        }
        case WavDepth::Pcm24: {
            const double c = clip_unit(v);
            auto q = static_cast<std::int32_t>(std::lrint(c * 8388608.0));
            q = std::clamp(q, -8388608, 8388607);
            out.push_back(static_cast<char>(q & 0xFF));
            out.push_back(static_cast<char>((q >> 8) & 0xFF));
            out.push_back(static_cast<char>((q >> 16) & 0xFF));
            break;
        }
        case WavDepth::Float32: {
            const float f = static_cast<float>(v);
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            put_u32(out, bits);
            break;
        }
    }
}

struct Reader {
    const std::string& data;
    std::size_t pos = 0;

    bool has(std::size_t n) const { return pos + n <= data.size(); }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
        return v;
    }
    std::uint16_t u16() {
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
        return v;
    }
    std::string tag() {
        std::string t = data.substr(pos, 4);
        pos += 4;
        return t;
    }
};

}  // namespace

WavDepth wav_depth_from_string(const std::string& s) {
    if (s == "16") return WavDepth::Pcm16;
    if (s == "24") return WavDepth::Pcm24;
    if (s == "32f") return WavDepth::Float32;
    throw UserError("unknown bit depth '" + s + "' (expected 16, 24 or 32f)");
}

std::string wav_depth_to_string(WavDepth d) {
    switch (d) {
        case WavDepth::Pcm16: return "16";
        case WavDepth::Pcm24: return "24";
        case WavDepth::Float32: return "32f";
    }
    return "?";
}

void write_wav(const StereoBuffer& buffer, const std::filesystem::path& path, WavDepth depth) {
    buffer.check_consistent();
    for (int c = 0; c < 2; ++c) {
        for (double v : buffer.channel(c)) {
            if (!std::isfinite(v)) throw Error("non-finite sample in buffer for " + path.string());
        }
    }
    const std::uint16_t channels = 2;
    const std::uint16_t bits = depth == WavDepth::Pcm16 ? 16 : (depth == WavDepth::Pcm24 ? 24 : 32);
    const std::uint16_t block_align = channels * bits / 8;
    const std::uint32_t data_size =
        static_cast<std::uint32_t>(buffer.frames() * block_align);

    std::string out;
    out.reserve(44 + data_size);
    out += "RIFF";
    put_u32(out, 36 + data_size);
    out += "WAVE";
    out += "fmt ";
    put_u32(out, 16);
    put_u16(out, depth == WavDepth::Float32 ? kFormatIeeeFloat : kFormatPcm);
    put_u16(out, channels);
    put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate) * block_align);
    put_u16(out, block_align);
    put_u16(out, bits);
    out += "data";
    put_u32(out, data_size);
    for (std::size_t i = 0; i < buffer.frames(); ++i) {
        append_sample(out, buffer.left[i], depth);
        append_sample(out, buffer.right[i], depth);
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw UserError("cannot open '" + path.string() + "' for writing");
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw Error("short write to '" + path.string() + "'");
}

StereoBuffer read_wav(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw UserError("cannot open WAV file '" + path.string() + "'");
    std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    Reader r{data};
    if (!r.has(12) || r.tag() != "RIFF") throw UserError("'" + path.string() + "' is not a RIFF file");
    r.u32();  // riff size, unreliable in the wild
    if (r.tag() != "WAVE") throw UserError("'" + path.string() + "' is not a WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool got_fmt = false;
    std::size_t data_pos = 0, data_len = 0;

    while (r.has(8)) {
        const std::string id = r.tag();
        const std::uint32_t size = r.u32();
        if (!r.has(size)) break;
        if (id == "fmt ") {
            if (size < 16) throw UserError("malformed fmt chunk in '" + path.string() + "'");
            const std::size_t start = r.pos;
            format = r.u16();
            channels = r.u16();
            rate = r.u32();
            r.u32();  // byte rate
            r.u16();  // block align
            bits = r.u16();
            if (format == kFormatExtensible && size >= 40) {
                r.pos = start + 24;  // skip to the sub-format GUID
                format = r.u16();
            }
            r.pos = start + size;
            got_fmt = true;
        } else if (id == "data") {
            data_pos = r.pos;
            data_len = size;
            r.pos += size;
        } else {
            r.pos += size;
        }
        if (size % 2 == 1 && r.has(1)) ++r.pos;  // chunks are word-aligned
    }

    if (!got_fmt || data_pos == 0) throw UserError("'" + path.string() + "' has no fmt/data chunks");
    if (channels == 0 || channels > 2) {
        throw UserError("'" + path.string() + "' has " + std::to_string(channels) +
                        " channels (only mono/stereo supported)");
    }
    const bool is_float = format == kFormatIeeeFloat;
    if (!is_float && format != kFormatPcm) {
        throw UserError("'" + path.string() + "' uses unsupported WAV format tag " + std::to_string(format));
    }
    if (is_float && bits != 32) throw UserError("'" + path.string() + "': only 32-bit float supported");
    if (!is_float && bits != 16 && bits != 24) {
        throw UserError("'" + path.string() + "': unsupported PCM bit depth " + std::to_string(bits));
    }

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    const std::size_t n = data_len / frame_bytes;
    StereoBuffer buf(n, static_cast<int>(rate));

    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data()) + data_pos;
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < channels; ++c) {
            const unsigned char* p = bytes + i * frame_bytes + static_cast<std::size_t>(c) * bytes_per_sample;
            double v = 0.0;
            if (is_float) {
                std::uint32_t u = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                                  (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
                float f;
                std::memcpy(&f, &u, 4);
                v = static_cast<double>(f);
            } else if (bits == 16) {
                const auto s = static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0]) |
                                                         (static_cast<std::uint16_t>(p[1]) << 8));
                v = static_cast<double>(s) / 32768.0;
            } else {  // 24-bit
                std::int32_t s = static_cast<std::int32_t>(p[0]) | (static_cast<std::int32_t>(p[1]) << 8) |
                                 (static_cast<std::int32_t>(p[2]) << 16);
                if (s & 0x800000) s |= ~0xFFFFFF;
                v = static_cast<double>(s) / 8388608.0;
            }
            buf.channel(c)[i] = v;
        }
        if (channels == 1) buf.right[i] = buf.left[i];
    }
    if (buf.empty()) throw UserError("'" + path.string() + "' contains no audio frames");
    return buf;
}

}  // namespace trackgen
