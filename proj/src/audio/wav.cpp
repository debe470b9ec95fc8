#include "malkit/audio/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace malkit::audio {

namespace {

uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) |
           (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff),
                 static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    out.write(b, 2);
}

}  // namespace

WavData read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open wav file: " + path);

    char tag[4];
    in.read(tag, 4);
    if (!in || std::memcmp(tag, "RIFF", 4) != 0)
        throw std::runtime_error("not a RIFF file: " + path);
    read_u32(in);  // overall size, unused
    in.read(tag, 4);
    if (!in || std::memcmp(tag, "WAVE", 4) != 0)
        throw std::runtime_error("not a WAVE file: " + path);

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    bool got_fmt = false;
    std::vector<char> payload;

    while (in.read(tag, 4)) {
        const uint32_t chunk_size = read_u32(in);
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            format = read_u16(in);
            channels = read_u16(in);
            rate = read_u32(in);
            read_u32(in);  // byte rate
            read_u16(in);  // block align
            bits = read_u16(in);
            if (chunk_size > 16)
                in.seekg(chunk_size - 16, std::ios::cur);
            got_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            payload.resize(chunk_size);
            in.read(payload.data(), chunk_size);
            break;
        } else {
            // skip unknown chunk (word aligned)
            in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
        }
    }

    if (!got_fmt || payload.empty())
        throw std::runtime_error("wav missing fmt or data chunk: " + path);
    if (channels != 1)
        throw std::invalid_argument("wav must be mono: " + path);

    WavData out;
    out.sample_rate = static_cast<int>(rate);
    if (format == 1 && bits == 16) {
        const std::size_t n = payload.size() / 2;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            int16_t s;
            std::memcpy(&s, payload.data() + 2 * i, 2);
            out.samples[i] = static_cast<double>(s) / 32768.0;
        }
    } else if (format == 3 && bits == 32) {
        const std::size_t n = payload.size() / 4;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            float s;
            std::memcpy(&s, payload.data() + 4 * i, 4);
            out.samples[i] = static_cast<double>(s);
        }
    } else {
        throw std::runtime_error("unsupported wav encoding (want 16-bit PCM or 32-bit float)");
    }
    if (out.samples.empty())
        throw std::invalid_argument("wav has no samples: " + path);
    return out;
}

void write_wav(const std::string& path, const std::vector<double>& samples,
               int sample_rate) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write wav file: " + path);

    const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
    out.write("RIFF", 4);
    write_u32(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_u32(out, 16);
    write_u16(out, 1);  // PCM
    write_u16(out, 1);  // mono
    write_u32(out, static_cast<uint32_t>(sample_rate));
    write_u32(out, static_cast<uint32_t>(sample_rate * 2));
    write_u16(out, 2);
    write_u16(out, 16);
    out.write("data", 4);
    write_u32(out, data_bytes);
    for (double v : samples) {
        const double clamped = std::clamp(v, -1.0, 1.0);
        const int16_t s = static_cast<int16_t>(
            std::lround(clamped * 32767.0));
        write_u16(out, static_cast<uint16_t>(s));
    }
    if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace malkit::audio
