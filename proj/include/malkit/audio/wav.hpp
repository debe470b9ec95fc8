#ifndef MALKIT_AUDIO_WAV_HPP
#define MALKIT_AUDIO_WAV_HPP

#include <string>
#include <vector>

namespace malkit::audio {

struct WavData {
    std::vector<double> samples;  // mono, in [-1, 1] for integer sources
    int sample_rate = 0;
};

// Reads a mono RIFF/WAVE file. Accepts 16-bit integer PCM (format 1) and
// 32-bit float (format 3); anything else throws std::runtime_error.
WavData read_wav(const std::string& path);

// Writes mono 16-bit PCM. Samples are clamped to [-1, 1].
void write_wav(const std::string& path, const std::vector<double>& samples,
               int sample_rate);

}  // namespace malkit::audio

#endif  // MALKIT_AUDIO_WAV_HPP
