#ifndef MALKIT_AUDIO_LOGMEL_HPP
#define MALKIT_AUDIO_LOGMEL_HPP

#include <complex>
#include <vector>

#include "malkit/rng.hpp"
#include "malkit/tensor.hpp"

namespace malkit::audio {

struct LogMelConfig {
    int num_mel = 40;
    double window_ms = 30.0;
    double shift_ms = 10.0;
    double log_floor = 1e-10;  // applied before the natural log
};

// In-place iterative radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& x);

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filters spanning 0..Nyquist on the mel scale, one row per
// filter, one column per FFT bin (0..n_fft/2).
Tensor2 mel_filterbank(int num_mel, int n_fft, int sample_rate);

// Frames x num_mel log-mel energies. Hann analysis window; frames that would
// overrun the signal are dropped. Throws on empty/too-short audio.
Tensor2 wav_to_logmel(const std::vector<double>& samples, int sample_rate,
                      const LogMelConfig& config = {});

// Fixed-length training view: exactly `target_frames` rows. Shorter inputs
// are padded at the end with log(log_floor); longer ones are randomly
// cropped with `rng`.
Tensor2 segment_fixed(const Tensor2& frames, std::size_t target_frames,
                      Rng& rng, double log_floor = 1e-10);

}  // namespace malkit::audio

#endif  // MALKIT_AUDIO_LOGMEL_HPP
