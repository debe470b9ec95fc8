#include "malkit/audio/logmel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace malkit::audio {

void fft(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wn(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wn;
            }
        }
    }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Tensor2 mel_filterbank(int num_mel, int n_fft, int sample_rate) {
    const int num_bins = n_fft / 2 + 1;
    const double nyquist = sample_rate / 2.0;
    std::vector<double> edges(num_mel + 2);
    const double mel_max = hz_to_mel(nyquist);
    for (int i = 0; i < num_mel + 2; ++i)
        edges[i] = mel_to_hz(mel_max * i / (num_mel + 1));

    Tensor2 bank = Tensor2::zeros(num_mel, num_bins);
    for (int m = 0; m < num_mel; ++m) {
        const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
        for (int k = 0; k < num_bins; ++k) {
            const double f = static_cast<double>(k) * sample_rate / n_fft;
            double w = 0.0;
            if (f > lo && f < hi)
                w = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
            bank.at(m, k) = w;
        }
    }
    return bank;
}

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

Tensor2 wav_to_logmel(const std::vector<double>& samples, int sample_rate,
                      const LogMelConfig& config) {
    if (samples.empty()) throw std::invalid_argument("empty audio");
    const std::size_t window =
        static_cast<std::size_t>(config.window_ms * sample_rate / 1000.0);
    const std::size_t shift =
        static_cast<std::size_t>(config.shift_ms * sample_rate / 1000.0);
    if (window == 0 || shift == 0)
        throw std::invalid_argument("window/shift too small for sample rate");
    if (samples.size() < window)
        throw std::invalid_argument("audio shorter than one analysis window");

    const std::size_t n_fft = next_pow2(window);
    const std::size_t num_frames = (samples.size() - window) / shift + 1;
    const std::size_t num_bins = n_fft / 2 + 1;

    std::vector<double> hann(window);
    for (std::size_t i = 0; i < window; ++i)
        hann[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / window));

    const Tensor2 bank =
        mel_filterbank(config.num_mel, static_cast<int>(n_fft), sample_rate);

    Tensor2 out = Tensor2::zeros(num_frames, config.num_mel);
    std::vector<std::complex<double>> buf(n_fft);
    std::vector<double> power(num_bins);
    for (std::size_t t = 0; t < num_frames; ++t) {
        const double* frame = samples.data() + t * shift;
        for (std::size_t i = 0; i < window; ++i)
            buf[i] = std::complex<double>(frame[i] * hann[i], 0.0);
        for (std::size_t i = window; i < n_fft; ++i) buf[i] = 0.0;
        fft(buf);
        for (std::size_t k = 0; k < num_bins; ++k) power[k] = std::norm(buf[k]);
        for (int m = 0; m < config.num_mel; ++m) {
            double e = 0.0;
            const double* w = bank.row_ptr(m);
            for (std::size_t k = 0; k < num_bins; ++k) e += w[k] * power[k];
            out.at(t, m) = std::log(std::max(e, config.log_floor));
        }
    }
    return out;
}

Tensor2 segment_fixed(const Tensor2& frames, std::size_t target_frames,
                      Rng& rng, double log_floor) {
    if (frames.rows == 0) throw std::invalid_argument("no frames to segment");
    if (frames.rows == target_frames) return frames;

    Tensor2 out = Tensor2::zeros(target_frames, frames.cols);
    if (frames.rows < target_frames) {
        std::copy(frames.data.begin(), frames.data.end(), out.data.begin());
        const double pad = std::log(log_floor);
        std::fill(out.data.begin() +
                      static_cast<long>(frames.rows * frames.cols),
                  out.data.end(), pad);
    } else {
        const std::size_t start = rng.index(frames.rows - target_frames + 1);
        std::copy(frames.data.begin() +
                      static_cast<long>(start * frames.cols),
                  frames.data.begin() +
                      static_cast<long>((start + target_frames) * frames.cols),
                  out.data.begin());
    }
    return out;
}

}  // namespace malkit::audio
