#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <vector>

#include "malkit/audio/functionals.hpp"
#include "malkit/audio/logmel.hpp"
#include "malkit/audio/wav.hpp"
#include "malkit/audio/zscore.hpp"
#include "malkit/rng.hpp"
#include "oracles.hpp"

using namespace malkit;
using namespace malkit::audio;

namespace {

// Quadratic-time DFT, the reference for the fast transform.
std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * std::numbers::pi *
                               static_cast<double>(k * t) /
                               static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

// Clamped-index regression delta, written independently of the library.
std::vector<double> brute_delta(const std::vector<double>& x) {
    const long T = static_cast<long>(x.size());
    std::vector<double> d(x.size());
    for (long t = 0; t < T; ++t) {
        double acc = 0.0;
        for (long n = 1; n <= 2; ++n) {
            const double ahead = x[static_cast<std::size_t>(std::min(t + n, T - 1))];
            const double behind = x[static_cast<std::size_t>(std::max(t - n, 0L))];
            acc += static_cast<double>(n) * (ahead - behind);
        }
        d[static_cast<std::size_t>(t)] = acc / 10.0;
    }
    return d;
}

std::vector<double> sine(double freq_hz, double seconds, int rate) {
    const std::size_t n = static_cast<std::size_t>(seconds * rate);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = 0.5 * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate);
    return s;
}

}  // namespace

TEST_CASE("fft matches a naive dft") {
    Rng rng(25);
    std::vector<double> x(64);
    for (auto& v : x) v = rng.normal();
    std::vector<std::complex<double>> buf(64);
    for (std::size_t i = 0; i < 64; ++i) buf[i] = x[i];
    fft(buf);
    auto ref = naive_dft(x);
    for (std::size_t k = 0; k < 64; ++k) {
        CHECK(std::abs(buf[k] - ref[k]) < 1e-10);
    }
    std::vector<std::complex<double>> bad(3);
    CHECK_THROWS(fft(bad));
}

TEST_CASE("silence maps every frame to the log floor") {
    std::vector<double> silence(16000, 0.0);
    Tensor2 lm = wav_to_logmel(silence, 16000);
    const double expected = std::log(1e-10);
    for (double v : lm.data) CHECK(v == doctest::Approx(expected));
}

TEST_CASE("one second at 16 kHz yields 98 frames of 40 bands") {
    std::vector<double> audio = sine(300.0, 1.0, 16000);
    Tensor2 lm = wav_to_logmel(audio, 16000);
    // framing arithmetic: window 480, shift 160
    const std::size_t expected = (16000 - 480) / 160 + 1;
    CHECK(expected == 98);
    CHECK(lm.rows == expected);
    CHECK(lm.cols == 40);
    CHECK(lm.all_finite());
}

TEST_CASE("a 440 Hz sine peaks in the band whose filter covers 440 Hz") {
    const int rate = 16000;
    // Locate the filter with the largest triangle response at 440 Hz using
    // the declared filterbank construction (41 intervals over 0..Nyquist on
    // the mel scale).
    const int num_mel = 40;
    const double mel_max = hz_to_mel(rate / 2.0);
    std::vector<double> edges(num_mel + 2);
    for (int i = 0; i < num_mel + 2; ++i)
        edges[i] = mel_to_hz(mel_max * i / (num_mel + 1));
    int expected_band = -1;
    double best_w = -1.0;
    for (int m = 0; m < num_mel; ++m) {
        const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
        double w = 0.0;
        if (440.0 > lo && 440.0 < hi)
            w = 440.0 <= mid ? (440.0 - lo) / (mid - lo)
                             : (hi - 440.0) / (hi - mid);
        if (w > best_w) {
            best_w = w;
            expected_band = m;
        }
    }
    REQUIRE(expected_band >= 0);

    Tensor2 lm = wav_to_logmel(sine(440.0, 0.5, rate), rate);
    for (std::size_t t = 0; t < lm.rows; ++t) {
        int argmax = 0;
        for (int m = 1; m < num_mel; ++m)
            if (lm.at(t, m) > lm.at(t, argmax)) argmax = m;
        CHECK(argmax == expected_band);
    }
}

TEST_CASE("wav_to_logmel rejects empty and too-short audio") {
    CHECK_THROWS(wav_to_logmel({}, 16000));
    std::vector<double> tiny(100, 0.1);
    CHECK_THROWS(wav_to_logmel(tiny, 16000));
}

TEST_CASE("segment_fixed passes through, pads, and crops") {
    Rng rng(5);
    // Row t holds the constant t so crops are identifiable.
    auto numbered = [](std::size_t rows) {
        Tensor2 t = Tensor2::zeros(rows, 4);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                t.at(r, c) = static_cast<double>(r);
        return t;
    };

    Tensor2 exact = segment_fixed(numbered(500), 500, rng);
    CHECK(exact.rows == 500);
    CHECK(exact.at(499, 0) == 499.0);

    Tensor2 padded = segment_fixed(numbered(300), 500, rng);
    CHECK(padded.rows == 500);
    CHECK(padded.at(299, 0) == 299.0);
    const double pad = std::log(1e-10);
    for (std::size_t r = 300; r < 500; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(padded.at(r, c) == doctest::Approx(pad));

    // Crop start must lie in [0, 300] and be reproducible per seed.
    std::vector<double> starts;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng a(seed), b(seed);
        Tensor2 ca = segment_fixed(numbered(800), 500, a);
        Tensor2 cb = segment_fixed(numbered(800), 500, b);
        const double start = ca.at(0, 0);
        CHECK(start == cb.at(0, 0));
        CHECK(start >= 0.0);
        CHECK(start <= 300.0);
        CHECK(start == std::floor(start));
        CHECK(ca.at(499, 0) == start + 499.0);
        starts.push_back(start);
    }
    // Different seeds should not all crop from the same place.
    CHECK(*std::max_element(starts.begin(), starts.end()) >
          *std::min_element(starts.begin(), starts.end()));
}

TEST_CASE("functionals of constant frames follow the zero-variance convention") {
    Tensor2 frames = Tensor2::zeros(20, 40);
    frames.fill(3.5);
    std::vector<double> f = functionals(frames);
    REQUIRE(f.size() == 600);
    for (std::size_t b = 0; b < 40; ++b) {
        CHECK(f[b * 7 + 0] == doctest::Approx(3.5));  // mean
        CHECK(f[b * 7 + 1] == 0.0);                   // var
        CHECK(f[b * 7 + 2] == 0.0);                   // skew
        CHECK(f[b * 7 + 3] == 0.0);                   // kurt
        CHECK(f[b * 7 + 6] == 0.0);                   // range
    }
    // All delta statistics vanish for constant input.
    for (std::size_t i = 280; i < 600; ++i) CHECK(f[i] == 0.0);
}

TEST_CASE("functionals moments match the brute-force statistics oracle") {
    Tensor2 frames = Tensor2::zeros(10, 1);
    std::vector<double> series;
    for (std::size_t t = 0; t < 10; ++t) {
        const double v = static_cast<double>(t + 1) * 1.3 -
                         0.7 * static_cast<double>(t * t);
        frames.at(t, 0) = v;
        series.push_back(v);
    }
    std::vector<double> f = functionals(frames);
    REQUIRE(f.size() == 15);
    const auto s = oracles::series_stats(series);
    CHECK(f[0] == doctest::Approx(s.mean).epsilon(1e-10));
    CHECK(f[1] == doctest::Approx(s.variance).epsilon(1e-10));
    CHECK(f[2] == doctest::Approx(s.skewness).epsilon(1e-10));
    CHECK(f[3] == doctest::Approx(s.kurtosis).epsilon(1e-10));
    CHECK(f[4] == doctest::Approx(s.min).epsilon(1e-10));
    CHECK(f[5] == doctest::Approx(s.max).epsilon(1e-10));
    CHECK(f[6] == doctest::Approx(s.range).epsilon(1e-10));

    // Delta blocks against an independent delta + moment computation.
    const auto d1 = brute_delta(series);
    const auto sd1 = oracles::series_stats(d1);
    CHECK(f[7] == doctest::Approx(sd1.mean).epsilon(1e-10));
    CHECK(f[8] == doctest::Approx(sd1.variance).epsilon(1e-10));
    CHECK(f[9] == doctest::Approx(sd1.skewness).epsilon(1e-10));
    CHECK(f[10] == doctest::Approx(sd1.kurtosis).epsilon(1e-10));
    const auto d2 = brute_delta(d1);
    const auto sd2 = oracles::series_stats(d2);
    CHECK(f[11] == doctest::Approx(sd2.mean).epsilon(1e-10));
    CHECK(f[12] == doctest::Approx(sd2.variance).epsilon(1e-10));
    CHECK(f[13] == doctest::Approx(sd2.skewness).epsilon(1e-10));
    CHECK(f[14] == doctest::Approx(sd2.kurtosis).epsilon(1e-10));
}

TEST_CASE("delta_frames matches the clamped regression formula") {
    Rng rng(8);
    Tensor2 frames = Tensor2::zeros(12, 3);
    for (auto& v : frames.data) v = rng.normal();
    Tensor2 d = delta_frames(frames);
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<double> col(12);
        for (std::size_t t = 0; t < 12; ++t) col[t] = frames.at(t, c);
        const auto ref = brute_delta(col);
        for (std::size_t t = 0; t < 12; ++t)
            CHECK(d.at(t, c) == doctest::Approx(ref[t]).epsilon(1e-12));
    }
}

TEST_CASE("static functionals ignore frame order, deltas do not") {
    Rng rng(99);
    Tensor2 frames = Tensor2::zeros(30, 40);
    for (auto& v : frames.data) v = rng.normal();
    std::vector<double> f = functionals(frames);

    std::vector<std::size_t> order(30);
    for (std::size_t i = 0; i < 30; ++i) order[i] = i;
    rng.shuffle(order);
    Tensor2 shuffled = Tensor2::zeros(30, 40);
    for (std::size_t r = 0; r < 30; ++r)
        for (std::size_t c = 0; c < 40; ++c)
            shuffled.at(r, c) = frames.at(order[r], c);
    std::vector<double> g = functionals(shuffled);

    for (std::size_t i = 0; i < 280; ++i)
        CHECK(f[i] == doctest::Approx(g[i]).epsilon(1e-10));
    double delta_diff = 0.0;
    for (std::size_t i = 280; i < 600; ++i)
        delta_diff += std::abs(f[i] - g[i]);
    CHECK(delta_diff > 1e-6);
}

TEST_CASE("functionals require at least 3 frames") {
    Tensor2 two = Tensor2::zeros(2, 5);
    CHECK_THROWS(functionals(two));
}

TEST_CASE("zscore on {0,2} gives +-1/sqrt(2) with sample std") {
    Tensor2 data{2, 1, {0.0, 2.0}};
    ZScoreStats st = zscore_fit(data);
    CHECK(st.mean[0] == doctest::Approx(1.0));
    CHECK(st.stddev[0] == doctest::Approx(std::sqrt(2.0)));
    Tensor2 z = zscore_apply(data, st);
    CHECK(z.at(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(z.at(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("zscore output columns are centered with unit sample std") {
    Rng rng(3);
    Tensor2 data = Tensor2::zeros(50, 6);
    for (auto& v : data.data) v = rng.uniform(-5.0, 5.0);
    for (std::size_t r = 0; r < 50; ++r) data.at(r, 5) = 7.7;  // constant col
    ZScoreStats st = zscore_fit(data);
    Tensor2 z = zscore_apply(data, st);
    for (std::size_t c = 0; c < 5; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < 50; ++r) mean += z.at(r, c);
        mean /= 50.0;
        double ss = 0.0;
        for (std::size_t r = 0; r < 50; ++r)
            ss += (z.at(r, c) - mean) * (z.at(r, c) - mean);
        const double sd = std::sqrt(ss / 49.0);
        CHECK(std::abs(mean) < 1e-10);
        CHECK(std::abs(sd - 1.0) < 1e-10);
    }
    for (std::size_t r = 0; r < 50; ++r) CHECK(z.at(r, 5) == 0.0);
}

TEST_CASE("zscore leaves already-normalized data unchanged") {
    // Two rows {-a, +a} with a = 1/sqrt(2) have mean 0 and sample std 1.
    const double a = 1.0 / std::sqrt(2.0);
    Tensor2 data{2, 2, {-a, a, a, -a}};
    ZScoreStats st = zscore_fit(data);
    Tensor2 z = zscore_apply(data, st);
    for (std::size_t i = 0; i < data.data.size(); ++i)
        CHECK(z.data[i] == doctest::Approx(data.data[i]).epsilon(1e-12));
    Tensor2 one_row = Tensor2::zeros(1, 2);
    CHECK_THROWS(zscore_fit(one_row));
}

TEST_CASE("wav writer and reader round trip 16-bit audio") {
    const std::string path = "roundtrip_test.wav";
    std::vector<double> audio = sine(440.0, 0.05, 16000);
    write_wav(path, audio, 16000);
    WavData back = read_wav(path);
    CHECK(back.sample_rate == 16000);
    REQUIRE(back.samples.size() == audio.size());
    for (std::size_t i = 0; i < audio.size(); ++i)
        CHECK(back.samples[i] == doctest::Approx(audio[i]).epsilon(1e-3));
    std::remove(path.c_str());
}

TEST_CASE("wav reader handles 32-bit float and rejects stereo") {
    auto put_u32 = [](std::string& s, uint32_t v) {
        for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    auto put_u16 = [](std::string& s, uint16_t v) {
        s.push_back(static_cast<char>(v & 0xff));
        s.push_back(static_cast<char>((v >> 8) & 0xff));
    };
    auto make_wav = [&](uint16_t format, uint16_t channels, uint16_t bits,
                        const std::string& payload) {
        std::string s = "RIFF";
        put_u32(s, 36 + static_cast<uint32_t>(payload.size()));
        s += "WAVEfmt ";
        put_u32(s, 16);
        put_u16(s, format);
        put_u16(s, channels);
        put_u32(s, 8000);
        put_u32(s, 8000u * channels * bits / 8);
        put_u16(s, static_cast<uint16_t>(channels * bits / 8));
        put_u16(s, bits);
        s += "data";
        put_u32(s, static_cast<uint32_t>(payload.size()));
        s += payload;
        return s;
    };

    std::string float_payload;
    for (float v : {0.25f, -0.5f, 1.0f}) {
        char b[4];
        std::memcpy(b, &v, 4);
        float_payload.append(b, 4);
    }
    {
        std::ofstream out("float_test.wav", std::ios::binary);
        out << make_wav(3, 1, 32, float_payload);
    }
    WavData f = read_wav("float_test.wav");
    REQUIRE(f.samples.size() == 3);
    CHECK(f.samples[0] == doctest::Approx(0.25));
    CHECK(f.samples[1] == doctest::Approx(-0.5));
    CHECK(f.samples[2] == doctest::Approx(1.0));
    std::remove("float_test.wav");

    {
        std::ofstream out("stereo_test.wav", std::ios::binary);
        out << make_wav(1, 2, 16, std::string(8, '\0'));
    }
    CHECK_THROWS(read_wav("stereo_test.wav"));
    std::remove("stereo_test.wav");

    CHECK_THROWS(read_wav("no_such_file.wav"));
}
