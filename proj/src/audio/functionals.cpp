#include "malkit/audio/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace malkit::audio {

namespace {

struct Moments {
    double mean, var, skew, kurt, min, max;
};

Moments column_moments(const Tensor2& m, std::size_t col) {
    const double n = static_cast<double>(m.rows);
    Moments s{};
    s.min = m.at(0, col);
    s.max = m.at(0, col);
    double sum = 0.0;
    for (std::size_t t = 0; t < m.rows; ++t) {
        const double v = m.at(t, col);
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (std::size_t t = 0; t < m.rows; ++t) {
        const double d = m.at(t, col) - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.var = m2;
    if (m2 > 0.0) {
        s.skew = m3 / std::pow(m2, 1.5);
        s.kurt = m4 / (m2 * m2);
    } else {
        s.skew = 0.0;
        s.kurt = 0.0;
    }
    return s;
}

}  // namespace

Tensor2 delta_frames(const Tensor2& frames) {
    const long T = static_cast<long>(frames.rows);
    Tensor2 out = Tensor2::zeros(frames.rows, frames.cols);
    const double denom = 2.0 * (1.0 + 4.0);  // 2 * sum(n^2) for n=1..2
    for (long t = 0; t < T; ++t) {
        for (std::size_t c = 0; c < frames.cols; ++c) {
            double acc = 0.0;
            for (long n = 1; n <= 2; ++n) {
                const long ahead = std::min(t + n, T - 1);
                const long behind = std::max(t - n, 0L);
                acc += static_cast<double>(n) *
                       (frames.at(static_cast<std::size_t>(ahead), c) -
                        frames.at(static_cast<std::size_t>(behind), c));
            }
            out.at(static_cast<std::size_t>(t), c) = acc / denom;
        }
    }
    return out;
}

std::vector<double> functionals(const Tensor2& frames) {
    if (frames.rows < 3)
        throw std::invalid_argument("functionals need at least 3 frames");
    const std::size_t bands = frames.cols;
    std::vector<double> out;
    out.reserve(15 * bands);

    for (std::size_t b = 0; b < bands; ++b) {
        const Moments s = column_moments(frames, b);
        out.push_back(s.mean);
        out.push_back(s.var);
        out.push_back(s.skew);
        out.push_back(s.kurt);
        out.push_back(s.min);
        out.push_back(s.max);
        out.push_back(s.max - s.min);
    }

    Tensor2 d1 = delta_frames(frames);
    Tensor2 d2 = delta_frames(d1);
    for (const Tensor2* d : {&d1, &d2}) {
        for (std::size_t b = 0; b < bands; ++b) {
            const Moments s = column_moments(*d, b);
            out.push_back(s.mean);
            out.push_back(s.var);
            out.push_back(s.skew);
            out.push_back(s.kurt);
        }
    }
    return out;
}

}  // namespace malkit::audio
