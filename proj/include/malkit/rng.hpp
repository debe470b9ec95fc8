#ifndef MALKIT_RNG_HPP
#define MALKIT_RNG_HPP

#include <cstdint>
#include <cstddef>
#include <vector>

namespace malkit {

// Seedable xoshiro256++ generator with hand-rolled distributions so that
// runs are bit-reproducible independently of the standard library build.
// One Rng instance per training run / experiment cell; derived streams come
// from fork() so parallel cells never share state.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal();

    // Uniform index in [0, n); n must be positive.
    std::size_t index(std::size_t n);

    // Stream derived from the construction seed and a stream id. Independent
    // of how many draws the parent has made.
    Rng fork(std::uint64_t stream) const;

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// SplitMix64 finalizer; also used to derive per-cell seeds from coordinates.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace malkit

#endif  // MALKIT_RNG_HPP
