#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace adsim {

// xoshiro256++ seeded through splitmix64. Self-contained so that streams are
// reproducible bit-for-bit across platforms and standard-library versions,
// which the trace determinism contract requires. Substreams are derived from
// (seed, label) or (seed, index), so adding a consumer never perturbs the
// draws of existing streams.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    static std::uint64_t derive(std::uint64_t seed, std::string_view label) {
        // FNV-1a over the label, folded into the seed via splitmix rounds.
        std::uint64_t h = 1469598103934665603ull;
        for (char ch : label) {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
        std::uint64_t x = seed ^ h;
        splitmix64(x);
        return splitmix64(x);
    }

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
        splitmix64(x);
        return splitmix64(x);
    }

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(derive(seed, index));
    }
    static Rng substream(std::uint64_t seed, std::string_view label) {
        return Rng(derive(seed, label));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // Box-Muller; draws two uniforms per call.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    double exponential(double mean) { return -std::log1p(-uniform01()) * mean; }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace adsim
