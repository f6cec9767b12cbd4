#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string_view>
#include <thread>
#include <vector>

namespace sot {

// Counter-free deterministic generator. Streams are pure functions of
// (seed, tag, index), so parallel evaluation order cannot change results
// and new consumers never perturb existing streams.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit mantissa
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    // Box-Muller; one value per call, pair cached
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derive an independent stream for (seed, tag, index).
inline SplitMix64 substream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (fnv1a64(tag) + 0x9e3779b97f4a7c15ULL * (index + 1)));
    mixer.next();
    mixer.next();
    return mixer;
}

inline int env_thread_count() {
    if (const char* v = std::getenv("SOT_THREADS")) {
        int n = std::atoi(v);
        if (n >= 1) return n;
    }
    return 1;
}

// Static-striped parallel loop. Each index writes only its own slot, so the
// result is identical to serial execution; callers reduce in index order.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    int nt = env_thread_count();
    if (nt <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        workers.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += std::size_t(nt)) body(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace sot
