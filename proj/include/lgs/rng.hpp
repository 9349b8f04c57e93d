#pragma once

#include <cstdint>

namespace lgs {

// splitmix64 finalizer; also used to derive independent stream keys.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t key_mix(uint64_t a, uint64_t b) { return mix64(a ^ mix64(b)); }
inline uint64_t key_mix(uint64_t a, uint64_t b, uint64_t c) { return key_mix(key_mix(a, b), c); }
inline uint64_t key_mix(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    return key_mix(key_mix(a, b, c), d);
}

// Deterministic counter-based generator. Streams keyed by (seed, id, counter)
// are independent, which lets parallel and sequential schedules draw the same
// values.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [0,n), unbiased
    uint64_t next_below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    bool next_bool() { return (next() & 1) != 0; }

private:
    uint64_t state_;
};

// One uniform double from a key, without stream state. Used for per-event
// round priorities r(A) so they can be recomputed lazily.
inline double keyed_uniform(uint64_t key) {
    return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

} // namespace lgs
