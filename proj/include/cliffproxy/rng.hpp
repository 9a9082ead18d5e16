// Copyright 2026 The cliffproxy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <type_traits>

namespace cliffproxy {

namespace detail {

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline uint64_t label_hash(std::string_view s) {
    return fnv1a(s);
}

template <typename T>
    requires std::is_integral_v<T>
uint64_t label_hash(T v) {
    // Integers and strings never collide on the same path slot.
    return splitmix64(static_cast<uint64_t>(v) ^ 0xA5A5A5A5DEADBEEFULL);
}

}  // namespace detail

/// A seeded pseudo-random stream. Owned by exactly one task at a time.
class Rng {
   public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {
    }

    static constexpr result_type min() {
        return std::mt19937_64::min();
    }
    static constexpr result_type max() {
        return std::mt19937_64::max();
    }
    result_type operator()() {
        return engine_();
    }

    uint64_t seed() const {
        return seed_;
    }

    uint64_t next_u64() {
        return engine_();
    }

    /// Uniform double in [0, 1) built from the top 53 bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, bound).
    uint64_t below(uint64_t bound) {
        // Rejection keeps the result exactly uniform.
        uint64_t limit = max() - max() % bound;
        uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

    bool bernoulli(double p) {
        return uniform() < p;
    }

    double normal() {
        return std::normal_distribution<double>(0.0, 1.0)(engine_);
    }

    uint64_t binomial(uint64_t trials, double p) {
        if (p <= 0) return 0;
        if (p >= 1) return trials;
        return std::binomial_distribution<uint64_t>(trials, p)(engine_);
    }

   private:
    uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Derives a 64-bit seed from a master seed and a label path.
template <typename... Labels>
uint64_t derive_seed(uint64_t master, const Labels &...labels) {
    uint64_t h = detail::splitmix64(master ^ 0x6A09E667F3BCC908ULL);
    ((h = detail::splitmix64(h ^ detail::splitmix64(detail::label_hash(labels) + h))), ...);
    return h;
}

/// Stream for the subtree of work named by `labels` under `master`.
/// Equal paths give identical streams; distinct paths give independent ones.
template <typename... Labels>
Rng seed_derive(uint64_t master, const Labels &...labels) {
    return Rng(derive_seed(master, labels...));
}

}  // namespace cliffproxy
