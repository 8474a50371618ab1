#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cvlt/aes.hpp"
#include "cvlt/drbg.hpp"

namespace testing {

// Fixed-seed generator for test inputs; independent of the library DRBG.
inline std::mt19937_64& gen() {
    static std::mt19937_64 g(0x5eed1234abcdULL);
    return g;
}

inline std::vector<std::uint8_t> random_bytes(std::size_t n) {
    std::uniform_int_distribution<int> dist(0, 255);
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(dist(gen()));
    return out;
}

inline std::size_t random_size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen());
}

inline cvlt::aes::Block random_block() {
    cvlt::aes::Block b;
    auto v = random_bytes(16);
    std::copy(v.begin(), v.end(), b.begin());
    return b;
}

inline cvlt::aes::AesState random_state() { return cvlt::aes::bytes_to_state(random_block()); }

inline int popcount_diff(const cvlt::aes::Block& a, const cvlt::aes::Block& b) {
    int bits = 0;
    for (std::size_t i = 0; i < a.size(); ++i) bits += __builtin_popcount(a[i] ^ b[i]);
    return bits;
}

// Deterministic library DRBG for tests that need one.
inline cvlt::rng::Drbg test_drbg(std::uint8_t tag = 0) {
    std::vector<std::uint8_t> seed(48);
    for (std::size_t i = 0; i < seed.size(); ++i) seed[i] = static_cast<std::uint8_t>(i * 7 + tag);
    return cvlt::rng::Drbg::seed(seed);
}

}  // namespace testing
