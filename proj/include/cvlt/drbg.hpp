#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "cvlt/aes.hpp"
#include "cvlt/bytes.hpp"

namespace cvlt::rng {

// Where seed material comes from. Tests inject fixed bytes; everything else
// reads the operating system.
class EntropySource {
public:
    virtual ~EntropySource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
};

class OsEntropy final : public EntropySource {
public:
    void fill(std::span<std::uint8_t> out) override;
};

// Replays a fixed buffer, cycling if more is requested than it holds.
class FixedEntropy final : public EntropySource {
public:
    explicit FixedEntropy(Bytes seed);
    void fill(std::span<std::uint8_t> out) override;

private:
    Bytes seed_;
    std::size_t pos_ = 0;
};

inline constexpr std::size_t kSeedBytes = 48;
inline constexpr std::uint64_t kDefaultReseedInterval = std::uint64_t{1} << 20;

// AES-256 in counter mode. Key is the first 32 seed bytes, the initial
// counter block the next 16. Each generate() call consumes whole counter
// blocks and drops any unused tail, so no counter value is ever encrypted
// twice within one seeding.
//
// Move-only: copying would fork two identical streams.
class Drbg {
public:
    // Throws Errc::seeding when entropy holds fewer than 48 bytes.
    static Drbg seed(ByteView entropy, std::uint64_t reseed_interval = kDefaultReseedInterval);
    static Drbg from_source(EntropySource& source, std::uint64_t reseed_interval = kDefaultReseedInterval);

    Drbg(Drbg&&) noexcept = default;
    Drbg& operator=(Drbg&&) noexcept = default;
    Drbg(const Drbg&) = delete;
    Drbg& operator=(const Drbg&) = delete;

    // Throws Errc::reseed_required if the request would push the block count
    // past the reseed interval.
    Bytes generate(std::size_t n);
    void fill(std::span<std::uint8_t> out);

    // Starts a new epoch: fresh key and counter, block count back to zero.
    void reseed(ByteView entropy);

    const aes::Block& counter() const noexcept { return counter_; }
    std::uint64_t blocks_generated() const noexcept { return blocks_; }
    std::uint64_t bytes_emitted() const noexcept { return bytes_emitted_; }
    std::uint64_t reseed_interval() const noexcept { return reseed_interval_; }

private:
    Drbg(const aes::KeySchedule& ks, const aes::Block& counter, std::uint64_t reseed_interval)
        : ks_(ks), counter_(counter), reseed_interval_(reseed_interval) {}

    aes::KeySchedule ks_;
    aes::Block counter_;
    std::uint64_t reseed_interval_;
    std::uint64_t blocks_ = 0;
    std::uint64_t bytes_emitted_ = 0;
};

}  // namespace cvlt::rng
