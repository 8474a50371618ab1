#include "cvlt/drbg.hpp"

#include <sys/random.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <string>
#include <utility>

#include "cvlt/error.hpp"
#include "cvlt/modes.hpp"

namespace cvlt::rng {

void OsEntropy::fill(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
        const ssize_t got = ::getrandom(out.data() + done, out.size() - done, 0);
        if (got < 0) {
            if (errno == EINTR) continue;
            throw Error(Errc::seeding, std::string("getrandom failed: ") + std::strerror(errno));
        }
        done += static_cast<std::size_t>(got);
    }
}

FixedEntropy::FixedEntropy(Bytes seed) : seed_(std::move(seed)) {
    if (seed_.empty()) throw Error(Errc::seeding, "fixed entropy source is empty");
}

void FixedEntropy::fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
        b = seed_[pos_];
        pos_ = (pos_ + 1) % seed_.size();
    }
}

namespace {

struct SeedParts {
    aes::KeySchedule ks;
    aes::Block counter;
};

SeedParts split_seed(ByteView entropy) {
    if (entropy.size() < kSeedBytes)
        throw Error(Errc::seeding, "DRBG needs at least 48 bytes of entropy, got " + std::to_string(entropy.size()));
    aes::Block counter;
    std::copy_n(entropy.begin() + 32, 16, counter.begin());
    return {aes::expand_key(entropy.first(32), aes::KeySize::aes256), counter};
}

}  // namespace

Drbg Drbg::seed(ByteView entropy, std::uint64_t reseed_interval) {
    auto parts = split_seed(entropy);
    return Drbg(parts.ks, parts.counter, reseed_interval);
}

Drbg Drbg::from_source(EntropySource& source, std::uint64_t reseed_interval) {
    Bytes entropy(kSeedBytes);
    source.fill(entropy);
    return seed(entropy, reseed_interval);
}

void Drbg::reseed(ByteView entropy) {
    auto parts = split_seed(entropy);
    ks_ = parts.ks;
    counter_ = parts.counter;
    blocks_ = 0;
    bytes_emitted_ = 0;
}

void Drbg::fill(std::span<std::uint8_t> out) {
    const std::uint64_t needed = (out.size() + aes::kBlockSize - 1) / aes::kBlockSize;
    if (needed > reseed_interval_ - blocks_) throw Error(Errc::reseed_required, "DRBG must be reseeded");
    for (std::size_t off = 0; off < out.size(); off += aes::kBlockSize) {
        const aes::Block block = aes::encrypt_block(counter_, ks_);
        modes::increment_be128(counter_);
        ++blocks_;
        const std::size_t n = std::min(aes::kBlockSize, out.size() - off);
        std::copy_n(block.begin(), n, out.begin() + static_cast<std::ptrdiff_t>(off));
    }
    bytes_emitted_ += out.size();
}

Bytes Drbg::generate(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

}  // namespace cvlt::rng
