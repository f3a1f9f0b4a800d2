#pragma once

#include <cstdint>
#include <random>

namespace dbar {

// One 64-bit seed, split into independent named streams. Streams depend only
// on (seed, stream id), never on how many draws other streams made.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::mt19937_64 stream(std::uint64_t id) const {
        std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                          static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
        return std::mt19937_64(seq);
    }

    SplitRng split(std::uint64_t id) const {
        auto g = stream(id);
        return SplitRng(g());
    }

private:
    std::uint64_t seed_;
};

}  // namespace dbar
