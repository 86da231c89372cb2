#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hashgraph {

using PeerId = std::uint32_t;
using EventIndex = std::uint32_t;

// Content address of an event: 256-bit digest of its canonical serialization.
using Digest = std::array<std::uint8_t, 32>;
using EventId = Digest;

std::string to_hex(const Digest& d);
std::string short_hex(const Digest& d, std::size_t bytes = 4);
std::optional<Digest> digest_from_hex(std::string_view hex);

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes);
std::optional<std::vector<std::uint8_t>> bytes_from_hex(std::string_view hex);

// More than two-thirds.
constexpr bool supermajor(std::uint64_t count, std::uint64_t total) {
    return 3 * count > 2 * total;
}

// At least one-third: large enough to deny the complement a supermajority.
constexpr bool superminor(std::uint64_t count, std::uint64_t total) {
    return 3 * count >= total;
}

struct ProtocolParams {
    std::uint32_t n_peers = 4;
    std::uint32_t d = 1; // offset of the first regular voting round
    std::uint32_t c = 4; // coin round frequency, must be >= d + 3

    void validate() const; // throws ConfigError
};

struct DigestHash {
    std::size_t operator()(const Digest& d) const {
        std::uint64_t v;
        static_assert(sizeof v <= sizeof(Digest));
        __builtin_memcpy(&v, d.data(), sizeof v);
        return static_cast<std::size_t>(v);
    }
};

} // namespace hashgraph
