#include "hashgraph/types.hpp"

#include "hashgraph/errors.hpp"

namespace hashgraph {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace

std::string to_hex(const Digest& d) {
    std::string out;
    out.reserve(d.size() * 2);
    for (std::uint8_t b : d) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xf]);
    }
    return out;
}

std::string short_hex(const Digest& d, std::size_t bytes) {
    std::string out;
    for (std::size_t i = 0; i < bytes && i < d.size(); ++i) {
        out.push_back(kHexDigits[d[i] >> 4]);
        out.push_back(kHexDigits[d[i] & 0xf]);
    }
    return out;
}

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xf]);
    }
    return out;
}

std::optional<std::vector<std::uint8_t>> bytes_from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::optional<Digest> digest_from_hex(std::string_view hex) {
    Digest d{};
    if (hex.size() != d.size() * 2) return std::nullopt;
    for (std::size_t i = 0; i < d.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        d[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return d;
}

const char* to_string(InsertError e) {
    switch (e) {
        case InsertError::duplicate_id: return "duplicate-id";
        case InsertError::missing_parent: return "missing-parent";
        case InsertError::bad_hash: return "bad-hash";
        case InsertError::creator_mismatch: return "creator-mismatch";
        case InsertError::invalid_parents: return "invalid-parents";
    }
    return "?";
}

void ProtocolParams::validate() const {
    if (n_peers < 2) throw ConfigError("n_peers must be at least 2");
    if (d < 1) throw ConfigError("d must be at least 1");
    if (c < d + 3) throw ConfigError("c must be at least d + 3");
}

} // namespace hashgraph
