#include "hashgraph/event.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace hashgraph {

namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64_be(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_digest(std::vector<std::uint8_t>& out, const std::optional<EventId>& id) {
    if (id) {
        out.insert(out.end(), id->begin(), id->end());
    } else {
        out.insert(out.end(), 32, 0); // absent parent: all-zero sentinel
    }
}

std::vector<std::uint8_t> serialize(PeerId creator, const std::optional<EventId>& sp,
                                    const std::optional<EventId>& op, std::uint64_t ts,
                                    std::span<const std::uint8_t> payload) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 32 + 32 + 8 + 8 + payload.size());
    put_u32_be(out, creator);
    put_digest(out, sp);
    put_digest(out, op);
    put_u64_be(out, ts);
    put_u64_be(out, payload.size());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

} // namespace

Digest sha256(std::span<const std::uint8_t> bytes) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
        throw std::runtime_error("sha256 failed");
    return out;
}

std::vector<std::uint8_t> Event::canonical_bytes() const {
    return serialize(creator, self_parent, other_parent, timestamp, payload);
}

bool Event::id_matches() const {
    return id == compute_id(creator, self_parent, other_parent, timestamp, payload);
}

EventId Event::compute_id(PeerId creator, const std::optional<EventId>& self_parent,
                          const std::optional<EventId>& other_parent, std::uint64_t timestamp,
                          std::span<const std::uint8_t> payload) {
    return sha256(serialize(creator, self_parent, other_parent, timestamp, payload));
}

Event Event::make(PeerId creator, std::optional<EventId> self_parent,
                  std::optional<EventId> other_parent, std::uint64_t timestamp,
                  std::vector<std::uint8_t> payload) {
    Event e;
    e.creator = creator;
    e.self_parent = std::move(self_parent);
    e.other_parent = std::move(other_parent);
    e.timestamp = timestamp;
    e.payload = std::move(payload);
    e.id = compute_id(e.creator, e.self_parent, e.other_parent, e.timestamp, e.payload);
    return e;
}

bool coin(const Event& e) {
    return (e.id[16] & 0x80) != 0;
}

} // namespace hashgraph
