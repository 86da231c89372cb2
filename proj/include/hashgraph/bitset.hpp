#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hashgraph {

// Word-backed bitset sized per use site. Mixed-length operands are fine:
// missing high words are treated as zero.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    void resize(std::size_t bits) {
        bits_ = bits;
        words_.resize((bits + 63) / 64, 0);
    }

    std::size_t size() const { return bits_; }

    void set(std::size_t i) {
        std::size_t w = i >> 6;
        if (w >= words_.size()) resize(i + 1);
        words_[w] |= std::uint64_t{1} << (i & 63);
        if (i >= bits_) bits_ = i + 1;
    }

    bool test(std::size_t i) const {
        std::size_t w = i >> 6;
        if (w >= words_.size()) return false;
        return (words_[w] >> (i & 63)) & 1;
    }

    Bitset& operator|=(const Bitset& o) {
        if (o.words_.size() > words_.size()) resize(o.bits_);
        for (std::size_t w = 0; w < o.words_.size(); ++w) words_[w] |= o.words_[w];
        if (o.bits_ > bits_) bits_ = o.bits_;
        return *this;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    bool is_subset_of(const Bitset& o) const {
        std::size_t common = std::min(words_.size(), o.words_.size());
        for (std::size_t w = 0; w < common; ++w)
            if (words_[w] & ~o.words_[w]) return false;
        for (std::size_t w = common; w < words_.size(); ++w)
            if (words_[w]) return false;
        return true;
    }

    bool intersects(const Bitset& o) const {
        std::size_t common = std::min(words_.size(), o.words_.size());
        for (std::size_t w = 0; w < common; ++w)
            if (words_[w] & o.words_[w]) return true;
        return false;
    }

    static bool intersects3(const Bitset& a, const Bitset& b, const Bitset& c) {
        std::size_t common = std::min({a.words_.size(), b.words_.size(), c.words_.size()});
        for (std::size_t w = 0; w < common; ++w)
            if (a.words_[w] & b.words_[w] & c.words_[w]) return true;
        return false;
    }

    template <typename F>
    void for_each_set(F f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(w));
                f(wi * 64 + bit);
                w &= w - 1;
            }
        }
    }

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace hashgraph
