// bid.hpp

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qsa/rng.hpp"

namespace qsa {

// Fixed-length bit string, compared as an unsigned big-endian integer
// (leftmost bit most significant).
class Bid {
public:
    Bid() = default;

    explicit Bid(std::string bits) : bits_(std::move(bits)) {
        for (const char c : bits_) {
            if (c != '0' && c != '1') {
                throw std::invalid_argument("bid must be a 0/1 string: " + bits_);
            }
        }
    }

    static Bid random(std::size_t length, RngStream& rng) {
        std::string s(length, '0');
        for (auto& c : s) c = rng.uniform_int(2) ? '1' : '0';
        return Bid(s);
    }

    const std::string& bits() const { return bits_; }
    std::size_t length() const { return bits_.size(); }
    int bit(std::size_t i) const { return bits_.at(i) - '0'; }

    std::uint64_t value() const {
        std::uint64_t v = 0;
        for (const char c : bits_) v = (v << 1) | static_cast<std::uint64_t>(c - '0');
        return v;
    }

    friend bool operator==(const Bid&, const Bid&) = default;

private:
    std::string bits_;
};

} // namespace qsa
