#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace tc {

// A set of players encoded as a bit pattern: bit i set <=> player i is a member.
// Players are 0-based internally; display helpers use the 1-based convention.
struct Coalition {
    std::uint32_t bits = 0;

    static Coalition empty() { return {0}; }
    static Coalition single(int player) { return {std::uint32_t{1} << player}; }
    static Coalition all(int n) { return {(std::uint32_t{1} << n) - 1}; }

    bool contains(int player) const { return (bits >> player) & 1u; }
    int size() const { return std::popcount(bits); }
    bool is_empty() const { return bits == 0; }

    Coalition with(int player) const { return {bits | (std::uint32_t{1} << player)}; }
    Coalition without(int player) const { return {bits & ~(std::uint32_t{1} << player)}; }
    bool subset_of(Coalition other) const { return (bits & ~other.bits) == 0; }
    bool disjoint_from(Coalition other) const { return (bits & other.bits) == 0; }

    friend bool operator==(Coalition a, Coalition b) { return a.bits == b.bits; }
    friend bool operator!=(Coalition a, Coalition b) { return a.bits != b.bits; }
};

// "{1,3}" with 1-based player labels; "{}" for the empty coalition.
std::string to_string(Coalition m);

// "0b101" style key, zero-padded to n digits, most significant player last... i.e.
// the plain binary numeral of the mask (player n on the left, player 1 on the right).
std::string to_mask_literal(Coalition m, int n);

// Inverse of to_mask_literal; throws std::invalid_argument on malformed input.
Coalition coalition_from_mask_literal(const std::string& text);

}  // namespace tc
