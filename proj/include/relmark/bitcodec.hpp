#pragma once

// Cell word encoding and the bit-level primitives shared by embedding,
// verification and recovery.
//
// A cell word is a W-bit unsigned integer. Bit 0 carries the attribute
// watermark, bit 1 the tuple watermark, and bits >= 2 the data. Signed
// values are stored in two's complement modulo 2^W.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relmark {

using CellWord = std::uint64_t;

enum class ColumnKind { integer, decimal };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::integer;
    unsigned scale = 0;       // decimal digits folded into the integer representation
    unsigned width_bits = 32; // W

    /// Throws ConfigError unless 3 <= W <= 64, scale fits W and integer columns have scale 0.
    void validate() const;
};

/// Exact decimal value `units * 10^-scale`.
struct Decimal {
    std::int64_t units = 0;
    unsigned scale = 0;

    /// Canonical text: exactly `scale` fractional digits, leading '-' for negatives.
    std::string to_string() const;

    friend bool operator==(const Decimal&, const Decimal&) = default;
};

/// Encodes decimal text ("7", "-1", "1.25") into a cell word. Fractional digits beyond
/// the column scale must be zero; the scaled value must fit the signed W-bit range.
CellWord encode_cell(std::string_view raw, const ColumnSpec& spec);

/// Encodes an already-scaled integer (`units = raw * 10^scale`).
CellWord encode_units(std::int64_t units, const ColumnSpec& spec);

/// Inverse of encode_cell. Bit W-1 is the sign bit.
Decimal decode_cell(CellWord word, const ColumnSpec& spec);

/// Largest word representable in `width_bits` bits.
constexpr CellWord word_mask(unsigned width_bits) noexcept {
    return width_bits >= 64 ? ~CellWord{0} : ((CellWord{1} << width_bits) - 1);
}

/// Clears the two watermark bits.
constexpr CellWord mask(CellWord word) noexcept { return word & ~CellWord{3}; }

constexpr bool get_bit(CellWord word, unsigned position) noexcept {
    return ((word >> position) & 1U) != 0;
}

constexpr CellWord set_bit(CellWord word, unsigned position, bool bit) noexcept {
    return (word & ~(CellWord{1} << position)) | (CellWord{bit} << position);
}

/// Fixed-length bit string, most significant bit first.
///
/// Position 0 is the most significant bit; a string of length L is the big-endian
/// rendering of an L-bit unsigned integer, which is how folds and XOR accumulators
/// are combined with it.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t length);

    /// L-bit rendering of `value`; bits of `value` at or above L are dropped.
    static BitString from_uint(std::uint64_t value, std::size_t length);
    static BitString from_bytes(std::span<const std::uint8_t> bytes);
    /// Parses a string of '0' and '1'.
    static BitString parse(std::string_view text);

    std::size_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }

    bool operator[](std::size_t position) const;
    void set(std::size_t position, bool bit);

    /// XORs `value` into the least significant 64 bits (the tail of the string).
    /// Bits of `value` that do not fit in the string are ignored.
    void xor_low(std::uint64_t value) noexcept;

    BitString& operator^=(const BitString& other);
    friend BitString operator^(BitString lhs, const BitString& rhs) { return lhs ^= rhs; }

    /// Integer value of the last min(64, L) bits.
    std::uint64_t low_word() const noexcept;
    /// True when the integer value is below 2^bits.
    bool below_power_of_two(unsigned bits) const noexcept;
    std::size_t hamming_distance(const BitString& other) const;
    std::string to_string() const;

    friend bool operator==(const BitString& lhs, const BitString& rhs) = default;

private:
    std::size_t length_ = 0;
    // Integer bit b lives in words_[b / 64] at bit b % 64; position p is integer bit L-1-p.
    std::vector<std::uint64_t> words_;
};

/// XOR of the consecutive L-bit chunks of `word` from the least significant end,
/// as an integer. The identity when word < 2^L, and the word itself for L >= 64.
std::uint64_t fold_value(CellWord word, std::size_t length) noexcept;

/// fold_value rendered as a BitString of length L.
BitString fold(CellWord word, std::size_t length);

/// The L most significant bits of H, repeating H from its start when L > |H|.
BitString extract_bits(const BitString& source, std::size_t length);

} // namespace relmark
