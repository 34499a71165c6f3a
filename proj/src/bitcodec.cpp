#include "relmark/bitcodec.hpp"

#include "relmark/errors.hpp"

#include <bit>
#include <cctype>
#include <limits>

namespace relmark {

namespace {

__extension__ using Wide = __int128;

Wide pow10_wide(unsigned exponent) {
    Wide value = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        value *= 10;
    }
    return value;
}

Wide signed_min(unsigned width_bits) { return -(Wide{1} << (width_bits - 1)); }
Wide signed_max(unsigned width_bits) { return (Wide{1} << (width_bits - 1)) - 1; }

CellWord to_word(Wide units, const ColumnSpec& spec) {
    if (units < signed_min(spec.width_bits) || units > signed_max(spec.width_bits)) {
        throw CodecError("value overflows " + std::to_string(spec.width_bits) + "-bit column '" +
                         spec.name + "'");
    }
    return static_cast<CellWord>(static_cast<std::uint64_t>(static_cast<std::int64_t>(units))) &
           word_mask(spec.width_bits);
}

} // namespace

void ColumnSpec::validate() const {
    if (width_bits < 3 || width_bits > 64) {
        throw ConfigError("column '" + name + "': width_bits must be in [3, 64], got " +
                          std::to_string(width_bits));
    }
    if (kind == ColumnKind::integer && scale != 0) {
        throw ConfigError("column '" + name + "': integer columns cannot have a scale");
    }
    // 10^scale must be representable so that a single unit is encodable.
    if (scale > 18) {
        throw ConfigError("column '" + name + "': scale must be at most 18");
    }
}

std::string Decimal::to_string() const {
    const bool negative = units < 0;
    // Magnitude via unsigned arithmetic so INT64_MIN is handled.
    std::uint64_t magnitude = negative ? (~static_cast<std::uint64_t>(units) + 1)
                                       : static_cast<std::uint64_t>(units);
    std::string digits = std::to_string(magnitude);
    if (scale > 0) {
        if (digits.size() <= scale) {
            digits.insert(0, scale + 1 - digits.size(), '0');
        }
        digits.insert(digits.size() - scale, 1, '.');
    }
    return negative ? "-" + digits : digits;
}

CellWord encode_cell(std::string_view raw, const ColumnSpec& spec) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < raw.size() && (raw[pos] == '-' || raw[pos] == '+')) {
        negative = raw[pos] == '-';
        ++pos;
    }

    const Wide limit = Wide{1} << 64;
    Wide units = 0;
    std::size_t int_digits = 0;
    for (; pos < raw.size() && std::isdigit(static_cast<unsigned char>(raw[pos])); ++pos) {
        units = units * 10 + (raw[pos] - '0');
        ++int_digits;
        if (units > limit) {
            throw CodecError("value '" + std::string(raw) + "' overflows column '" + spec.name + "'");
        }
    }

    std::size_t frac_digits = 0;
    if (pos < raw.size() && raw[pos] == '.') {
        ++pos;
        for (; pos < raw.size() && std::isdigit(static_cast<unsigned char>(raw[pos])); ++pos) {
            const int digit = raw[pos] - '0';
            if (frac_digits < spec.scale) {
                units = units * 10 + digit;
            } else if (digit != 0) {
                throw CodecError("value '" + std::string(raw) + "' has more than " +
                                 std::to_string(spec.scale) + " fractional digits in column '" +
                                 spec.name + "'");
            }
            ++frac_digits;
        }
    }

    if (pos != raw.size() || (int_digits == 0 && frac_digits == 0)) {
        throw CodecError("'" + std::string(raw) + "' is not a decimal number");
    }
    if (frac_digits < spec.scale) {
        units *= pow10_wide(spec.scale - static_cast<unsigned>(frac_digits));
    }
    return to_word(negative ? -units : units, spec);
}

CellWord encode_units(std::int64_t units, const ColumnSpec& spec) {
    return to_word(Wide{units}, spec);
}

Decimal decode_cell(CellWord word, const ColumnSpec& spec) {
    word &= word_mask(spec.width_bits);
    std::int64_t units = 0;
    if (spec.width_bits < 64 && get_bit(word, spec.width_bits - 1)) {
        units = static_cast<std::int64_t>(word | ~word_mask(spec.width_bits));
    } else {
        units = static_cast<std::int64_t>(word);
    }
    return Decimal{units, spec.scale};
}

BitString::BitString(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

BitString BitString::from_uint(std::uint64_t value, std::size_t length) {
    BitString out(length);
    if (length == 0) {
        return out;
    }
    if (length < 64) {
        value &= (std::uint64_t{1} << length) - 1;
    }
    out.words_[0] = value;
    return out;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes) {
    BitString out(bytes.size() * 8);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        for (unsigned bit = 0; bit < 8; ++bit) {
            out.set(i * 8 + bit, ((bytes[i] >> (7 - bit)) & 1U) != 0);
        }
    }
    return out;
}

BitString BitString::parse(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '0' && text[i] != '1') {
            throw ParseError("bit string may only contain '0' and '1'");
        }
        out.set(i, text[i] == '1');
    }
    return out;
}

bool BitString::operator[](std::size_t position) const {
    const std::size_t b = length_ - 1 - position;
    return ((words_[b / 64] >> (b % 64)) & 1U) != 0;
}

void BitString::set(std::size_t position, bool bit) {
    const std::size_t b = length_ - 1 - position;
    const std::uint64_t flag = std::uint64_t{1} << (b % 64);
    if (bit) {
        words_[b / 64] |= flag;
    } else {
        words_[b / 64] &= ~flag;
    }
}

void BitString::xor_low(std::uint64_t value) noexcept {
    if (length_ == 0) {
        return;
    }
    if (length_ < 64) {
        value &= (std::uint64_t{1} << length_) - 1;
    }
    words_[0] ^= value;
}

BitString& BitString::operator^=(const BitString& other) {
    if (other.length_ != length_) {
        throw std::invalid_argument("BitString XOR of unequal lengths");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

std::uint64_t BitString::low_word() const noexcept { return words_.empty() ? 0 : words_[0]; }

bool BitString::below_power_of_two(unsigned bits) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        const std::size_t first = i * 64;
        if (first + 64 <= bits) {
            continue;
        }
        std::uint64_t high = words_[i];
        if (bits > first) {
            high >>= (bits - first);
        }
        if (high != 0) {
            return false;
        }
    }
    return true;
}

std::size_t BitString::hamming_distance(const BitString& other) const {
    if (other.length_ != length_) {
        throw std::invalid_argument("BitString distance of unequal lengths");
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        count += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
    }
    return count;
}

std::string BitString::to_string() const {
    std::string out(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if ((*this)[i]) {
            out[i] = '1';
        }
    }
    return out;
}

std::uint64_t fold_value(CellWord word, std::size_t length) noexcept {
    if (length >= 64) {
        return word;
    }
    const std::uint64_t chunk_mask = (std::uint64_t{1} << length) - 1;
    std::uint64_t folded = 0;
    while (word != 0) {
        folded ^= word & chunk_mask;
        word >>= length;
    }
    return folded;
}

BitString fold(CellWord word, std::size_t length) {
    return BitString::from_uint(fold_value(word, length), length);
}

BitString extract_bits(const BitString& source, std::size_t length) {
    if (source.empty()) {
        throw std::invalid_argument("extract_bits needs a non-empty source");
    }
    BitString out(length);
    for (std::size_t i = 0; i < length; ++i) {
        out.set(i, source[i % source.size()]);
    }
    return out;
}

} // namespace relmark
