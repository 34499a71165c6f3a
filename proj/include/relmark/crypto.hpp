#pragma once

#include "relmark/bitcodec.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relmark {

struct MacState;

/// Embedding key. At least 16 bytes. Copies share one keyed MAC context.
class SecretKey {
public:
    static constexpr std::size_t min_length = 16;

    explicit SecretKey(std::vector<std::uint8_t> bytes);
    /// Parses hexadecimal text (surrounding whitespace ignored, either case accepted).
    static SecretKey from_hex(std::string_view hex);

    std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
    std::string to_hex() const;

    const MacState& mac() const noexcept { return *mac_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::shared_ptr<const MacState> mac_;
};

using Digest = std::array<std::uint8_t, 32>;

/// Domain separation tags; every digest the scheme computes carries one.
enum class DomainTag : std::uint8_t {
    grouping = 0x01,
    attribute_key = 0x02,
    tuple_hash = 0x03,
    permutation_shift = 0x04,
};

/// HMAC-SHA-256 over `tag || for each part: be32(len) || part`.
Digest keyed_digest(const SecretKey& key, DomainTag tag,
                    std::span<const std::span<const std::uint8_t>> parts);
Digest keyed_digest(const SecretKey& key, DomainTag tag,
                    std::initializer_list<std::span<const std::uint8_t>> parts);

/// First 8 bytes of the digest as a big-endian integer.
std::uint64_t digest_to_uint(const Digest& digest) noexcept;

BitString digest_bits(const Digest& digest);

/// Canonical byte encodings fed to keyed_digest.
std::array<std::uint8_t, 8> encode_be64(std::uint64_t value) noexcept;
std::array<std::uint8_t, 4> encode_be32(std::uint32_t value) noexcept;

std::string to_hex(std::span<const std::uint8_t> bytes);

} // namespace relmark
