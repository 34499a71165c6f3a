#include "relmark/crypto.hpp"

#include "relmark/errors.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/params.h>

#include <cctype>

namespace relmark {

/// HMAC-SHA-256 context with the key already absorbed; duplicated per digest.
struct MacState {
    EVP_MAC* mac = nullptr;
    EVP_MAC_CTX* keyed = nullptr;

    explicit MacState(std::span<const std::uint8_t> key) {
        mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
        keyed = mac != nullptr ? EVP_MAC_CTX_new(mac) : nullptr;
        char digest_name[] = "SHA256";
        const OSSL_PARAM params[] = {
            OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
            OSSL_PARAM_construct_end(),
        };
        if (keyed == nullptr || EVP_MAC_init(keyed, key.data(), key.size(), params) != 1) {
            release();
            throw Error("cannot initialise HMAC-SHA-256");
        }
    }
    MacState(const MacState&) = delete;
    MacState& operator=(const MacState&) = delete;
    ~MacState() { release(); }

    void release() noexcept {
        EVP_MAC_CTX_free(keyed);
        EVP_MAC_free(mac);
        keyed = nullptr;
        mac = nullptr;
    }
};

namespace {

struct MacCtxDeleter {
    void operator()(EVP_MAC_CTX* ctx) const noexcept { EVP_MAC_CTX_free(ctx); }
};

int hex_value(char c) {
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower >= 'a' && lower <= 'f') {
        return lower - 'a' + 10;
    }
    return -1;
}

} // namespace

SecretKey::SecretKey(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
    if (bytes_.size() < min_length) {
        throw KeyError("secret key must be at least " + std::to_string(min_length) +
                       " bytes, got " + std::to_string(bytes_.size()));
    }
    mac_ = std::make_shared<const MacState>(bytes_);
}

SecretKey SecretKey::from_hex(std::string_view hex) {
    while (!hex.empty() && std::isspace(static_cast<unsigned char>(hex.front()))) {
        hex.remove_prefix(1);
    }
    while (!hex.empty() && std::isspace(static_cast<unsigned char>(hex.back()))) {
        hex.remove_suffix(1);
    }
    if (hex.size() % 2 != 0) {
        throw KeyError("hex key has an odd number of digits");
    }
    std::vector<std::uint8_t> bytes;
    bytes.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw KeyError("hex key contains a non-hex character");
        }
        bytes.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
    }
    return SecretKey(std::move(bytes));
}

std::string SecretKey::to_hex() const { return relmark::to_hex(bytes_); }

Digest keyed_digest(const SecretKey& key, DomainTag tag,
                    std::span<const std::span<const std::uint8_t>> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("keyed_digest needs at least one part");
    }
    std::size_t total = 1;
    for (const auto& part : parts) {
        total += 4 + part.size();
    }
    std::vector<std::uint8_t> payload;
    payload.reserve(total);
    payload.push_back(static_cast<std::uint8_t>(tag));
    for (const auto& part : parts) {
        const auto length = encode_be32(static_cast<std::uint32_t>(part.size()));
        payload.insert(payload.end(), length.begin(), length.end());
        payload.insert(payload.end(), part.begin(), part.end());
    }

    Digest out{};
    std::size_t out_length = 0;
    const std::unique_ptr<EVP_MAC_CTX, MacCtxDeleter> ctx(EVP_MAC_CTX_dup(key.mac().keyed));
    if (!ctx || EVP_MAC_update(ctx.get(), payload.data(), payload.size()) != 1 ||
        EVP_MAC_final(ctx.get(), out.data(), &out_length, out.size()) != 1 || out_length != out.size()) {
        throw Error("HMAC-SHA-256 computation failed");
    }
    return out;
}

Digest keyed_digest(const SecretKey& key, DomainTag tag,
                    std::initializer_list<std::span<const std::uint8_t>> parts) {
    return keyed_digest(key, tag, std::span<const std::span<const std::uint8_t>>(parts.begin(), parts.size()));
}

std::uint64_t digest_to_uint(const Digest& digest) noexcept {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        value = (value << 8) | digest[i];
    }
    return value;
}

BitString digest_bits(const Digest& digest) { return BitString::from_bytes(digest); }

std::array<std::uint8_t, 8> encode_be64(std::uint64_t value) noexcept {
    std::array<std::uint8_t, 8> out{};
    for (std::size_t i = 0; i < 8; ++i) {
        out[7 - i] = static_cast<std::uint8_t>(value >> (8 * i));
    }
    return out;
}

std::array<std::uint8_t, 4> encode_be32(std::uint32_t value) noexcept {
    std::array<std::uint8_t, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[3 - i] = static_cast<std::uint8_t>(value >> (8 * i));
    }
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const auto byte : bytes) {
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0x0F]);
    }
    return out;
}

} // namespace relmark
