#include "relmark/grouping.hpp"

#include "relmark/errors.hpp"

#include <algorithm>

namespace relmark {

std::size_t assign_group(const SecretKey& key, std::size_t groups, std::span<const std::uint8_t> primary_key) {
    if (groups < 1) {
        throw ConfigError("number of groups must be at least 1");
    }
    const auto digest = keyed_digest(key, DomainTag::grouping, {primary_key});
    return static_cast<std::size_t>(digest_to_uint(digest) % groups);
}

std::size_t derive_shift(const SecretKey& key, std::size_t group_index, std::size_t columns) {
    if (columns < 2) {
        throw ConfigError("column permutation needs y >= 2");
    }
    if (columns == 2) {
        return 1;
    }
    const auto index = encode_be32(static_cast<std::uint32_t>(group_index));
    const std::uint64_t value = digest_to_uint(keyed_digest(key, DomainTag::permutation_shift, {index}));
    if (columns % 2 == 1) {
        return static_cast<std::size_t>(value % (columns - 1)) + 1;
    }
    // Even y: choose among the y - 2 shifts other than y/2, in increasing order.
    const std::size_t half = columns / 2;
    const std::size_t pick = static_cast<std::size_t>(value % (columns - 2)) + 1;
    return pick < half ? pick : pick + 1;
}

std::size_t permute_column(std::size_t column, std::size_t shift, std::size_t columns) {
    return ((column - 1 + shift) % columns) + 1;
}

std::size_t inverse_permute_column(std::size_t column, std::size_t shift, std::size_t columns) {
    return ((column - 1 + columns - shift % columns) % columns) + 1;
}

std::vector<Group> partition(const Table& table, const Params& params) {
    params.validate();
    std::vector<Group> groups(params.groups);
    for (std::size_t k = 0; k < groups.size(); ++k) {
        groups[k].index = k;
        groups[k].shift = derive_shift(params.key, k, table.column_count());
    }
    for (std::size_t row = 0; row < table.row_count(); ++row) {
        const auto bytes = canonical_bytes(table.key(row));
        groups[assign_group(params.key, params.groups, bytes)].members.push_back(row);
    }
    for (auto& group : groups) {
        std::sort(group.members.begin(), group.members.end(), [&table](std::size_t a, std::size_t b) {
            return canonical_less(table.key(a), table.key(b));
        });
    }
    return groups;
}

} // namespace relmark
