#pragma once

#include "relmark/crypto.hpp"
#include "relmark/table.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace relmark {

/// Group index in [0, g) of a row, from its canonical primary-key bytes.
std::size_t assign_group(const SecretKey& key, std::size_t groups, std::span<const std::uint8_t> primary_key);

/// Keyed per-group shift s of the column permutation, in [1, y-1].
///
/// For even y the half-turn s = y/2 is skipped: it makes p an involution, and then
/// a tampered cell whose bit 0 also flipped fails both c and p(c) = p^-1(c), which
/// the disambiguation pass would clear together. y = 2 leaves no choice but s = 1.
std::size_t derive_shift(const SecretKey& key, std::size_t group_index, std::size_t columns);

/// p(j) = ((j - 1 + s) mod y) + 1 on 1-based column indices.
std::size_t permute_column(std::size_t column, std::size_t shift, std::size_t columns);
/// p^-1(j) = ((j - 1 - s) mod y) + 1.
std::size_t inverse_permute_column(std::size_t column, std::size_t shift, std::size_t columns);

/// All g groups (some possibly empty), members sorted by primary key. Physical row
/// order of the table is not touched.
std::vector<Group> partition(const Table& table, const Params& params);

} // namespace relmark
