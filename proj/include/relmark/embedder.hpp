#pragma once

#include "relmark/crypto.hpp"
#include "relmark/table.hpp"

#include <cstddef>
#include <span>

namespace relmark {

/// v-bit key material mixed into the attribute watermark of (group, column).
BitString attribute_key_material(const SecretKey& key, std::size_t group_index, std::size_t column,
                                 std::size_t length);

/// W1 of a 0-based column: key material XOR the v-bit folds of the column's masked words.
BitString attribute_watermark(const SecretKey& key, const GroupCells& cells, std::size_t column);

/// W2 of one row: the first y bits (repeated if needed) of the keyed digest of the
/// row's masked words in column order. The primary key is not part of the input.
BitString tuple_watermark(const SecretKey& key, std::span<const CellWord> row);

/// Every W1 and W2 of the group, computed from masked words only.
WatermarkSet compute_watermarks(const SecretKey& key, const GroupCells& cells);

/// Writes W1^j(i) into bit 0 of cell (i, p(j)) and W2^i(j) into bit 1 of cell (i, j).
/// All watermarks are computed before the first write.
void embed_group(GroupCells& cells, const SecretKey& key);

struct EmbedSummary {
    std::size_t groups = 0;
    std::size_t empty_groups = 0;
    std::size_t min_group_size = 0;
    std::size_t max_group_size = 0;
    std::size_t cells_changed = 0;
    /// Largest |decoded(out) - decoded(in)| in units of the last retained digit.
    std::uint64_t max_distortion_units = 0;
};

struct EmbedResult {
    Table table;
    EmbedSummary summary;
};

EmbedResult embed_table(const Table& table, const Params& params);

} // namespace relmark
