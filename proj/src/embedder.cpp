#include "relmark/embedder.hpp"

#include "relmark/grouping.hpp"

#include <algorithm>
#include <limits>

namespace relmark {

BitString attribute_key_material(const SecretKey& key, std::size_t group_index, std::size_t column,
                                 std::size_t length) {
    const auto group_bytes = encode_be32(static_cast<std::uint32_t>(group_index));
    const auto column_bytes = encode_be32(static_cast<std::uint32_t>(column + 1));
    const auto digest = keyed_digest(key, DomainTag::attribute_key, {group_bytes, column_bytes});
    return extract_bits(digest_bits(digest), length);
}

BitString attribute_watermark(const SecretKey& key, const GroupCells& cells, std::size_t column) {
    BitString watermark = attribute_key_material(key, cells.index, column, cells.rows);
    for (std::size_t i = 0; i < cells.rows; ++i) {
        watermark.xor_low(fold_value(mask(cells.at(i, column)), cells.rows));
    }
    return watermark;
}

BitString tuple_watermark(const SecretKey& key, std::span<const CellWord> row) {
    std::vector<std::array<std::uint8_t, 8>> encoded;
    encoded.reserve(row.size());
    for (const auto word : row) {
        encoded.push_back(encode_be64(mask(word)));
    }
    std::vector<std::span<const std::uint8_t>> parts(encoded.begin(), encoded.end());
    const auto digest = keyed_digest(key, DomainTag::tuple_hash, parts);
    return extract_bits(digest_bits(digest), row.size());
}

WatermarkSet compute_watermarks(const SecretKey& key, const GroupCells& cells) {
    WatermarkSet set;
    set.attribute.reserve(cells.columns);
    for (std::size_t j = 0; j < cells.columns; ++j) {
        set.attribute.push_back(attribute_watermark(key, cells, j));
    }
    set.tuple.reserve(cells.rows);
    for (std::size_t i = 0; i < cells.rows; ++i) {
        set.tuple.push_back(tuple_watermark(key, cells.row(i)));
    }
    return set;
}

void embed_group(GroupCells& cells, const SecretKey& key) {
    if (cells.rows == 0) {
        return;
    }
    const WatermarkSet watermarks = compute_watermarks(key, cells);
    for (std::size_t j = 0; j < cells.columns; ++j) {
        const std::size_t target = cells.target_column(j);
        for (std::size_t i = 0; i < cells.rows; ++i) {
            cells.at(i, target) = set_bit(cells.at(i, target), 0, watermarks.attribute[j][i]);
        }
    }
    for (std::size_t i = 0; i < cells.rows; ++i) {
        for (std::size_t j = 0; j < cells.columns; ++j) {
            cells.at(i, j) = set_bit(cells.at(i, j), 1, watermarks.tuple[i][j]);
        }
    }
}

EmbedResult embed_table(const Table& table, const Params& params) {
    EmbedResult result{table, {}};
    const auto groups = partition(table, params);

    auto& summary = result.summary;
    summary.groups = groups.size();
    summary.min_group_size = std::numeric_limits<std::size_t>::max();
    for (const auto& group : groups) {
        summary.min_group_size = std::min(summary.min_group_size, group.size());
        summary.max_group_size = std::max(summary.max_group_size, group.size());
        if (group.size() == 0) {
            ++summary.empty_groups;
            continue;
        }
        GroupCells cells = GroupCells::gather(table, group);
        embed_group(cells, params.key);
        cells.scatter(result.table, group);
    }
    if (groups.empty()) {
        summary.min_group_size = 0;
    }

    const auto& columns = table.schema().columns;
    for (std::size_t row = 0; row < table.row_count(); ++row) {
        for (std::size_t c = 0; c < table.column_count(); ++c) {
            const auto before = decode_cell(table.cell(row, c), columns[c]).units;
            const auto after = decode_cell(result.table.cell(row, c), columns[c]).units;
            if (before != after) {
                ++summary.cells_changed;
                const auto distance = before > after ? static_cast<std::uint64_t>(before) - static_cast<std::uint64_t>(after)
                                                     : static_cast<std::uint64_t>(after) - static_cast<std::uint64_t>(before);
                summary.max_distortion_units = std::max(summary.max_distortion_units, distance);
            }
        }
    }
    return result;
}

} // namespace relmark
