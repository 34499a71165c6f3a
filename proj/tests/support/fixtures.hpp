#pragma once

// Table builders shared by the unit tests and the acceptance suite.

#include "relmark/grouping.hpp"
#include "relmark/table.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace relmark::testing {

inline SecretKey counting_key(std::size_t length = 16) {
    std::vector<std::uint8_t> bytes(length);
    for (std::size_t i = 0; i < length; ++i) {
        bytes[i] = static_cast<std::uint8_t>(i);
    }
    return SecretKey(bytes);
}

inline SecretKey random_key(std::mt19937_64& rng, std::size_t length = 32) {
    std::vector<std::uint8_t> bytes(length);
    for (auto& b : bytes) {
        b = static_cast<std::uint8_t>(rng());
    }
    return SecretKey(bytes);
}

inline Schema integer_schema(std::size_t columns, unsigned width = 32) {
    Schema schema;
    schema.primary_key = {"id", KeyKind::integer};
    for (std::size_t j = 0; j < columns; ++j) {
        schema.columns.push_back({"c" + std::to_string(j + 1), ColumnKind::integer, 0, width});
    }
    return schema;
}

/// Rows with keys 0..rows-1 and words drawn uniformly from [lo, hi).
inline Table uniform_table(const Schema& schema, std::size_t rows, std::mt19937_64& rng, CellWord lo, CellWord hi) {
    Table table(schema);
    std::vector<CellWord> cells(schema.column_count());
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto& c : cells) {
            c = lo + rng() % (hi - lo);
        }
        table.add_row(static_cast<std::int64_t>(i), cells);
    }
    return table;
}

/// Words uniform over each column's full width.
inline Table random_table(const Schema& schema, std::size_t rows, std::mt19937_64& rng) {
    Table table(schema);
    std::vector<CellWord> cells(schema.column_count());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            cells[j] = rng() & word_mask(schema.columns[j].width_bits);
        }
        table.add_row(static_cast<std::int64_t>(i) * 7 - 50, cells);
    }
    return table;
}

/// Same rows in a shuffled physical order.
inline Table shuffled(const Table& table, std::mt19937_64& rng) {
    std::vector<std::size_t> order(table.row_count());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    Table out(table.schema());
    for (const auto row : order) {
        out.add_row(table.key(row), table.row(row));
    }
    return out;
}

/// The single group of a g = 1 table as dense cells.
inline GroupCells whole_group(const Table& table, const SecretKey& key) {
    const auto groups = partition(table, Params{key, 1});
    return GroupCells::gather(table, groups.front());
}

} // namespace relmark::testing
