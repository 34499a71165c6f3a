#pragma once

// Shared data model: schemas, tables, groups and the verdict types produced by
// verification and recovery.

#include "relmark/bitcodec.hpp"
#include "relmark/crypto.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace relmark {

enum class KeyKind { integer, text };

struct PrimaryKeySpec {
    std::string name;
    KeyKind kind = KeyKind::integer;
};

using PrimaryKey = std::variant<std::int64_t, std::string>;

/// 8-byte big-endian two's complement for integers, raw UTF-8 bytes for text.
std::vector<std::uint8_t> canonical_bytes(const PrimaryKey& key);
/// Numeric order for integer keys, byte-lexicographic order for text keys.
bool canonical_less(const PrimaryKey& lhs, const PrimaryKey& rhs);
std::string to_string(const PrimaryKey& key);

struct Schema {
    PrimaryKeySpec primary_key;
    std::vector<ColumnSpec> columns;

    std::size_t column_count() const noexcept { return columns.size(); }
    std::optional<std::size_t> column_index(std::string_view name) const;
    /// y >= 2, valid column specs, all names pairwise distinct.
    void validate() const;

    friend bool operator==(const Schema& lhs, const Schema& rhs);
};

/// Rows in physical order. Cells are stored row-major.
class Table {
public:
    explicit Table(Schema schema);

    const Schema& schema() const noexcept { return schema_; }
    std::size_t row_count() const noexcept { return keys_.size(); }
    std::size_t column_count() const noexcept { return schema_.column_count(); }

    /// Appends a row; rejects wrong key kinds, duplicate keys, wrong arity and
    /// words that do not fit their column width.
    void add_row(PrimaryKey key, std::span<const CellWord> cells);

    const PrimaryKey& key(std::size_t row) const { return keys_.at(row); }
    CellWord cell(std::size_t row, std::size_t column) const {
        return cells_[row * column_count() + column];
    }
    void set_cell(std::size_t row, std::size_t column, CellWord word);
    std::span<const CellWord> row(std::size_t row) const {
        return {cells_.data() + row * column_count(), column_count()};
    }

    /// Replaces a primary key in place (used to model key tampering).
    void set_key(std::size_t row, PrimaryKey key);

    friend bool operator==(const Table& lhs, const Table& rhs) {
        return lhs.schema_ == rhs.schema_ && lhs.keys_ == rhs.keys_ && lhs.cells_ == rhs.cells_;
    }

private:
    void check_key_kind(const PrimaryKey& key) const;

    Schema schema_;
    std::vector<PrimaryKey> keys_;
    std::vector<CellWord> cells_;
    std::unordered_set<std::string> seen_keys_;
};

struct Params {
    SecretKey key;
    std::size_t groups = 1; // g

    void validate() const;
};

/// One keyed partition of the table: member rows sorted by primary key and the
/// shift of the column permutation p(j) = ((j - 1 + shift) mod y) + 1.
struct Group {
    std::size_t index = 0;
    std::vector<std::size_t> members; // physical row indices, sorted by primary key
    std::size_t shift = 1;

    std::size_t size() const noexcept { return members.size(); }
};

/// Dense v x y snapshot of one group's cells, rows in group order.
struct GroupCells {
    std::size_t index = 0;
    std::size_t shift = 1;
    std::size_t rows = 0;
    std::size_t columns = 0;
    std::vector<unsigned> widths; // W of each column
    std::vector<CellWord> words;

    static GroupCells gather(const Table& table, const Group& group);
    void scatter(Table& table, const Group& group) const;

    CellWord& at(std::size_t row, std::size_t column) { return words[row * columns + column]; }
    CellWord at(std::size_t row, std::size_t column) const { return words[row * columns + column]; }
    std::span<const CellWord> row(std::size_t row) const { return {words.data() + row * columns, columns}; }

    /// 0-based column that stores the attribute watermark of `column`.
    std::size_t target_column(std::size_t column) const noexcept { return (column + shift) % columns; }
    /// 0-based column whose attribute watermark is stored in `column`.
    std::size_t source_column(std::size_t column) const noexcept {
        return (column + columns - shift % columns) % columns;
    }

    friend bool operator==(const GroupCells&, const GroupCells&) = default;
};

struct WatermarkSet {
    std::vector<BitString> attribute; // y strings of v bits
    std::vector<BitString> tuple;     // v strings of y bits
};

struct CellRef {
    std::size_t row = 0;    // position within the group
    std::size_t column = 0; // 0-based column

    friend bool operator==(const CellRef&, const CellRef&) = default;
};

struct VerificationVectors {
    std::vector<bool> attribute_ok;     // V1 after disambiguation, length y
    std::vector<bool> attribute_ok_raw; // V1 before disambiguation
    std::vector<bool> tuple_ok;         // V2, length v
    std::vector<CellRef> localized;     // false rows x false columns
    std::size_t mismatched_bits = 0;    // over both watermark layers
    std::size_t total_bits = 0;

    /// Every check passed, including the ones the disambiguation pass cleared.
    bool clean() const noexcept;
};

enum class TamperClass { clean, low_bit_only, single_cell, multi_cell, group_structure };

enum class RecoveryStatus { clean, recovered_exact, recovered_lowbits, localized_only, failed };

std::string_view to_string(TamperClass value) noexcept;
std::string_view to_string(RecoveryStatus value) noexcept;

struct GroupVerdict {
    std::size_t index = 0;
    std::vector<std::size_t> members;
    VerificationVectors vectors;
    TamperClass classification = TamperClass::clean;
};

/// A (primary key, column) pair named by localization.
struct CellVerdict {
    std::size_t group = 0;
    std::size_t row = 0; // physical row index
    std::size_t column = 0;
};

struct TamperReport {
    TamperClass classification = TamperClass::clean;
    std::vector<GroupVerdict> groups;

    std::vector<CellVerdict> localized_cells() const;
    std::size_t mismatched_bits() const noexcept;
    std::size_t total_bits() const noexcept;
};

struct RecoveredCell {
    std::size_t group = 0;
    std::size_t row = 0; // physical row index
    std::size_t column = 0;
    CellWord old_word = 0;
    CellWord new_word = 0;
};

struct GroupRecovery {
    std::size_t index = 0;
    std::vector<std::size_t> members;
    VerificationVectors vectors; // as found, before recovery
    RecoveryStatus status = RecoveryStatus::clean;
};

struct RecoveryOutcome {
    std::vector<GroupRecovery> groups;
    std::vector<RecoveredCell> cells;

    std::size_t count(RecoveryStatus status) const noexcept;
    /// True when every group is clean or recovered.
    bool complete() const noexcept;
};

} // namespace relmark
