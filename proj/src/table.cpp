#include "relmark/table.hpp"

#include "relmark/errors.hpp"

#include <algorithm>
#include <set>

namespace relmark {

std::vector<std::uint8_t> canonical_bytes(const PrimaryKey& key) {
    if (const auto* number = std::get_if<std::int64_t>(&key)) {
        const auto bytes = encode_be64(static_cast<std::uint64_t>(*number));
        return {bytes.begin(), bytes.end()};
    }
    const auto& text = std::get<std::string>(key);
    return {text.begin(), text.end()};
}

bool canonical_less(const PrimaryKey& lhs, const PrimaryKey& rhs) {
    if (lhs.index() != rhs.index()) {
        return lhs.index() < rhs.index();
    }
    if (const auto* number = std::get_if<std::int64_t>(&lhs)) {
        return *number < std::get<std::int64_t>(rhs);
    }
    // char_traits<char> compares as unsigned char, i.e. byte order.
    return std::get<std::string>(lhs) < std::get<std::string>(rhs);
}

std::string to_string(const PrimaryKey& key) {
    if (const auto* number = std::get_if<std::int64_t>(&key)) {
        return std::to_string(*number);
    }
    return std::get<std::string>(key);
}

std::optional<std::size_t> Schema::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

void Schema::validate() const {
    if (columns.size() < 2) {
        throw ConfigError("schema needs at least 2 attribute columns, got " +
                          std::to_string(columns.size()));
    }
    if (primary_key.name.empty()) {
        throw ConfigError("primary key needs a name");
    }
    std::set<std::string, std::less<>> names{primary_key.name};
    for (const auto& column : columns) {
        if (column.name.empty()) {
            throw ConfigError("column names must be non-empty");
        }
        column.validate();
        if (!names.insert(column.name).second) {
            throw ConfigError("duplicate column name '" + column.name + "'");
        }
    }
}

bool operator==(const Schema& lhs, const Schema& rhs) {
    if (lhs.primary_key.name != rhs.primary_key.name || lhs.primary_key.kind != rhs.primary_key.kind ||
        lhs.columns.size() != rhs.columns.size()) {
        return false;
    }
    for (std::size_t i = 0; i < lhs.columns.size(); ++i) {
        const auto& a = lhs.columns[i];
        const auto& b = rhs.columns[i];
        if (a.name != b.name || a.kind != b.kind || a.scale != b.scale || a.width_bits != b.width_bits) {
            return false;
        }
    }
    return true;
}

Table::Table(Schema schema) : schema_(std::move(schema)) { schema_.validate(); }

void Table::check_key_kind(const PrimaryKey& key) const {
    const bool is_integer = std::holds_alternative<std::int64_t>(key);
    if (is_integer != (schema_.primary_key.kind == KeyKind::integer)) {
        throw ConfigError("primary key '" + to_string(key) + "' has the wrong kind for '" +
                          schema_.primary_key.name + "'");
    }
}

void Table::add_row(PrimaryKey key, std::span<const CellWord> cells) {
    check_key_kind(key);
    if (cells.size() != column_count()) {
        throw ConfigError("row '" + to_string(key) + "' has " + std::to_string(cells.size()) +
                          " cells, schema has " + std::to_string(column_count()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c] > word_mask(schema_.columns[c].width_bits)) {
            throw ConfigError("cell of row '" + to_string(key) + "' does not fit column '" +
                              schema_.columns[c].name + "'");
        }
    }
    const auto bytes = canonical_bytes(key);
    if (!seen_keys_.emplace(bytes.begin(), bytes.end()).second) {
        throw ConfigError("duplicate primary key '" + to_string(key) + "'");
    }
    keys_.push_back(std::move(key));
    cells_.insert(cells_.end(), cells.begin(), cells.end());
}

void Table::set_cell(std::size_t row, std::size_t column, CellWord word) {
    if (row >= row_count() || column >= column_count()) {
        throw std::out_of_range("cell index out of range");
    }
    if (word > word_mask(schema_.columns[column].width_bits)) {
        throw ConfigError("word does not fit column '" + schema_.columns[column].name + "'");
    }
    cells_[row * column_count() + column] = word;
}

void Table::set_key(std::size_t row, PrimaryKey key) {
    check_key_kind(key);
    const auto old_bytes = canonical_bytes(keys_.at(row));
    const auto new_bytes = canonical_bytes(key);
    const std::string new_entry(new_bytes.begin(), new_bytes.end());
    const std::string old_entry(old_bytes.begin(), old_bytes.end());
    if (new_entry != old_entry && seen_keys_.contains(new_entry)) {
        throw ConfigError("duplicate primary key '" + to_string(key) + "'");
    }
    seen_keys_.erase(old_entry);
    seen_keys_.insert(new_entry);
    keys_[row] = std::move(key);
}

void Params::validate() const {
    if (groups < 1) {
        throw ConfigError("number of groups must be at least 1");
    }
}

GroupCells GroupCells::gather(const Table& table, const Group& group) {
    GroupCells cells;
    cells.index = group.index;
    cells.shift = group.shift;
    cells.rows = group.size();
    cells.columns = table.column_count();
    for (const auto& column : table.schema().columns) {
        cells.widths.push_back(column.width_bits);
    }
    cells.words.reserve(cells.rows * cells.columns);
    for (const auto member : group.members) {
        const auto row = table.row(member);
        cells.words.insert(cells.words.end(), row.begin(), row.end());
    }
    return cells;
}

void GroupCells::scatter(Table& table, const Group& group) const {
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns; ++j) {
            if (table.cell(group.members[i], j) != at(i, j)) {
                table.set_cell(group.members[i], j, at(i, j));
            }
        }
    }
}

bool VerificationVectors::clean() const noexcept {
    return std::all_of(attribute_ok.begin(), attribute_ok.end(), [](bool ok) { return ok; }) &&
           std::all_of(attribute_ok_raw.begin(), attribute_ok_raw.end(), [](bool ok) { return ok; }) &&
           std::all_of(tuple_ok.begin(), tuple_ok.end(), [](bool ok) { return ok; });
}

std::string_view to_string(TamperClass value) noexcept {
    switch (value) {
    case TamperClass::clean:
        return "clean";
    case TamperClass::low_bit_only:
        return "low-bit-only";
    case TamperClass::single_cell:
        return "single-cell";
    case TamperClass::multi_cell:
        return "multi-cell";
    case TamperClass::group_structure:
        return "group-structure";
    }
    return "unknown";
}

std::string_view to_string(RecoveryStatus value) noexcept {
    switch (value) {
    case RecoveryStatus::clean:
        return "clean";
    case RecoveryStatus::recovered_exact:
        return "recovered-exact";
    case RecoveryStatus::recovered_lowbits:
        return "recovered-lowbits";
    case RecoveryStatus::localized_only:
        return "localized-only";
    case RecoveryStatus::failed:
        return "failed";
    }
    return "unknown";
}

std::vector<CellVerdict> TamperReport::localized_cells() const {
    std::vector<CellVerdict> out;
    for (const auto& group : groups) {
        for (const auto& cell : group.vectors.localized) {
            out.push_back({group.index, group.members[cell.row], cell.column});
        }
    }
    return out;
}

std::size_t TamperReport::mismatched_bits() const noexcept {
    std::size_t total = 0;
    for (const auto& group : groups) {
        total += group.vectors.mismatched_bits;
    }
    return total;
}

std::size_t TamperReport::total_bits() const noexcept {
    std::size_t total = 0;
    for (const auto& group : groups) {
        total += group.vectors.total_bits;
    }
    return total;
}

std::size_t RecoveryOutcome::count(RecoveryStatus status) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        groups.begin(), groups.end(), [status](const GroupRecovery& group) { return group.status == status; }));
}

bool RecoveryOutcome::complete() const noexcept {
    return count(RecoveryStatus::localized_only) == 0 && count(RecoveryStatus::failed) == 0;
}

} // namespace relmark
