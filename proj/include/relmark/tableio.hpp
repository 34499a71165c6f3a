#pragma once

#include "relmark/crypto.hpp"
#include "relmark/table.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace relmark {

/// Parsed schema file. `groups` and `key` are optional there and may come from the CLI.
struct SchemaConfig {
    Schema schema;
    std::optional<std::size_t> groups;
    std::optional<SecretKey> key;
};

/// {"primary_key": {"name", "kind": "integer"|"text"},
///  "columns": [{"name", "kind": "integer"|"decimal", "scale"?, "width_bits"?}],
///  "groups"?: g, "key"?: "<hex>"}
SchemaConfig parse_schema(std::string_view json_text);
SchemaConfig load_schema(const std::filesystem::path& path);

/// CSV with a header row (primary key first, then the schema columns in order).
Table parse_table(std::string_view csv_text, const Schema& schema);
Table load_table(const std::filesystem::path& path, const Schema& schema);

/// Canonical CSV: LF line endings, decimals with exactly `scale` fractional digits,
/// rows in physical order, fields quoted only when needed.
std::string render_table(const Table& table);
void save_table(const Table& table, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace relmark
