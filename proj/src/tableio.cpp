#include "relmark/tableio.hpp"

#include "relmark/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace relmark {

namespace {

using json = nlohmann::json;

const json& require(const json& object, const char* field, const std::string& where) {
    if (!object.is_object() || !object.contains(field)) {
        throw ConfigError(where + ": missing field '" + field + "'");
    }
    return object.at(field);
}

std::string require_string(const json& object, const char* field, const std::string& where) {
    const json& value = require(object, field, where);
    if (!value.is_string()) {
        throw ConfigError(where + ": field '" + field + "' must be a string");
    }
    return value.get<std::string>();
}

std::int64_t require_integer(const json& value, const std::string& what) {
    if (!value.is_number_integer()) {
        throw ConfigError(what + " must be an integer");
    }
    return value.get<std::int64_t>();
}

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

// RFC 4180 reader; accepts LF and CRLF line endings.
std::vector<CsvRecord> parse_csv(std::string_view text) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    std::size_t line = 1;
    current.line = 1;
    bool in_quotes = false;
    std::size_t quote_line = 1;
    bool field_started = false;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(current));
        current = CsvRecord{};
        current.line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started || !field.empty()) {
                throw ParseError("unexpected quote inside unquoted field", line);
            }
            in_quotes = true;
            field_started = true;
            quote_line = line;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') {
                break;
            }
            throw ParseError("bare carriage return", line);
        case '\n':
            ++line;
            end_record();
            break;
        default:
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) {
        throw ParseError("unterminated quoted field", quote_line);
    }
    if (field_started || !field.empty() || !current.fields.empty()) {
        end_record();
    }
    return records;
}

std::string quote_csv(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

PrimaryKey parse_key(const std::string& text, KeyKind kind, std::size_t line) {
    if (kind == KeyKind::text) {
        return text;
    }
    std::int64_t value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw ParseError("primary key '" + text + "' is not a 64-bit integer", line, 1);
    }
    return value;
}

} // namespace

SchemaConfig parse_schema(std::string_view json_text) {
    json document;
    try {
        document = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!document.is_object()) {
        throw ConfigError("schema must be a JSON object");
    }

    SchemaConfig config;
    const json& pk = require(document, "primary_key", "schema");
    config.schema.primary_key.name = require_string(pk, "name", "primary_key");
    const std::string pk_kind = require_string(pk, "kind", "primary_key");
    if (pk_kind == "integer") {
        config.schema.primary_key.kind = KeyKind::integer;
    } else if (pk_kind == "text") {
        config.schema.primary_key.kind = KeyKind::text;
    } else {
        throw ConfigError("primary_key.kind must be 'integer' or 'text', got '" + pk_kind + "'");
    }

    const json& columns = require(document, "columns", "schema");
    if (!columns.is_array()) {
        throw ConfigError("schema: 'columns' must be an array");
    }
    for (const json& entry : columns) {
        ColumnSpec spec;
        spec.name = require_string(entry, "name", "column");
        const std::string where = "column '" + spec.name + "'";
        const std::string kind = require_string(entry, "kind", where);
        if (kind == "integer") {
            spec.kind = ColumnKind::integer;
        } else if (kind == "decimal") {
            spec.kind = ColumnKind::decimal;
        } else {
            throw ConfigError(where + ": kind must be 'integer' or 'decimal', got '" + kind + "'");
        }
        if (entry.contains("scale")) {
            const auto scale = require_integer(entry.at("scale"), where + ": scale");
            if (scale < 0) {
                throw ConfigError(where + ": scale must be non-negative");
            }
            spec.scale = static_cast<unsigned>(scale);
        }
        if (entry.contains("width_bits")) {
            const auto width = require_integer(entry.at("width_bits"), where + ": width_bits");
            if (width < 3 || width > 64) {
                throw ConfigError(where + ": width_bits must be in [3, 64], got " + std::to_string(width));
            }
            spec.width_bits = static_cast<unsigned>(width);
        }
        config.schema.columns.push_back(std::move(spec));
    }
    config.schema.validate();

    if (document.contains("groups")) {
        const auto groups = require_integer(document.at("groups"), "groups");
        if (groups < 1) {
            throw ConfigError("groups must be at least 1");
        }
        config.groups = static_cast<std::size_t>(groups);
    }
    if (document.contains("key")) {
        config.key = SecretKey::from_hex(require_string(document, "key", "schema"));
    }
    return config;
}

SchemaConfig load_schema(const std::filesystem::path& path) { return parse_schema(read_file(path)); }

Table parse_table(std::string_view csv_text, const Schema& schema) {
    const auto records = parse_csv(csv_text);
    if (records.empty()) {
        throw ParseError("CSV has no header row", 1);
    }

    const auto& header = records.front().fields;
    std::vector<std::string> expected{schema.primary_key.name};
    for (const auto& column : schema.columns) {
        expected.push_back(column.name);
    }
    if (header != expected) {
        std::string names;
        for (const auto& name : expected) {
            names += (names.empty() ? "" : ",") + name;
        }
        throw ParseError("header does not match schema (expected " + names + ")", 1);
    }

    Table table(schema);
    std::vector<CellWord> cells(schema.column_count());
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        if (record.fields.size() != expected.size()) {
            throw ParseError("expected " + std::to_string(expected.size()) + " fields, got " +
                                 std::to_string(record.fields.size()),
                             record.line);
        }
        for (std::size_t f = 0; f < record.fields.size(); ++f) {
            if (record.fields[f].empty()) {
                throw ParseError("missing value for '" + expected[f] + "'", record.line, f + 1);
            }
        }
        PrimaryKey key = parse_key(record.fields[0], schema.primary_key.kind, record.line);
        for (std::size_t c = 0; c < schema.column_count(); ++c) {
            try {
                cells[c] = encode_cell(record.fields[c + 1], schema.columns[c]);
            } catch (const CodecError& e) {
                throw ParseError(e.what(), record.line, c + 2);
            }
        }
        try {
            table.add_row(std::move(key), cells);
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), record.line);
        }
    }
    return table;
}

Table load_table(const std::filesystem::path& path, const Schema& schema) {
    return parse_table(read_file(path), schema);
}

std::string render_table(const Table& table) {
    const auto& schema = table.schema();
    std::string out = quote_csv(schema.primary_key.name);
    for (const auto& column : schema.columns) {
        out += ',' + quote_csv(column.name);
    }
    out += '\n';
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        out += quote_csv(to_string(table.key(r)));
        for (std::size_t c = 0; c < table.column_count(); ++c) {
            out += ',' + decode_cell(table.cell(r, c), schema.columns[c]).to_string();
        }
        out += '\n';
    }
    return out;
}

void save_table(const Table& table, const std::filesystem::path& path) { write_file(path, render_table(table)); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream contents;
    contents << in.rdbuf();
    return contents.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace relmark
