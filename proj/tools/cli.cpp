#include "cli.hpp"

#include "relmark/embedder.hpp"
#include "relmark/errors.hpp"
#include "relmark/experiment.hpp"
#include "relmark/recovery.hpp"
#include "relmark/reports.hpp"
#include "relmark/tableio.hpp"
#include "relmark/verifier.hpp"

#include <CLI11.hpp>
#include <openssl/rand.h>

#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace relmark::cli {

namespace {

struct TableOptions {
    std::string in;
    std::string schema;
    std::string key_hex;
    std::string key_file;
    std::size_t groups = 0;
};

void add_table_options(CLI::App& command, TableOptions& options) {
    command.add_option("--in", options.in, "input CSV")->required();
    command.add_option("--schema", options.schema, "schema JSON")->required();
    command.add_option("--key", options.key_hex, "embedding key as hex");
    command.add_option("--key-file", options.key_file, "file holding the hex key");
    command.add_option("--groups", options.groups, "number of groups g");
}

struct Loaded {
    SchemaConfig config;
    Params params;
    Table table;
};

Loaded load_inputs(const TableOptions& options, std::ostream& err) {
    SchemaConfig config = load_schema(options.schema);

    std::optional<SecretKey> key;
    if (!options.key_hex.empty()) {
        key = SecretKey::from_hex(options.key_hex);
    } else if (!options.key_file.empty()) {
        key = SecretKey::from_hex(read_file(options.key_file));
    } else if (const char* path = std::getenv(key_file_env); path != nullptr && *path != '\0') {
        key = SecretKey::from_hex(read_file(path));
    } else if (config.key) {
        key = config.key;
    }
    if (!key) {
        throw ConfigError("no key given: use --key, --key-file, $" + std::string(key_file_env) +
                          " or a 'key' field in the schema");
    }

    std::size_t groups = options.groups;
    if (groups == 0) {
        if (!config.groups) {
            throw ConfigError("number of groups not given: use --groups or a 'groups' field in the schema");
        }
        groups = *config.groups;
    }

    Table table = load_table(options.in, config.schema);
    if (groups > table.row_count()) {
        err << "warning: " << groups << " groups for " << table.row_count() << " rows; some groups will be empty\n";
    }
    Params params{*key, groups};
    return {std::move(config), std::move(params), std::move(table)};
}

void write_json(const nlohmann::json& document, const std::string& path) {
    write_file(path, document.dump(2) + "\n");
}

int cmd_keygen(std::size_t bytes, const std::string& out_path, std::ostream& out) {
    if (bytes < SecretKey::min_length) {
        throw ConfigError("key length must be at least " + std::to_string(SecretKey::min_length) + " bytes");
    }
    std::vector<std::uint8_t> buffer(bytes);
    if (RAND_bytes(buffer.data(), static_cast<int>(buffer.size())) != 1) {
        throw Error("system random generator failed");
    }
    const std::string hex = to_hex(buffer);
    if (out_path.empty()) {
        out << hex << '\n';
    } else {
        write_file(out_path, hex + "\n");
    }
    return success;
}

int cmd_embed(const TableOptions& options, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const Loaded inputs = load_inputs(options, err);
    const EmbedResult result = embed_table(inputs.table, inputs.params);
    save_table(result.table, out_path);
    const auto& summary = result.summary;
    out << "rows: " << inputs.table.row_count() << "\n"
        << "groups: " << summary.groups << " (" << summary.empty_groups << " empty)\n"
        << "group size: min " << summary.min_group_size << ", max " << summary.max_group_size << "\n"
        << "cells changed: " << summary.cells_changed << "\n"
        << "max distortion: " << summary.max_distortion_units << " units of the last digit\n";
    return success;
}

int cmd_verify(const TableOptions& options, const std::string& report_path, std::ostream& out, std::ostream& err) {
    const Loaded inputs = load_inputs(options, err);
    const TamperReport report = verify_table(inputs.table, inputs.params);
    const auto document = tamper_report_json(report, inputs.table);
    if (!report_path.empty()) {
        write_json(document, report_path);
    }
    out << "classification: " << to_string(report.classification) << "\n";
    for (const auto& cell : report.localized_cells()) {
        out << "tampered: " << to_string(inputs.table.key(cell.row)) << ", "
            << inputs.table.schema().columns[cell.column].name << "\n";
    }
    return report.classification == TamperClass::clean ? success : tamper_detected;
}

int cmd_recover(const TableOptions& options, const std::string& out_path, const std::string& report_path,
                std::ostream& out, std::ostream& err) {
    const Loaded inputs = load_inputs(options, err);
    const RecoverResult result = recover_table(inputs.table, inputs.params);
    save_table(result.table, out_path);
    if (!report_path.empty()) {
        write_json(recovery_report_json(result.outcome, inputs.table), report_path);
    }
    const auto& outcome = result.outcome;
    for (const auto status : {RecoveryStatus::clean, RecoveryStatus::recovered_exact, RecoveryStatus::recovered_lowbits,
                              RecoveryStatus::localized_only, RecoveryStatus::failed}) {
        out << to_string(status) << ": " << outcome.count(status) << "\n";
    }
    return outcome.complete() ? success : recovery_incomplete;
}

ValueRange parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("range must look like LO:HI");
    }
    try {
        std::size_t used_lo = 0;
        std::size_t used_hi = 0;
        const std::string lo = text.substr(0, colon);
        const std::string hi = text.substr(colon + 1);
        ValueRange range{std::stoll(lo, &used_lo), std::stoll(hi, &used_hi)};
        if (used_lo != lo.size() || used_hi != hi.size()) {
            throw ConfigError("range must look like LO:HI");
        }
        return range;
    } catch (const std::logic_error&) {
        throw ConfigError("range must look like LO:HI");
    }
}

int cmd_experiment(TrialConfig config, const std::string& range, const std::string& out_path, std::ostream& out,
                   std::ostream& err) {
    config.range = parse_range(range);
    config.validate();
    const auto results = run_trials(config, [&err](const ResultRow& row) {
        err << "v=" << row.v << " y=" << row.y << ": " << row.failures << "/" << row.trials << " failures, "
            << row.detected << " detected\n";
    });
    if (out_path.empty()) {
        out << render_results(results);
    } else {
        emit_results(results, out_path);
    }
    return success;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fragile watermarking of numeric tables: embed, verify, localize and recover"};
    app.require_subcommand(1);

    std::size_t key_bytes = 32;
    std::string keygen_out;
    auto* keygen = app.add_subcommand("keygen", "write a random key as lowercase hex");
    keygen->add_option("--bytes", key_bytes, "key length in bytes (>= 16)");
    keygen->add_option("--out", keygen_out, "key file (standard output if omitted)");

    TableOptions embed_options;
    std::string embed_out;
    auto* embed = app.add_subcommand("embed", "embed watermarks into a CSV table");
    add_table_options(*embed, embed_options);
    embed->add_option("--out", embed_out, "watermarked CSV")->required();

    TableOptions verify_options;
    std::string verify_report;
    auto* verify = app.add_subcommand("verify", "verify a watermarked table and localize tampering");
    add_table_options(*verify, verify_options);
    verify->add_option("--report", verify_report, "tamper report JSON");

    TableOptions recover_options;
    std::string recover_out;
    std::string recover_report;
    auto* recover = app.add_subcommand("recover", "recover single tampered cells per group");
    add_table_options(*recover, recover_options);
    recover->add_option("--out", recover_out, "recovered CSV")->required();
    recover->add_option("--report", recover_report, "recovery report JSON");

    TrialConfig trial_config;
    std::string range = "4:1000";
    std::string experiment_out;
    bool no_tamper = false;
    auto* experiment = app.add_subcommand("experiment", "Monte-Carlo single-cell recovery failure experiment");
    experiment->add_option("--rows-per-group", trial_config.rows_per_group, "group sizes v")->delimiter(',');
    experiment->add_option("--columns", trial_config.columns, "column counts y")->delimiter(',');
    experiment->add_option("--trials", trial_config.trials, "trials per grid point");
    experiment->add_option("--seed", trial_config.seed, "64-bit seed");
    experiment->add_option("--range", range, "value range LO:HI (HI exclusive)");
    experiment->add_option("--width-bits", trial_config.width_bits, "cell width W");
    experiment->add_flag("--no-tamper", no_tamper, "skip the attack (sanity floor)");
    experiment->add_option("--out", experiment_out, "results CSV (standard output if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? success : usage_or_io_error;
    }

    try {
        if (*keygen) {
            return cmd_keygen(key_bytes, keygen_out, out);
        }
        if (*embed) {
            return cmd_embed(embed_options, embed_out, out, err);
        }
        if (*verify) {
            return cmd_verify(verify_options, verify_report, out, err);
        }
        if (*recover) {
            return cmd_recover(recover_options, recover_out, recover_report, out, err);
        }
        if (*experiment) {
            trial_config.tamper = !no_tamper;
            return cmd_experiment(trial_config, range, experiment_out, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage_or_io_error;
    }
    return usage_or_io_error;
}

} // namespace relmark::cli
