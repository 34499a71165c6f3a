#include "relmark/experiment.hpp"

#include "relmark/embedder.hpp"
#include "relmark/errors.hpp"
#include "relmark/tableio.hpp"
#include "relmark/verifier.hpp"

#include <algorithm>
#include <cstdio>

namespace relmark {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

SecretKey random_key(Rng& rng) {
    std::vector<std::uint8_t> bytes(32);
    for (std::size_t i = 0; i < bytes.size(); i += 8) {
        const auto word = encode_be64(rng.next());
        std::copy(word.begin(), word.end(), bytes.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return SecretKey(std::move(bytes));
}

} // namespace

void TrialConfig::validate() const {
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (rows_per_group.empty() || columns.empty()) {
        throw ConfigError("the v and y grids must be non-empty");
    }
    if (range.lo < 4 || range.hi <= range.lo) {
        throw ConfigError("value range must satisfy 4 <= lo < hi");
    }
    const std::size_t min_rows = *std::min_element(rows_per_group.begin(), rows_per_group.end());
    if (min_rows < 1) {
        throw ConfigError("rows per group must be at least 1");
    }
    if (min_rows < 63 && range.hi > (std::int64_t{1} << min_rows)) {
        throw ConfigError("value range must stay below 2^" + std::to_string(min_rows) +
                          " so the attribute fold is lossless");
    }
    if (*std::min_element(columns.begin(), columns.end()) < 2) {
        throw ConfigError("columns must be at least 2");
    }
    if (width_bits < 3 || width_bits > 64) {
        throw ConfigError("width_bits must be in [3, 64]");
    }
    if (width_bits < 64 && range.hi - 1 > (std::int64_t{1} << (width_bits - 1)) - 1) {
        throw ConfigError("value range does not fit " + std::to_string(width_bits) + "-bit columns");
    }
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below needs a positive bound");
    }
    // Values below 2^64 mod bound are rejected so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t value = 0;
    do {
        value = engine_();
    } while (value < threshold);
    return value % bound;
}

std::int64_t Rng::uniform(const ValueRange& range) {
    const auto span = static_cast<std::uint64_t>(range.hi - range.lo);
    return range.lo + static_cast<std::int64_t>(below(span));
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t rows, std::size_t columns, std::size_t trial) {
    std::uint64_t state = splitmix64(seed);
    state = splitmix64(state ^ rows);
    state = splitmix64(state ^ columns);
    return splitmix64(state ^ trial);
}

Table gen_table(std::size_t rows, std::size_t columns, const ValueRange& range, unsigned width_bits, Rng& rng) {
    Schema schema;
    schema.primary_key = {"id", KeyKind::integer};
    for (std::size_t j = 0; j < columns; ++j) {
        schema.columns.push_back({"c" + std::to_string(j + 1), ColumnKind::integer, 0, width_bits});
    }
    Table table(schema);
    std::vector<CellWord> cells(columns);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns; ++j) {
            cells[j] = encode_units(rng.uniform(range), schema.columns[j]);
        }
        table.add_row(static_cast<std::int64_t>(i), cells);
    }
    return table;
}

Attack attack_single_cell(const Table& table, const ValueRange& range, Rng& rng) {
    if (table.row_count() == 0) {
        throw std::invalid_argument("cannot attack an empty table");
    }
    Attack attack{table, 0, 0, 0, 0};
    attack.row = static_cast<std::size_t>(rng.below(table.row_count()));
    attack.column = static_cast<std::size_t>(rng.below(table.column_count()));
    const auto& spec = table.schema().columns[attack.column];
    attack.old_word = table.cell(attack.row, attack.column);
    const auto old_value = decode_cell(attack.old_word, spec).units;
    std::int64_t value = old_value;
    while (value == old_value) {
        value = rng.uniform(range);
    }
    attack.new_word = encode_units(value, spec);
    attack.table.set_cell(attack.row, attack.column, attack.new_word);
    return attack;
}

bool TrialOutcome::success() const noexcept {
    return restored &&
           (status == RecoveryStatus::recovered_exact || status == RecoveryStatus::recovered_lowbits ||
            status == RecoveryStatus::clean);
}

TrialOutcome run_trial(std::size_t rows, std::size_t columns, const TrialConfig& config, std::size_t trial) {
    Rng rng(trial_seed(config.seed, rows, columns, trial));
    const Table original = gen_table(rows, columns, config.range, config.width_bits, rng);
    const Params params{random_key(rng), 1};
    const Table watermarked = embed_table(original, params).table;

    const Table attacked =
        config.tamper ? attack_single_cell(watermarked, config.range, rng).table : watermarked;

    TrialOutcome outcome;
    outcome.detected = verify_table(attacked, params).classification != TamperClass::clean;
    const RecoverResult recovered = recover_table(attacked, params);
    outcome.status = recovered.outcome.groups.front().status;
    outcome.restored = recovered.table == watermarked;
    outcome.silent_corruption = outcome.status == RecoveryStatus::recovered_exact && !outcome.restored;
    return outcome;
}

double ResultRow::failure_probability() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
}

double ResultRow::detection_rate() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(detected) / static_cast<double>(trials);
}

std::vector<ResultRow> run_trials(const TrialConfig& config, const std::function<void(const ResultRow&)>& progress) {
    config.validate();
    auto rows_grid = config.rows_per_group;
    auto columns_grid = config.columns;
    std::sort(rows_grid.begin(), rows_grid.end());
    std::sort(columns_grid.begin(), columns_grid.end());

    std::vector<ResultRow> results;
    for (const auto v : rows_grid) {
        for (const auto y : columns_grid) {
            ResultRow row{v, y, config.trials, 0, 0, 0};
            for (std::size_t t = 0; t < config.trials; ++t) {
                const TrialOutcome outcome = run_trial(v, y, config, t);
                row.failures += outcome.success() ? 0 : 1;
                row.detected += outcome.detected ? 1 : 0;
                row.silent_corruptions += outcome.silent_corruption ? 1 : 0;
            }
            if (progress) {
                progress(row);
            }
            results.push_back(row);
        }
    }
    return results;
}

std::string render_results(const std::vector<ResultRow>& results) {
    std::string out = "v,y,trials,failures,failure_probability\n";
    char probability[32];
    for (const auto& row : results) {
        std::snprintf(probability, sizeof probability, "%.6f", row.failure_probability());
        out += std::to_string(row.v) + ',' + std::to_string(row.y) + ',' + std::to_string(row.trials) + ',' +
               std::to_string(row.failures) + ',' + probability + '\n';
    }
    return out;
}

void emit_results(const std::vector<ResultRow>& results, const std::filesystem::path& path) {
    write_file(path, render_results(results));
}

} // namespace relmark
