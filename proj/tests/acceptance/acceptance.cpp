// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "relmark/embedder.hpp"
#include "relmark/experiment.hpp"
#include "relmark/recovery.hpp"
#include "relmark/verifier.hpp"

#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

using namespace relmark;
using Clock = std::chrono::steady_clock;
__extension__ using Wide = __int128;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;
std::size_t silent_corruptions = 0;
std::size_t recovery_runs = 0;
std::uint64_t max_distortion_units = 0;
std::size_t distortion_cells = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(const char* pattern, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* pattern, ...) {
    char buffer[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buffer, sizeof buffer, pattern, args);
    va_end(args);
    return buffer;
}

void run(int number, const char* title, const std::function<Verdict()>& body) {
    const auto start = Clock::now();
    const Verdict verdict = body();
    std::printf("%s  %2d  %-28s %s [%.1fs]\n", verdict.pass ? "PASS" : "FAIL", number, title, verdict.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
    failures += verdict.pass ? 0 : 1;
}

void note(const std::string& line) {
    std::printf("          %s\n", line.c_str());
    std::fflush(stdout);
}

/// Tracks the largest decoded change between an original and its embedded table.
void record_distortion(const Table& before, const Table& after) {
    const auto& columns = before.schema().columns;
    for (std::size_t r = 0; r < before.row_count(); ++r) {
        for (std::size_t c = 0; c < before.column_count(); ++c) {
            const auto a = static_cast<Wide>(decode_cell(before.cell(r, c), columns[c]).units);
            const auto b = static_cast<Wide>(decode_cell(after.cell(r, c), columns[c]).units);
            const auto d = static_cast<std::uint64_t>(a > b ? a - b : b - a);
            max_distortion_units = std::max(max_distortion_units, d);
            ++distortion_cells;
        }
    }
}

void record_recovery(RecoveryStatus status, bool restored) {
    ++recovery_runs;
    if (status == RecoveryStatus::recovered_exact && !restored) {
        ++silent_corruptions;
    }
}

struct RandomConfig {
    Table table;
    Params params;
};

/// Random schema (kinds, scales, widths, key kind), key and g, with about
/// `group_size` rows per group.
RandomConfig random_config(std::mt19937_64& rng, std::size_t group_size, std::size_t columns) {
    Schema schema;
    const bool text_keys = rng() % 2 == 0;
    schema.primary_key = {"pk", text_keys ? KeyKind::text : KeyKind::integer};
    for (std::size_t j = 0; j < columns; ++j) {
        ColumnSpec spec{"a" + std::to_string(j), ColumnKind::integer, 0, 3 + static_cast<unsigned>(rng() % 62)};
        if (rng() % 2 == 0) {
            spec.kind = ColumnKind::decimal;
            spec.scale = static_cast<unsigned>(rng() % 5);
        }
        schema.columns.push_back(spec);
    }
    const std::size_t groups = 1 + rng() % 4;
    Params params{relmark::testing::random_key(rng, 16 + rng() % 49), groups};

    Table table(schema);
    std::vector<CellWord> cells(columns);
    const std::size_t rows = group_size * groups;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns; ++j) {
            cells[j] = rng() & word_mask(schema.columns[j].width_bits);
        }
        if (text_keys) {
            table.add_row("row-" + std::to_string(i) + "-" + std::to_string(rng() % 1000), cells);
        } else {
            table.add_row(static_cast<std::int64_t>(rng() >> 1) - (std::int64_t{1} << 61), cells);
        }
    }
    return {std::move(table), std::move(params)};
}

Verdict round_trip() {
    std::mt19937_64 rng(1001);
    const auto start = Clock::now();
    std::size_t clean = 0;
    std::size_t min_group = SIZE_MAX;
    std::size_t max_group = 0;
    const std::size_t configs = 1000;
    for (std::size_t t = 0; t < configs; ++t) {
        const std::size_t v = 1 + rng() % 64;
        const std::size_t y = 2 + rng() % 49;
        const auto config = random_config(rng, v, y);
        const auto embedded = embed_table(config.table, config.params);
        record_distortion(config.table, embedded.table);
        const auto report = verify_table(embedded.table, config.params);
        bool all_clean = report.classification == TamperClass::clean;
        for (const auto& group : report.groups) {
            all_clean = all_clean && group.vectors.clean();
            if (!group.members.empty()) {
                min_group = std::min(min_group, group.members.size());
                max_group = std::max(max_group, group.members.size());
            }
        }
        clean += all_clean ? 1 : 0;
    }
    const double elapsed = seconds_since(start);
    return {clean == configs && elapsed < 120.0,
            format("%zu/%zu clean, group sizes %zu..%zu, %.1fs (limit 120s)", clean, configs, min_group, max_group,
                   elapsed)};
}

Verdict permutation_invariance() {
    std::mt19937_64 rng(1002);
    std::size_t clean = 0;
    const std::size_t shuffles = 200;
    for (std::size_t t = 0; t < shuffles / 10; ++t) {
        const auto config = random_config(rng, 1 + rng() % 40, 2 + rng() % 20);
        const auto embedded = embed_table(config.table, config.params).table;
        for (int s = 0; s < 10; ++s) {
            const auto shuffled = relmark::testing::shuffled(embedded, rng);
            clean += verify_table(shuffled, config.params).classification == TamperClass::clean ? 1 : 0;
        }
    }
    return {clean == shuffles, format("%zu/%zu shuffles clean", clean, shuffles)};
}

Verdict figure_one() {
    std::mt19937_64 rng(51);
    const auto key = relmark::testing::counting_key();
    const auto table = relmark::testing::uniform_table(relmark::testing::integer_schema(4, 16), 4, rng, 4, 16);
    auto cells = relmark::testing::whole_group(table, key);
    embed_group(cells, key);
    cells.at(1, 2) ^= 4; // r2.A3, a masked bit
    const auto vectors = verify_group(cells, key);
    const std::vector<bool> v1{true, true, false, true};
    const std::vector<bool> v2{true, false, true, true};
    const bool localized = vectors.localized.size() == 1 && vectors.localized[0] == CellRef{1, 2};
    auto render = [](const std::vector<bool>& bits) {
        std::string out;
        for (const bool b : bits) {
            out += b ? 'T' : 'F';
        }
        return out;
    };
    return {vectors.attribute_ok == v1 && vectors.tuple_ok == v2 && localized,
            "V1=" + render(vectors.attribute_ok) + " V2=" + render(vectors.tuple_ok) +
                (localized ? " localized={(2,3)}" : " localized wrong")};
}

Verdict detection_rate() {
    const std::size_t trials = 10000;
    const ValueRange range{4, 1000};
    std::size_t detected = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(trial_seed(1004, 10, 10, t));
        const auto original = gen_table(10, 10, range, 32, rng);
        std::mt19937_64 key_rng(rng.next());
        const Params params{relmark::testing::random_key(key_rng), 1};
        const auto watermarked = embed_table(original, params).table;
        auto tampered = watermarked;
        const std::size_t row = rng.below(10);
        const std::size_t column = rng.below(10);
        CellWord word = tampered.cell(row, column);
        while (mask(word) == mask(tampered.cell(row, column))) {
            word = static_cast<CellWord>(rng.uniform(range));
        }
        tampered.set_cell(row, column, word);
        detected += verify_table(tampered, params).classification != TamperClass::clean ? 1 : 0;
        const auto recovered = recover_table(tampered, params);
        record_recovery(recovered.outcome.groups.front().status, recovered.table == watermarked);
    }
    const double rate = static_cast<double>(detected) / trials;
    return {rate >= 0.997, format("%zu/%zu detected (%.4f, need >= 0.997)", detected, trials, rate)};
}

Verdict recovery_exactness() {
    TrialConfig config;
    config.rows_per_group = {32};
    config.columns = {10};
    config.width_bits = 16;
    config.range = {4, 32768};
    config.seed = 1005;
    config.validate();
    const std::size_t trials = 10000;
    std::size_t recovered = 0;
    std::size_t exact = 0;
    std::size_t exact_wrong = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto outcome = run_trial(32, 10, config, t);
        record_recovery(outcome.status, outcome.restored);
        if (outcome.status == RecoveryStatus::recovered_exact) {
            ++exact;
            exact_wrong += outcome.restored ? 0 : 1;
        }
        recovered += outcome.status == RecoveryStatus::recovered_exact ||
                             outcome.status == RecoveryStatus::recovered_lowbits
                         ? 1
                         : 0;
    }
    const double rate = static_cast<double>(recovered) / trials;
    return {exact_wrong == 0 && rate >= 0.998,
            format("%zu exact (%zu not bit-identical), %zu/%zu recovered (%.4f, need >= 0.998)", exact, exact_wrong,
                   recovered, trials, rate)};
}

std::vector<ResultRow> grid;
double grid_seconds = 0;

double sigma(double p, std::size_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

Verdict magnitude() {
    TrialConfig config;
    const auto start = Clock::now();
    grid = run_trials(config);
    grid_seconds = seconds_since(start);
    std::map<std::pair<std::size_t, std::size_t>, const ResultRow*> at;
    for (const auto& row : grid) {
        at[{row.v, row.y}] = &row;
        silent_corruptions += row.silent_corruptions;
        recovery_runs += row.trials;
        note(format("v=%-2zu y=%-2zu failures %2zu/%zu  p=%.6f  detected %.4f", row.v, row.y, row.failures, row.trials,
                    row.failure_probability(), row.detection_rate()));
    }

    const ResultRow* base = at.at({10, 10});
    const double p = base->failure_probability();
    const bool in_range = p >= 0.0002 && p <= 0.004;

    // Non-increasing along each axis, up to 3 sigma of the pair's larger estimate.
    std::size_t violations = 0;
    for (const auto& row : grid) {
        for (const auto& next : grid) {
            const bool neighbour_v = next.y == row.y && next.v > row.v;
            const bool neighbour_y = next.v == row.v && next.y > row.y;
            if (!neighbour_v && !neighbour_y) {
                continue;
            }
            const double p0 = row.failure_probability();
            const double p1 = next.failure_probability();
            const double s = std::sqrt(2.0) * sigma(std::max(p0, p1), row.trials);
            if (p1 > p0 + 3 * s) {
                ++violations;
                note(format("trend violation: (%zu,%zu)=%.6f -> (%zu,%zu)=%.6f", row.v, row.y, p0, next.v, next.y, p1));
            }
        }
    }
    return {in_range && violations == 0 && grid_seconds < 300.0,
            format("p(10,10)=%.6f in [0.0002,0.004]: %s, trend violations %zu, %.1fs (limit 300s)", p,
                   in_range ? "yes" : "no", violations, grid_seconds)};
}

double model(std::size_t v, std::size_t y) {
    return std::ldexp(1.0, -static_cast<int>(v)) + std::ldexp(1.0, -static_cast<int>(y)) -
           std::ldexp(1.0, -static_cast<int>(v + y));
}

/// Every single-cell replacement in [4, 64) of every cell of 4x4 tables.
ResultRow enumerate_small() {
    const ValueRange range{4, 64};
    ResultRow row{4, 4, 0, 0, 0, 0};
    for (std::uint64_t table_seed = 0; table_seed < 64; ++table_seed) {
        Rng rng(trial_seed(1007, 4, 4, table_seed));
        const auto original = gen_table(4, 4, range, 8, rng);
        std::mt19937_64 key_rng(rng.next());
        const Params params{relmark::testing::random_key(key_rng), 1};
        const auto watermarked = embed_table(original, params).table;
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                for (std::int64_t value = range.lo; value < range.hi; ++value) {
                    if (static_cast<CellWord>(value) == watermarked.cell(r, c)) {
                        continue;
                    }
                    auto tampered = watermarked;
                    tampered.set_cell(r, c, static_cast<CellWord>(value));
                    const auto recovered = recover_table(tampered, params);
                    const auto status = recovered.outcome.groups.front().status;
                    const bool restored = recovered.table == watermarked;
                    record_recovery(status, restored);
                    const bool ok = restored && (status == RecoveryStatus::recovered_exact ||
                                                 status == RecoveryStatus::recovered_lowbits);
                    ++row.trials;
                    row.failures += ok ? 0 : 1;
                    row.silent_corruptions += status == RecoveryStatus::recovered_exact && !restored ? 1 : 0;
                }
            }
        }
    }
    return row;
}

Verdict analytic_cross_check() {
    std::size_t outside = 0;
    double worst = 0;
    std::string worst_point;
    for (const auto& row : grid) {
        const double expected = model(row.v, row.y);
        const double s = sigma(expected, row.trials);
        const double z = std::abs(row.failure_probability() - expected) / s;
        const bool ok = z <= 3.0;
        outside += ok ? 0 : 1;
        note(format("v=%-2zu y=%-2zu measured %.6f  model %.6f  3sigma %.6f  %s", row.v, row.y,
                    row.failure_probability(), expected, 3 * s, ok ? "within" : "OUTSIDE"));
        if (z > worst) {
            worst = z;
            worst_point = format("(%zu,%zu)", row.v, row.y);
        }
    }
    const ResultRow small = enumerate_small();
    const double expected = model(4, 4);
    const double z = std::abs(small.failure_probability() - expected) / sigma(expected, small.trials);
    note(format("enumeration v=4 y=4, values [4,64): %zu/%zu failures = %.6f, model %.6f, 2^-y %.6f, %.1f sigma",
                small.failures, small.trials, small.failure_probability(), expected, std::ldexp(1.0, -4), z));
    outside += z <= 3.0 ? 0 : 1;
    return {outside == 0, format("%zu of %zu checks outside 3 sigma (worst grid point %s at %.1f sigma)", outside,
                                 grid.size() + 1, worst_point.c_str(), worst)};
}

Verdict distortion_bound() {
    // Decimal columns of random scale were covered by the round-trip configurations;
    // add a decimal-heavy pass so every scale and width appears.
    std::mt19937_64 rng(1008);
    for (int t = 0; t < 200; ++t) {
        const auto config = random_config(rng, 1 + rng() % 30, 2 + rng() % 10);
        record_distortion(config.table, embed_table(config.table, config.params).table);
    }
    return {max_distortion_units <= 3,
            format("max |decoded change| = %llu units of the last digit over %zu cells (limit 3)",
                   static_cast<unsigned long long>(max_distortion_units), distortion_cells)};
}

double time_embed_verify(std::size_t rows) {
    std::mt19937_64 rng(1009);
    const auto table = relmark::testing::uniform_table(relmark::testing::integer_schema(10), rows, rng, 4, 1U << 20);
    const Params params{relmark::testing::counting_key(32), 100};
    double best = 1e30;
    for (int run = 0; run < 3; ++run) {
        const auto start = Clock::now();
        const auto embedded = embed_table(table, params);
        const auto report = verify_table(embedded.table, params);
        best = std::min(best, seconds_since(start));
        if (report.classification != TamperClass::clean) {
            return 1e30;
        }
    }
    return best;
}

Verdict linear_complexity() {
    const double small = time_embed_verify(10000);
    const double large = time_embed_verify(100000);
    const double ratio = large / small;
    return {ratio <= 12.0, format("w=1e4 %.3fs, w=1e5 %.3fs, ratio %.2f (limit 12)", small, large, ratio)};
}

Verdict no_silent_corruption() {
    // One more randomized pass over multi-group tables with one tampered cell per
    // group, masked values below 2^v of the smallest group.
    std::mt19937_64 rng(1010);
    for (int t = 0; t < 500; ++t) {
        const auto key = relmark::testing::random_key(rng);
        const Params params{key, 1 + rng() % 5};
        const auto schema = relmark::testing::integer_schema(2 + rng() % 20);
        const std::size_t rows = 10 + rng() % 90;
        Table probe(schema);
        const std::vector<CellWord> zeros(schema.column_count(), 0);
        for (std::size_t i = 0; i < rows; ++i) {
            probe.add_row(static_cast<std::int64_t>(i), zeros);
        }
        std::size_t smallest = SIZE_MAX;
        for (const auto& group : partition(probe, params)) {
            smallest = std::min(smallest, group.size());
        }
        if (smallest < 3) {
            continue;
        }
        const CellWord hi = CellWord{1} << std::min<std::size_t>(smallest, 20);
        std::mt19937_64 values(rng());
        Table table(schema);
        std::vector<CellWord> cells(schema.column_count());
        for (std::size_t i = 0; i < rows; ++i) {
            for (auto& c : cells) {
                c = 4 + values() % (hi - 4);
            }
            table.add_row(static_cast<std::int64_t>(i), cells);
        }
        const auto watermarked = embed_table(table, params).table;
        auto tampered = watermarked;
        for (const auto& group : partition(table, params)) {
            if (group.members.empty()) {
                continue;
            }
            const std::size_t row = group.members[rng() % group.size()];
            const std::size_t column = rng() % table.column_count();
            tampered.set_cell(row, column, static_cast<CellWord>(4 + rng() % (hi - 4)));
        }
        const auto recovered = recover_table(tampered, params);
        for (const auto& group : recovered.outcome.groups) {
            bool restored = true;
            for (const auto member : group.members) {
                restored = restored && std::equal(recovered.table.row(member).begin(), recovered.table.row(member).end(),
                                                  watermarked.row(member).begin());
            }
            record_recovery(group.status, restored);
        }
    }
    return {silent_corruptions == 0,
            format("%zu silent corruptions in %zu recoveries across the randomized suites", silent_corruptions,
                   recovery_runs)};
}

} // namespace

int main() {
    std::printf("relmark acceptance suite\n");
    run(1, "round-trip soundness", round_trip);
    run(2, "permutation invariance", permutation_invariance);
    run(3, "figure-one grid", figure_one);
    run(4, "detection rate", detection_rate);
    run(5, "recovery exactness", recovery_exactness);
    run(6, "failure magnitude and trend", magnitude);
    run(7, "analytic cross-check", analytic_cross_check);
    run(8, "distortion bound", distortion_bound);
    run(9, "linear complexity", linear_complexity);
    run(10, "no silent corruption", no_silent_corruption);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
