#pragma once

// Monte-Carlo harness for single-cell tamper detection and recovery.
//
// Every trial builds one group of v rows and y integer columns, embeds it with
// g = 1, replaces one cell with a fresh value, then verifies and recovers. A trial
// fails unless recovery reports recovered-exact or recovered-lowbits and the
// result equals the watermarked table bit for bit.

#include "relmark/recovery.hpp"
#include "relmark/table.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace relmark {

struct ValueRange {
    std::int64_t lo = 4;
    std::int64_t hi = 1000; // exclusive
};

struct TrialConfig {
    std::vector<std::size_t> rows_per_group{10, 30, 50};
    std::vector<std::size_t> columns{10, 20, 30, 40, 50};
    std::size_t trials = 10000;
    ValueRange range;
    std::uint64_t seed = 1;
    unsigned width_bits = 32;
    bool tamper = true;

    /// trials >= 1, 4 <= lo < hi <= 2^min(v), y >= 2, values fit the signed width.
    void validate() const;
};

/// Portable generator: mt19937_64 plus rejection sampling, so a seed yields the
/// same stream with every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [range.lo, range.hi).
    std::int64_t uniform(const ValueRange& range);

private:
    std::mt19937_64 engine_;
};

/// Seed of one trial, a pure function of (seed, v, y, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::size_t rows, std::size_t columns, std::size_t trial);

/// v rows with keys 0..v-1 and y integer columns c1..cy of uniform values.
Table gen_table(std::size_t rows, std::size_t columns, const ValueRange& range, unsigned width_bits, Rng& rng);

struct Attack {
    Table table;
    std::size_t row = 0;
    std::size_t column = 0;
    CellWord old_word = 0;
    CellWord new_word = 0;
};

/// Replaces one uniformly chosen cell with a uniform value from `range` whose
/// decoded value differs from the current one.
Attack attack_single_cell(const Table& table, const ValueRange& range, Rng& rng);

struct TrialOutcome {
    bool detected = false;
    RecoveryStatus status = RecoveryStatus::clean;
    bool restored = false;          // recovered table == watermarked table
    bool silent_corruption = false; // recovered-exact yet not restored

    bool success() const noexcept;
};

TrialOutcome run_trial(std::size_t rows, std::size_t columns, const TrialConfig& config, std::size_t trial);

struct ResultRow {
    std::size_t v = 0;
    std::size_t y = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t detected = 0;
    std::size_t silent_corruptions = 0;

    double failure_probability() const noexcept;
    double detection_rate() const noexcept;
};

/// One row per (v, y), sorted by v then y.
std::vector<ResultRow> run_trials(const TrialConfig& config,
                                  const std::function<void(const ResultRow&)>& progress = {});

/// Header `v,y,trials,failures,failure_probability`, one line per grid cell.
std::string render_results(const std::vector<ResultRow>& results);
void emit_results(const std::vector<ResultRow>& results, const std::filesystem::path& path);

} // namespace relmark
