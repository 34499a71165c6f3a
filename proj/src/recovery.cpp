#include "relmark/recovery.hpp"

#include "relmark/embedder.hpp"
#include "relmark/grouping.hpp"
#include "relmark/verifier.hpp"

#include <algorithm>

namespace relmark {

namespace {

std::vector<CellChange> diff(const GroupCells& before, const GroupCells& after) {
    std::vector<CellChange> changes;
    for (std::size_t i = 0; i < before.rows; ++i) {
        for (std::size_t j = 0; j < before.columns; ++j) {
            if (before.at(i, j) != after.at(i, j)) {
                changes.push_back({i, j, before.at(i, j), after.at(i, j)});
            }
        }
    }
    return changes;
}

bool masked_words_equal(const GroupCells& a, const GroupCells& b) {
    return std::equal(a.words.begin(), a.words.end(), b.words.begin(), b.words.end(),
                      [](CellWord x, CellWord y) { return mask(x) == mask(y); });
}

GroupRepair commit(GroupCells& cells, GroupCells&& repaired, RecoveryStatus status) {
    GroupRepair repair{status, diff(cells, repaired)};
    cells = std::move(repaired);
    return repair;
}

std::optional<GroupCells> reconstruct_cell(const GroupCells& cells, const SecretKey& key, std::size_t row,
                                           std::size_t column, const RecoveryOptions& options) {
    const auto candidate = xor_candidate(cells, key, row, column);
    if (!candidate) {
        return std::nullopt;
    }
    const CellWord word = *candidate ^ options.candidate_fault;
    if (word > word_mask(cells.widths[column])) {
        return std::nullopt;
    }

    GroupCells trial = cells;
    trial.at(row, column) = mask(word);
    // The cell's own watermark bits: bit 0 belongs to the column stored here, bit 1
    // to the row's tuple watermark. Both are recomputed from the repaired data.
    const bool attribute_bit = attribute_watermark(key, trial, trial.source_column(column))[row];
    const bool tuple_bit = tuple_watermark(key, trial.row(row))[column];
    trial.at(row, column) = set_bit(set_bit(trial.at(row, column), 0, attribute_bit), 1, tuple_bit);

    if (!verify_group(trial, key).clean()) {
        return std::nullopt;
    }
    return trial;
}

} // namespace

std::optional<CellWord> xor_candidate(const GroupCells& cells, const SecretKey& key, std::size_t row,
                                      std::size_t column) {
    BitString folded = attribute_key_material(key, cells.index, column, cells.rows);
    for (std::size_t i = 0; i < cells.rows; ++i) {
        if (i != row) {
            folded.xor_low(fold_value(mask(cells.at(i, column)), cells.rows));
        }
    }
    const std::size_t stored_in = cells.target_column(column);
    for (std::size_t i = 0; i < cells.rows; ++i) {
        if (get_bit(cells.at(i, stored_in), 0)) {
            folded.set(i, !folded[i]);
        }
    }
    if (!folded.below_power_of_two(cells.widths[column])) {
        return std::nullopt;
    }
    const CellWord word = folded.low_word();
    if ((word & 3U) != 0) {
        return std::nullopt;
    }
    return word;
}

GroupRepair recover_group(GroupCells& cells, const VerificationVectors& vectors, const SecretKey& key,
                          const RecoveryOptions& options) {
    switch (classify(vectors)) {
    case TamperClass::clean:
        return {RecoveryStatus::clean, {}};

    case TamperClass::single_cell: {
        // Both low bits of one cell flipped with its data intact looks like a
        // single-cell tamper one column over. Re-embedding then touches that cell
        // only, which a masked-value tamper cannot produce without a digest collision.
        GroupCells reembedded = cells;
        embed_group(reembedded, key);
        if (diff(cells, reembedded).size() == 1) {
            return commit(cells, std::move(reembedded), RecoveryStatus::recovered_lowbits);
        }
        const auto row = static_cast<std::size_t>(
            std::find(vectors.tuple_ok.begin(), vectors.tuple_ok.end(), false) - vectors.tuple_ok.begin());
        const auto column = static_cast<std::size_t>(
            std::find(vectors.attribute_ok.begin(), vectors.attribute_ok.end(), false) -
            vectors.attribute_ok.begin());
        if (auto repaired = reconstruct_cell(cells, key, row, column, options)) {
            return commit(cells, std::move(*repaired), RecoveryStatus::recovered_exact);
        }
        return {RecoveryStatus::failed, {}};
    }

    case TamperClass::low_bit_only: {
        GroupCells reembedded = cells;
        embed_group(reembedded, key);
        if (masked_words_equal(cells, reembedded) && verify_group(reembedded, key).clean()) {
            return commit(cells, std::move(reembedded), RecoveryStatus::recovered_lowbits);
        }
        return {RecoveryStatus::failed, {}};
    }

    case TamperClass::multi_cell:
    case TamperClass::group_structure:
        break;
    }
    return {RecoveryStatus::localized_only, {}};
}

RecoverResult recover_table(const Table& table, const Params& params, const RecoveryOptions& options) {
    RecoverResult result{table, {}};
    for (const auto& group : partition(table, params)) {
        GroupCells cells = GroupCells::gather(table, group);
        GroupRecovery entry;
        entry.index = group.index;
        entry.members = group.members;
        entry.vectors = verify_group(cells, params.key);

        const GroupRepair repair = recover_group(cells, entry.vectors, params.key, options);
        entry.status = repair.status;
        if (!repair.changes.empty()) {
            cells.scatter(result.table, group);
            for (const auto& change : repair.changes) {
                result.outcome.cells.push_back(
                    {group.index, group.members[change.row], change.column, change.old_word, change.new_word});
            }
        }
        result.outcome.groups.push_back(std::move(entry));
    }
    return result;
}

} // namespace relmark
