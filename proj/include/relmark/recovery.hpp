#pragma once

#include "relmark/crypto.hpp"
#include "relmark/table.hpp"

#include <optional>
#include <vector>

namespace relmark {

struct RecoveryOptions {
    /// XORed into every reconstructed word before it is written. Non-zero only in
    /// tests that corrupt the recovery path on purpose.
    CellWord candidate_fault = 0;
};

struct CellChange {
    std::size_t row = 0; // position within the group
    std::size_t column = 0;
    CellWord old_word = 0;
    CellWord new_word = 0;
};

struct GroupRepair {
    RecoveryStatus status = RecoveryStatus::clean;
    std::vector<CellChange> changes;
};

/// Reconstructs the masked word of cell (row, column) from the XOR heredity of the
/// column's attribute watermark: the watermark stored in column p(column) XOR the
/// key material XOR the folds of every other row. Returns nothing when the folded
/// value does not fit the column width or has bits 0-1 set.
std::optional<CellWord> xor_candidate(const GroupCells& cells, const SecretKey& key, std::size_t row,
                                      std::size_t column);

/// Repairs one group according to its verification vectors:
///
///   single-cell   if re-embedding would touch the watermark bits of a single cell
///                 only, the tamper is taken as a low-bit one (recovered-lowbits).
///                 Otherwise XOR reconstruction of the localized cell, watermark bits
///                 restored, accepted only if the group then verifies clean
///                 (recovered-exact).
///   low-bit-only  re-embed from the current masked words (recovered-lowbits).
///   otherwise     localized-only.
///
/// `cells` is modified only when the returned status is a recovered one.
GroupRepair recover_group(GroupCells& cells, const VerificationVectors& vectors, const SecretKey& key,
                          const RecoveryOptions& options = {});

struct RecoverResult {
    Table table;
    RecoveryOutcome outcome;
};

RecoverResult recover_table(const Table& table, const Params& params, const RecoveryOptions& options = {});

} // namespace relmark
