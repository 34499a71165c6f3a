#pragma once

#include "relmark/crypto.hpp"
#include "relmark/table.hpp"

namespace relmark {

/// Recomputes W1/W2 for the group and compares them with the stored watermark bits.
///
/// V1[j] compares W1^j with bit 0 of column p(j); V2[i] compares W2^i with bit 1 of
/// row i. A snapshot of V1 is then disambiguated: a failing column j whose storage
/// column p(j) also failed is cleared, because the failure at j is explained by a
/// tampered low bit in column p(j). Localized cells are failing rows x failing columns.
VerificationVectors verify_group(const GroupCells& cells, const SecretKey& key);

/// Failure pattern of one group's vectors.
///
///   single-cell      one failing row and one failing column
///   low-bit-only     failures confined to one layer: some V1 false with every V2 true
///                    (sparse), or some V2 false with every V1 true
///   group-structure  every V2 true but more than half of V1 false, the signature of
///                    rows entering or leaving the group (primary-key tampering)
///   multi-cell       anything else
TamperClass classify(const VerificationVectors& vectors);

/// Partitions, verifies every group, and classifies the table by its worst group.
TamperReport verify_table(const Table& table, const Params& params);

} // namespace relmark
