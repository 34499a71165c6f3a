#include "relmark/verifier.hpp"

#include "relmark/embedder.hpp"
#include "relmark/grouping.hpp"

#include <algorithm>

namespace relmark {

namespace {

int severity(TamperClass value) {
    switch (value) {
    case TamperClass::clean:
        return 0;
    case TamperClass::low_bit_only:
        return 1;
    case TamperClass::single_cell:
        return 2;
    case TamperClass::multi_cell:
        return 3;
    case TamperClass::group_structure:
        return 4;
    }
    return 0;
}

} // namespace

VerificationVectors verify_group(const GroupCells& cells, const SecretKey& key) {
    VerificationVectors vectors;
    vectors.attribute_ok.assign(cells.columns, true);
    vectors.tuple_ok.assign(cells.rows, true);
    vectors.total_bits = 2 * cells.rows * cells.columns;
    if (cells.rows == 0) {
        vectors.attribute_ok_raw = vectors.attribute_ok;
        return vectors;
    }

    for (std::size_t j = 0; j < cells.columns; ++j) {
        const BitString expected = attribute_watermark(key, cells, j);
        const std::size_t stored_in = cells.target_column(j);
        BitString extracted(cells.rows);
        for (std::size_t i = 0; i < cells.rows; ++i) {
            extracted.set(i, get_bit(cells.at(i, stored_in), 0));
        }
        const std::size_t distance = extracted.hamming_distance(expected);
        vectors.mismatched_bits += distance;
        vectors.attribute_ok[j] = distance == 0;
    }

    for (std::size_t i = 0; i < cells.rows; ++i) {
        const BitString expected = tuple_watermark(key, cells.row(i));
        BitString extracted(cells.columns);
        for (std::size_t j = 0; j < cells.columns; ++j) {
            extracted.set(j, get_bit(cells.at(i, j), 1));
        }
        const std::size_t distance = extracted.hamming_distance(expected);
        vectors.mismatched_bits += distance;
        vectors.tuple_ok[i] = distance == 0;
    }

    vectors.attribute_ok_raw = vectors.attribute_ok;
    for (std::size_t j = 0; j < cells.columns; ++j) {
        if (!vectors.attribute_ok_raw[j] && !vectors.attribute_ok_raw[cells.target_column(j)]) {
            vectors.attribute_ok[j] = true;
        }
    }

    for (std::size_t i = 0; i < cells.rows; ++i) {
        if (vectors.tuple_ok[i]) {
            continue;
        }
        for (std::size_t j = 0; j < cells.columns; ++j) {
            if (!vectors.attribute_ok[j]) {
                vectors.localized.push_back({i, j});
            }
        }
    }
    return vectors;
}

TamperClass classify(const VerificationVectors& vectors) {
    const auto failed_columns = static_cast<std::size_t>(
        std::count(vectors.attribute_ok.begin(), vectors.attribute_ok.end(), false));
    const auto failed_rows =
        static_cast<std::size_t>(std::count(vectors.tuple_ok.begin(), vectors.tuple_ok.end(), false));
    // Failures that the disambiguation pass cleared still count as tampering.
    const bool raw_failures =
        std::find(vectors.attribute_ok_raw.begin(), vectors.attribute_ok_raw.end(), false) !=
        vectors.attribute_ok_raw.end();

    if (failed_columns == 0 && failed_rows == 0) {
        return raw_failures ? TamperClass::low_bit_only : TamperClass::clean;
    }
    if (failed_columns == 1 && failed_rows == 1) {
        return TamperClass::single_cell;
    }
    if (failed_rows == 0) {
        return 2 * failed_columns > vectors.attribute_ok.size() ? TamperClass::group_structure
                                                                 : TamperClass::low_bit_only;
    }
    if (failed_columns == 0) {
        // Column failures that cancelled each other out cannot be attributed to one layer.
        return raw_failures ? TamperClass::multi_cell : TamperClass::low_bit_only;
    }
    return TamperClass::multi_cell;
}

TamperReport verify_table(const Table& table, const Params& params) {
    TamperReport report;
    for (const auto& group : partition(table, params)) {
        GroupVerdict verdict;
        verdict.index = group.index;
        verdict.members = group.members;
        verdict.vectors = verify_group(GroupCells::gather(table, group), params.key);
        verdict.classification = classify(verdict.vectors);
        if (severity(verdict.classification) > severity(report.classification)) {
            report.classification = verdict.classification;
        }
        report.groups.push_back(std::move(verdict));
    }
    return report;
}

} // namespace relmark
