#include "relmark/reports.hpp"

#include "relmark/verifier.hpp"

namespace relmark {

namespace {

using json = nlohmann::json;

json pk_json(const PrimaryKey& key) {
    if (const auto* number = std::get_if<std::int64_t>(&key)) {
        return *number;
    }
    return std::get<std::string>(key);
}

json group_json(std::size_t index, const std::vector<std::size_t>& members, const VerificationVectors& vectors,
                std::string_view status, const Table& table) {
    json localized = json::array();
    for (const auto& cell : vectors.localized) {
        localized.push_back({{"pk", pk_json(table.key(members[cell.row]))},
                             {"column", table.schema().columns[cell.column].name}});
    }
    return {
        {"index", index},
        {"size", members.size()},
        {"v1", vectors.attribute_ok},
        {"v1_raw", vectors.attribute_ok_raw},
        {"v2", vectors.tuple_ok},
        {"localized", std::move(localized)},
        {"mismatched_bits", vectors.mismatched_bits},
        {"status", status},
    };
}

} // namespace

nlohmann::json tamper_report_json(const TamperReport& report, const Table& table) {
    json groups = json::array();
    for (const auto& group : report.groups) {
        groups.push_back(group_json(group.index, group.members, group.vectors, to_string(group.classification), table));
    }
    return {
        {"classification", to_string(report.classification)},
        {"watermark_bits", report.total_bits()},
        {"mismatched_bits", report.mismatched_bits()},
        {"groups", std::move(groups)},
    };
}

nlohmann::json recovery_report_json(const RecoveryOutcome& outcome, const Table& original) {
    json groups = json::array();
    TamperClass worst = TamperClass::clean;
    for (const auto& group : outcome.groups) {
        groups.push_back(group_json(group.index, group.members, group.vectors, to_string(group.status), original));
        const TamperClass found = classify(group.vectors);
        if (static_cast<int>(found) > static_cast<int>(worst)) {
            worst = found;
        }
    }

    json cells = json::array();
    for (const auto& cell : outcome.cells) {
        const auto& spec = original.schema().columns[cell.column];
        cells.push_back({
            {"pk", pk_json(original.key(cell.row))},
            {"column", spec.name},
            {"old_word", cell.old_word},
            {"new_word", cell.new_word},
            {"old_value", decode_cell(cell.old_word, spec).to_string()},
            {"new_value", decode_cell(cell.new_word, spec).to_string()},
        });
    }

    json summary = json::object();
    for (const auto status : {RecoveryStatus::clean, RecoveryStatus::recovered_exact, RecoveryStatus::recovered_lowbits,
                              RecoveryStatus::localized_only, RecoveryStatus::failed}) {
        summary[std::string(to_string(status))] = outcome.count(status);
    }
    return {
        {"classification", to_string(worst)},
        {"complete", outcome.complete()},
        {"summary", std::move(summary)},
        {"recovered_cells", std::move(cells)},
        {"groups", std::move(groups)},
    };
}

} // namespace relmark
