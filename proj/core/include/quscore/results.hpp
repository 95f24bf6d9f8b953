#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "quscore/ranking.hpp"
#include "quscore/scoring.hpp"

namespace quscore {

/// One row of the challenge result schema.
struct ResultRow {
    std::string team;
    std::string case_id;
    std::array<double, 3> dice_auc{};  // WT, TC, ET
    std::array<double, 3> ftp_auc{};
    std::array<double, 3> ftn_auc{};
    std::array<double, 3> score{};
    double overall = 0.0;
};

ResultRow to_result_row(std::string team, const CaseResult& result);

/// The exact CSV header, stable across runs.
std::string result_csv_header();

/// CSV: fixed 4-decimal formatting, comma separated, LF line endings.
void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows);

/// JSON: same fields at full precision.
void write_results_json(const std::filesystem::path& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results_json(const std::filesystem::path& path);

/// Per-threshold curve dump: tau,dsc,ftp,ftn[,precision,recall].
void write_curve_csv(const std::filesystem::path& path, const EntityCurve& curve);

/// Ranking artifacts.
void write_rank_table_csv(const std::filesystem::path& path, const RankTable& table);
void write_pairwise_csv(const std::filesystem::path& path,
                        std::span<const PermTestResult> tests);
void write_leaderboard_csv(const std::filesystem::path& path, const Leaderboard& board);
void write_leaderboard_json(const std::filesystem::path& path, const Leaderboard& board,
                            const RankTable& table);

}  // namespace quscore
