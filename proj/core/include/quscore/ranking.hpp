#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quscore/scoring.hpp"

namespace quscore {

/// Complete teams x cases x entities score tensor.
/// Construction fails with IncompleteMatrixError on any gap.
class ScoreMatrix {
public:
    /// rows are (team, case_id, scores per entity); order is not significant.
    struct Cell {
        std::string team;
        std::string case_id;
        std::array<double, 3> score{};  // WT, TC, ET
    };

    static ScoreMatrix from_cells(std::span<const Cell> cells);

    const std::vector<std::string>& teams() const { return teams_; }
    const std::vector<std::string>& cases() const { return cases_; }
    std::size_t team_count() const { return teams_.size(); }
    std::size_t case_count() const { return cases_.size(); }

    double score(std::size_t team, std::size_t case_idx, Entity e) const {
        return scores_[team * cases_.size() + case_idx][static_cast<int>(e)];
    }

private:
    std::vector<std::string> teams_;   // sorted
    std::vector<std::string> cases_;   // sorted
    std::vector<std::array<double, 3>> scores_;  // [team * #cases + case]
};

/// Per-case, per-entity ranks and the CRS / NRS / FRS aggregates.
struct RankTable {
    std::vector<std::string> teams;
    std::vector<std::string> cases;
    /// ranks[team * #cases + case][entity]; tied teams share average ranks.
    std::vector<std::array<double, 3>> ranks;
    std::vector<double> crs;  // [team * #cases + case], sum of the 3 entity ranks
    std::vector<double> nrs;  // crs / (3 * #teams)
    std::vector<double> frs;  // [team], mean crs over cases

    double rank(std::size_t team, std::size_t case_idx, Entity e) const {
        return ranks[team * cases.size() + case_idx][static_cast<int>(e)];
    }
    double crs_at(std::size_t team, std::size_t case_idx) const {
        return crs[team * cases.size() + case_idx];
    }
    double mean_nrs(std::size_t team) const;
};

/// Ranks every team within each case and entity (higher score = better =
/// smaller rank; ties get average ranks), then aggregates.
RankTable per_case_ranks(const ScoreMatrix& matrix);

enum class PermutationMode {
    Auto,        // exhaustive when #cases <= kExhaustiveLimit, else Monte Carlo
    Exhaustive,  // all 2^n sign assignments
    MonteCarlo,  // n_perms random sign assignments, +1-smoothed p
};

inline constexpr std::size_t kExhaustiveLimit = 20;

struct PermTestResult {
    std::string team_a;
    std::string team_b;
    double observed_delta = 0.0;  // FRS_worse - FRS_better, >= 0
    double p_value = 1.0;
    std::uint64_t n_permutations = 0;  // 2^n for exhaustive runs
    std::uint64_t seed = 0;
    bool exhaustive = false;
};

/// Paired sign-swap permutation test on the two teams' per-case CRS vectors.
/// Each permutation independently swaps (or not, probability 1/2) the pair's
/// CRS for every case; p is the proportion of permutations whose FRS
/// difference is >= the observed one. Monte Carlo p-values are
/// (hits + 1) / (n_perms + 1); exhaustive p-values are exact.
PermTestResult permutation_test(std::span<const double> crs_a, std::span<const double> crs_b,
                                std::uint64_t n_perms, std::uint64_t seed,
                                PermutationMode mode = PermutationMode::Auto);

/// Deterministic per-pair seed, symmetric in team order.
std::uint64_t pair_seed(std::uint64_t master_seed, std::string_view team_a,
                        std::string_view team_b);

struct LeaderboardEntry {
    int rank = 0;  // dense: 1, 2, 3, ...
    std::string team;
    double frs = 0.0;
    double mean_nrs = 0.0;
};

struct Leaderboard {
    std::vector<LeaderboardEntry> entries;  // best first
    std::vector<PermTestResult> pairwise;
    double alpha = 0.05;
};

/// Sorts teams by FRS (ascending, better first) and groups them: a team
/// shares the current displayed rank iff its test against the group's first
/// member has p >= alpha; otherwise it opens the next dense rank.
Leaderboard build_leaderboard(const RankTable& table, std::vector<PermTestResult> pairwise,
                              double alpha = 0.05);

struct RankingRun {
    RankTable table;
    Leaderboard board;
};

/// Full ranking pipeline: per-case ranks, all pairwise permutation tests
/// (parallelized over pairs; per-pair seeds make the result independent of
/// the parallelism degree), and the grouped leaderboard.
RankingRun run_ranking(const ScoreMatrix& matrix, std::uint64_t n_perms,
                       std::uint64_t master_seed, double alpha = 0.05,
                       PermutationMode mode = PermutationMode::Auto, int jobs = 1);

}  // namespace quscore
