// Acceptance suite: one self-contained check per shipping criterion.
// Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "quscore/nifti.hpp"
#include "quscore/ranking.hpp"
#include "quscore/scoring.hpp"
#include "quscore/synth.hpp"
#include "published_results.hpp"
#include "temp_dir.hpp"

using namespace quscore;

namespace {

class Failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure(msg);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

EntityCurve constant_curve(double dsc_auc, double ftp_auc, double ftn_auc) {
    EntityCurve c;
    c.taus = {0, 100};
    c.dsc = {dsc_auc, dsc_auc};
    c.ftp = {ftp_auc, ftp_auc};
    c.ftn = {ftn_auc, ftn_auc};
    return c;
}

// ---------------------------------------------------------------------------
// 1. Arithmetic regression against the published per-team table.

std::string criterion_published_table() {
    double max_entity_err = 0.0;
    double max_overall_err = 0.0;
    for (const auto& row : fixtures::kPublishedRows) {
        std::array<EntityCurve, 3> curves;
        for (int e = 0; e < 3; ++e) {
            curves[static_cast<std::size_t>(e)] =
                constant_curve(row.dice_auc[static_cast<std::size_t>(e)],
                               row.ftp_auc[static_cast<std::size_t>(e)],
                               row.ftn_auc[static_cast<std::size_t>(e)]);
        }
        const CaseResult result = case_result_from_curves(curves, ScoreVariant::Full, row.team);
        for (int e = 0; e < 3; ++e) {
            const double err = std::abs(result.entity[static_cast<std::size_t>(e)].score -
                                        row.score[static_cast<std::size_t>(e)]);
            max_entity_err = std::max(max_entity_err, err);
            require(err <= 5e-4, std::string(row.team) + " entity " + std::to_string(e) +
                                     " score off by " + fmt(err));
        }
        const double overall_err = std::abs(result.overall - row.overall);
        max_overall_err = std::max(max_overall_err, overall_err);
        require(overall_err <= 5e-4,
                std::string(row.team) + " overall score off by " + fmt(overall_err));
    }
    return "15 teams x 3 entities; max entity err " + fmt(max_entity_err) +
           ", max overall err " + fmt(max_overall_err);
}

// ---------------------------------------------------------------------------
// 2. Worked-example curve semantics: the example with the late Dice gain pays
//    for it through strictly larger filtered-TP/TN areas, and the combined
//    score prefers the cheaper example.

std::string criterion_worked_examples() {
    const std::vector<double> taus{25, 50, 75, 100};
    const std::vector<double> dsc1{0.97, 0.965, 0.96, 0.94};
    const std::vector<double> ftp1{0.1, 0.05, 0.0, 0.0};
    const std::vector<double> ftn1{0.0019, 0.0016, 0.0015, 0.0};
    const std::vector<double> dsc2{0.975, 0.97, 0.955, 0.92};
    const std::vector<double> ftp2{0.25, 0.15, 0.0, 0.0};
    const std::vector<double> ftn2{0.0096, 0.0026, 0.0015, 0.0};

    const double dsc_auc1 = curve_auc(taus, dsc1);
    const double dsc_auc2 = curve_auc(taus, dsc2);
    require(std::abs(dsc_auc1 - 0.9600) <= 1e-9,
            "example-1 Dice AUC expected 0.9600, got " + fmt(dsc_auc1));

    // the Dice gain: example-2 wins at the aggressive thresholds and its AUC
    // sits above its own unfiltered baseline
    require(dsc2[0] > dsc1[0] + 1e-9 && dsc2[1] > dsc1[1] + 1e-9,
            "example-2 should have the higher Dice at tau = 25 and 50");
    require(dsc_auc2 > dsc2.back() + 1e-9, "example-2 Dice AUC should exceed its baseline");

    const double ftp_auc1 = curve_auc(taus, ftp1);
    const double ftp_auc2 = curve_auc(taus, ftp2);
    const double ftn_auc1 = curve_auc(taus, ftn1);
    const double ftn_auc2 = curve_auc(taus, ftn2);
    require(ftp_auc2 > ftp_auc1 + 1e-9, "example-2 must filter strictly more TPs");
    require(ftn_auc2 > ftn_auc1 + 1e-9, "example-2 must filter strictly more TNs");

    auto assemble = [&](const std::vector<double>& d, const std::vector<double>& p,
                        const std::vector<double>& n) {
        EntityCurve c;
        c.taus = taus;
        c.dsc = d;
        c.ftp = p;
        c.ftn = n;
        return entity_score(c, ScoreVariant::Full).score;
    };
    const double score1 = assemble(dsc1, ftp1, ftn1);
    const double score2 = assemble(dsc2, ftp2, ftn2);
    require(score1 > score2 + 1e-9, "the combined score must prefer example-1");

    return "dsc_auc " + fmt(dsc_auc1) + "/" + fmt(dsc_auc2) + ", ftp_auc " + fmt(ftp_auc1) +
           "/" + fmt(ftp_auc2) + ", ftn_auc " + fmt(ftn_auc1) + "/" + fmt(ftn_auc2) +
           ", score " + fmt(score1) + "/" + fmt(score2);
}

// ---------------------------------------------------------------------------
// 3. Optimized curve computation vs naive per-voxel per-threshold enumeration.

std::string criterion_bruteforce_equivalence() {
    const ThresholdGrid grid = ThresholdGrid::default_grid();
    std::mt19937_64 noise_rng(12345);

    long checked_counts = 0;
    for (int trial = 0; trial < 200; ++trial) {
        PhantomParams params;
        params.shape = GridShape(16, 16, 16);
        params.tumor_fraction = 0.002 + 0.04 * (trial % 5);
        params.error_rate = 0.15 * (trial % 4);
        params.blur = 0.8 + 0.5 * (trial % 3);
        params.sample_count = 6;
        params.seed = static_cast<std::uint64_t>(trial);
        const Phantom phantom = make_phantom(params);
        const EntitySet gt_masks = extract_entity_masks(phantom.gt);
        const EntitySet pred_masks = extract_entity_masks(phantom.pred);

        for (Entity e : kEntities) {
            UncertaintyMap unc;
            if (trial % 8 == 7) {
                // arbitrary map, heavy on values equal to grid thresholds
                unc.shape = phantom.gt.shape;
                unc.entity = e;
                unc.values.resize(static_cast<std::size_t>(unc.shape.voxel_count()));
                for (auto& v : unc.values) {
                    v = noise_rng() % 2 == 0
                            ? static_cast<float>(5 * (noise_rng() % 21))
                            : static_cast<float>(noise_rng() % 10000) / 100.0f;
                }
            } else {
                unc = gen_uncertainty(phantom, e, kAllGenerators[trial % 7]);
            }

            const auto series = confusion_series(gt_masks[e], pred_masks[e], unc, grid);
            for (std::size_t t = 0; t < grid.size(); ++t) {
                const auto naive = oracle::confusion_at(gt_masks[e], pred_masks[e], unc, grid[t]);
                require(series[t].tp == naive.tp && series[t].tn == naive.tn &&
                            series[t].fp == naive.fp && series[t].fn == naive.fn &&
                            series[t].filtered == naive.filtered,
                        "count mismatch at trial " + std::to_string(trial));
                ++checked_counts;
            }

            const EntityCurve curve =
                compute_entity_curve(gt_masks[e], pred_masks[e], unc, grid);
            const oracle::Curve naive =
                oracle::curve(gt_masks[e], pred_masks[e], unc, grid.taus());
            for (std::size_t t = 0; t < grid.size(); ++t) {
                require(std::abs(curve.dsc[t] - naive.dsc[t]) <= 1e-12 &&
                            std::abs(curve.ftp[t] - naive.ftp[t]) <= 1e-12 &&
                            std::abs(curve.ftn[t] - naive.ftn[t]) <= 1e-12,
                        "ratio mismatch at trial " + std::to_string(trial));
            }
            const EntityScore fast = entity_score(curve);
            const double auc_ref = oracle::trapezoid_auc(naive.taus, naive.dsc);
            require(std::abs(fast.auc_dsc - auc_ref) <= 1e-12, "AUC mismatch");
        }
    }
    return "200 phantoms (16^3), " + std::to_string(checked_counts) +
           " threshold points compared exactly";
}

// ---------------------------------------------------------------------------
// 4. Oracle-map dominance: zero filtered-TP/TN area, best possible score.

std::string criterion_oracle_dominance() {
    const ThresholdGrid grid = ThresholdGrid::default_grid();
    double min_margin = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
        PhantomParams params;
        params.shape = GridShape(12 + 2 * (trial % 5), 14, 13);
        params.tumor_fraction = 0.01 + 0.02 * (trial % 4);
        params.error_rate = 0.1 + 0.15 * (trial % 4);
        params.blur = 1.0 + 0.4 * (trial % 3);
        params.sample_count = 6;
        params.seed = 1000 + static_cast<std::uint64_t>(trial);
        const Phantom phantom = make_phantom(params);
        const EntitySet gt_masks = extract_entity_masks(phantom.gt);
        const EntitySet pred_masks = extract_entity_masks(phantom.pred);

        for (Entity e : kEntities) {
            const auto oracle_unc = gen_uncertainty(phantom, e, GeneratorKind::Oracle);
            const EntityScore oracle_score = entity_score(
                compute_entity_curve(gt_masks[e], pred_masks[e], oracle_unc, grid));
            require(oracle_score.auc_ftp == 0.0 && oracle_score.auc_ftn == 0.0,
                    "oracle map must have exactly zero FTP/FTN area");

            for (GeneratorKind kind : kAllGenerators) {
                if (kind == GeneratorKind::Oracle) continue;
                const auto unc = gen_uncertainty(phantom, e, kind);
                const EntityScore other = entity_score(
                    compute_entity_curve(gt_masks[e], pred_masks[e], unc, grid));
                require(oracle_score.score >= other.score,
                        std::string("oracle must dominate ") +
                            std::string(generator_name(kind)));
                min_margin = std::min(min_margin, oracle_score.score - other.score);
            }
        }
    }
    return "50 phantoms x 3 entities x 6 competitors; min margin " + fmt(min_margin);
}

// ---------------------------------------------------------------------------
// 5. Background-uncertain failure mode: near-total filtered-TN area, and the
//    full score punishes it where the Dice+FTP ablation cannot.

std::string criterion_adversarial_ftn() {
    const ThresholdGrid grid = ThresholdGrid::default_grid();
    double min_ftn = 1.0;
    double max_gap = 0.0;
    for (int trial = 0; trial < 18; ++trial) {
        PhantomParams params;
        params.shape = trial % 2 == 0 ? GridShape(24, 24, 24) : GridShape(32, 32, 32);
        params.tumor_fraction = trial % 3 == 0 ? 0.002 : trial % 3 == 1 ? 0.005 : 0.01;
        params.error_rate = 0.1 + 0.15 * (trial % 2);
        params.blur = 1.2;
        params.seed = 7000 + static_cast<std::uint64_t>(trial);
        const Phantom phantom = make_phantom(params);
        const EntitySet gt_masks = extract_entity_masks(phantom.gt);
        const EntitySet pred_masks = extract_entity_masks(phantom.pred);

        for (Entity e : kEntities) {
            const auto unc = gen_uncertainty(phantom, e, GeneratorKind::BackgroundUncertain);
            const EntityCurve curve =
                compute_entity_curve(gt_masks[e], pred_masks[e], unc, grid);
            const EntityScore full = entity_score(curve, ScoreVariant::Full);
            const EntityScore ablated = entity_score(curve, ScoreVariant::DscPlusFtp);
            require(full.auc_ftn >= 0.85,
                    "FTN area " + fmt(full.auc_ftn) + " below 0.85 at trial " +
                        std::to_string(trial));
            require(full.score < ablated.score,
                    "full score must sit strictly below the Dice+FTP ablation");
            min_ftn = std::min(min_ftn, full.auc_ftn);
            max_gap = std::max(max_gap, ablated.score - full.score);
        }
    }
    return "18 low-fraction phantoms; min ftn_auc " + fmt(min_ftn) +
           ", max ablation gap " + fmt(max_gap);
}

// ---------------------------------------------------------------------------
// 6. Permutation-test correctness: Monte Carlo vs exhaustive enumeration,
//    exact p = 1 on identical teams, bit-stable across reruns and threads.

std::string criterion_permutation() {
    std::mt19937_64 rng(2024);
    double max_sigmas = 0.0;

    // identical teams
    const std::vector<double> same{3, 4.5, 6, 3, 3};
    require(permutation_test(same, same, 1, 0, PermutationMode::Exhaustive).p_value == 1.0,
            "identical teams must give exhaustive p = 1");
    require(permutation_test(same, same, 100000, 55, PermutationMode::MonteCarlo).p_value ==
                1.0,
            "identical teams must give Monte Carlo p = 1 exactly");

    std::vector<std::pair<std::vector<double>, std::vector<double>>> fixture_pairs;
    fixture_pairs.push_back({{3, 3, 3}, {6, 6, 6}});
    for (int f = 0; f < 8; ++f) {
        const std::size_t n = 4 + static_cast<std::size_t>(f);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = 3.0 + 0.5 * static_cast<double>(rng() % 7);
            b[i] = 3.0 + 0.5 * static_cast<double>(rng() % 7);
        }
        fixture_pairs.push_back({a, b});
    }

    int idx = 0;
    for (const auto& [a, b] : fixture_pairs) {
        const auto ex = permutation_test(a, b, 1, 0, PermutationMode::Exhaustive);
        require(std::abs(ex.p_value - oracle::exhaustive_p(a, b)) <= 1e-12,
                "exhaustive path disagrees with the enumeration oracle");

        const std::uint64_t seed = 9000 + static_cast<std::uint64_t>(idx);
        const auto mc = permutation_test(a, b, 100000, seed, PermutationMode::MonteCarlo);
        const auto mc2 = permutation_test(a, b, 100000, seed, PermutationMode::MonteCarlo);
        require(mc.p_value == mc2.p_value, "Monte Carlo rerun must be bit-identical");

        const double sigma = std::sqrt(ex.p_value * (1.0 - ex.p_value) / 100000.0);
        const double err = std::abs(mc.p_value - ex.p_value);
        require(err <= 3.0 * sigma + 1e-15,
                "fixture " + std::to_string(idx) + ": |mc - exact| = " + fmt(err) +
                    " exceeds 3 sigma = " + fmt(3.0 * sigma));
        if (sigma > 0.0) max_sigmas = std::max(max_sigmas, err / sigma);
        ++idx;
    }

    // parallelism must not change any p-value
    std::vector<ScoreMatrix::Cell> cells;
    for (int t = 0; t < 4; ++t) {
        for (int c = 0; c < 10; ++c) {
            std::array<double, 3> s{};
            for (auto& v : s) v = static_cast<double>(rng() % 100) / 100.0;
            cells.push_back({"team" + std::to_string(t), "case" + std::to_string(c), s});
        }
    }
    const ScoreMatrix matrix = ScoreMatrix::from_cells(cells);
    const RankingRun serial =
        run_ranking(matrix, 100000, 31337, 0.05, PermutationMode::MonteCarlo, 1);
    const RankingRun threaded =
        run_ranking(matrix, 100000, 31337, 0.05, PermutationMode::MonteCarlo, 4);
    for (std::size_t i = 0; i < serial.board.pairwise.size(); ++i) {
        require(serial.board.pairwise[i].p_value == threaded.board.pairwise[i].p_value,
                "p-values must not depend on the parallelism degree");
    }

    return std::to_string(fixture_pairs.size()) +
           " fixtures vs exhaustive enumeration; worst deviation " + fmt(max_sigmas) +
           " sigma";
}

// ---------------------------------------------------------------------------
// 7. Ranking invariants and the three hand-constructed leaderboard fixtures.

std::string criterion_ranking_invariants() {
    std::mt19937_64 rng(991);

    // rank-sum conservation and NRS bounds under heavy ties
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t t_count = 2 + rng() % 13;
        const std::size_t c_count = 1 + rng() % 8;
        std::vector<ScoreMatrix::Cell> cells;
        for (std::size_t t = 0; t < t_count; ++t) {
            for (std::size_t c = 0; c < c_count; ++c) {
                std::array<double, 3> s{};
                for (auto& v : s) v = 0.25 * static_cast<double>(rng() % 4);
                cells.push_back({"t" + std::to_string(t), "c" + std::to_string(c), s});
            }
        }
        const RankTable table = per_case_ranks(ScoreMatrix::from_cells(cells));
        const double expected = static_cast<double>(t_count * (t_count + 1)) / 2.0;
        for (std::size_t c = 0; c < c_count; ++c) {
            for (Entity e : kEntities) {
                double sum = 0.0;
                for (std::size_t t = 0; t < t_count; ++t) sum += table.rank(t, c, e);
                require(std::abs(sum - expected) <= 1e-9, "rank sum not conserved");
            }
        }
        for (const double nrs : table.nrs) {
            require(nrs >= 1.0 / static_cast<double>(t_count) - 1e-12 && nrs <= 1.0 + 1e-12,
                    "NRS outside [1/T, 1]");
        }
    }

    // fixture 1: two identical teams share rank 1 with p = 1
    {
        std::vector<ScoreMatrix::Cell> cells;
        for (int c = 0; c < 6; ++c) {
            const std::array<double, 3> s{0.8, 0.7, 0.6};
            cells.push_back({"a", "c" + std::to_string(c), s});
            cells.push_back({"b", "c" + std::to_string(c), s});
        }
        const RankingRun run = run_ranking(ScoreMatrix::from_cells(cells), 100000, 1, 0.05);
        require(run.board.entries[0].rank == 1 && run.board.entries[1].rank == 1,
                "identical teams must share rank 1");
        require(run.board.pairwise[0].p_value == 1.0, "identical teams must have p = 1");
    }

    // fixture 2: one team dominated on all 30 cases -> significant, ranks 1 and 2
    std::vector<double> crs_a, crs_b;
    {
        std::vector<ScoreMatrix::Cell> cells;
        for (int c = 0; c < 30; ++c) {
            const double base = 0.7 + 0.01 * static_cast<double>(rng() % 10);
            cells.push_back({"good", "c" + std::to_string(c), {base, base, base}});
            cells.push_back(
                {"worse", "c" + std::to_string(c), {base - 0.05, base - 0.05, base - 0.05}});
        }
        const ScoreMatrix matrix = ScoreMatrix::from_cells(cells);
        const RankingRun run =
            run_ranking(matrix, 100000, 2, 0.05, PermutationMode::MonteCarlo);
        require(run.board.entries[0].team == "good" && run.board.entries[0].rank == 1 &&
                    run.board.entries[1].rank == 2,
                "dominated team must land on rank 2");
        require(run.board.pairwise[0].p_value < 0.05, "domination must be significant");

        // exhaustive oracle on a 12-case subsample
        const std::size_t c_count = run.table.cases.size();
        crs_a.assign(run.table.crs.begin(), run.table.crs.begin() + 12);
        crs_b.assign(run.table.crs.begin() + c_count, run.table.crs.begin() + c_count + 12);
        const auto sub = permutation_test(crs_a, crs_b, 1, 0, PermutationMode::Exhaustive);
        require(std::abs(sub.p_value - oracle::exhaustive_p(crs_a, crs_b)) <= 1e-12,
                "subsample disagrees with the exhaustive oracle");
        require(sub.p_value < 0.05, "12-case subsample should already be significant");
    }

    // fixture 3: two statistically tied teams plus a dominated one -> 1, 1, 2
    {
        std::vector<ScoreMatrix::Cell> cells;
        for (int c = 0; c < 30; ++c) {
            const bool a_wins = c % 2 == 0;  // alternating winners, no net difference
            const double hi = 0.8, lo = 0.79;
            cells.push_back({"alpha", "c" + std::to_string(c),
                             {a_wins ? hi : lo, a_wins ? hi : lo, a_wins ? hi : lo}});
            cells.push_back({"beta", "c" + std::to_string(c),
                             {a_wins ? lo : hi, a_wins ? lo : hi, a_wins ? lo : hi}});
            cells.push_back({"gamma", "c" + std::to_string(c), {0.5, 0.5, 0.5}});
        }
        const RankingRun run = run_ranking(ScoreMatrix::from_cells(cells), 100000, 3, 0.05,
                                           PermutationMode::MonteCarlo);
        require(run.board.entries[0].rank == 1 && run.board.entries[1].rank == 1,
                "statistically tied teams must share rank 1");
        require(run.board.entries[2].rank == 2 && run.board.entries[2].team == "gamma",
                "the dominated team must open rank 2");
    }

    return "rank sums conserved on 10 tie-heavy matrices; all three leaderboard fixtures hold";
}

// ---------------------------------------------------------------------------
// 8. Full-size performance: one 240x240x155 case on the default grid,
//    single-threaded, plus a compressed round trip of its largest volume.

std::string criterion_performance() {
    using clock = std::chrono::steady_clock;

    PhantomParams params;
    params.shape = GridShape(240, 240, 155);
    params.tumor_fraction = 0.004;
    params.error_rate = 0.2;
    params.blur = 1.5;
    params.seed = 8;
    const Phantom phantom = make_phantom(params);
    std::array<UncertaintyMap, 3> unc;
    for (Entity e : kEntities) {
        unc[static_cast<std::size_t>(e)] =
            gen_uncertainty(phantom, e, GeneratorKind::NormalizedEntropy);
    }
    const ThresholdGrid grid = ThresholdGrid::default_grid();

    const auto t0 = clock::now();
    const CaseResult result =
        evaluate_case(phantom.gt, phantom.pred, unc, grid, ScoreVariant::Full, false, "big");
    const double eval_s = std::chrono::duration<double>(clock::now() - t0).count();
    require(result.overall > 0.0 && result.overall <= 1.0, "nonsensical score");
    require(eval_s < 2.0, "evaluation took " + fmt(eval_s) + " s, budget is 2 s");

    TempDir dir("accept");
    const auto path = dir / "big_unc_whole.nii.gz";
    const auto t1 = clock::now();
    write_uncertainty(path, unc[0]);
    const NiftiVolume back = read_nifti(path);
    const double io_s = std::chrono::duration<double>(clock::now() - t1).count();
    require(io_s < 1.0, "compressed round trip took " + fmt(io_s) + " s, budget is 1 s");
    require(back.shape == params.shape, "round trip changed the shape");
    require(back.values == unc[0].values, "round trip changed the voxels");

    return "evaluate " + fmt(eval_s) + " s (< 2 s), gzip round trip " + fmt(io_s) +
           " s (< 1 s), overall " + fmt(result.overall);
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<std::string()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "published-table arithmetic regression", 1.0, criterion_published_table},
        {2, "worked-example curve semantics", 1.0, criterion_worked_examples},
        {3, "brute-force oracle equivalence", 30.0, criterion_bruteforce_equivalence},
        {4, "oracle-map dominance", 30.0, criterion_oracle_dominance},
        {5, "adversarial filtered-TN property", 30.0, criterion_adversarial_ftn},
        {6, "permutation-test correctness", 60.0, criterion_permutation},
        {7, "ranking invariants and fixtures", 5.0, criterion_ranking_invariants},
        {8, "full-size single-case performance", 0.0, criterion_performance},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = criterion.run();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && criterion.budget_s > 0.0 && elapsed >= criterion.budget_s) {
            ok = false;
            detail = "runtime " + fmt(elapsed) + " s exceeds the " + fmt(criterion.budget_s) +
                     " s budget";
        }
        std::printf("[%s] %d. %s: %s [%.2f s]\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.title, detail.c_str(), elapsed);
        if (!ok) ++failed;
    }

    std::printf("%zu criteria: %zu passed, %d failed\n", criteria.size(),
                criteria.size() - static_cast<std::size_t>(failed), failed);
    return failed == 0 ? 0 : 1;
}
