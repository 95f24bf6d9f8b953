// quscore command-line front end: evaluate / rank / synth / curves.

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quscore/cohort.hpp"
#include "quscore/config.hpp"
#include "quscore/nifti.hpp"
#include "quscore/parallel.hpp"
#include "quscore/ranking.hpp"
#include "quscore/results.hpp"
#include "quscore/scoring.hpp"
#include "quscore/synth.hpp"

namespace fs = std::filesystem;
using namespace quscore;

namespace {

// Exit-code taxonomy: 2 ingestion, 3 validation, 4 consistency.
constexpr int kExitIngestion = 2;
constexpr int kExitValidation = 3;
constexpr int kExitConsistency = 4;

constexpr std::uint64_t kDefaultSeed = 20201005;

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IncompleteMatrixError*>(&e) ||
        dynamic_cast<const MissingPairError*>(&e) ||
        dynamic_cast<const LengthMismatchError*>(&e)) {
        return kExitConsistency;
    }
    if (dynamic_cast<const InvalidLabelError*>(&e) ||
        dynamic_cast<const InvalidUncertaintyError*>(&e) ||
        dynamic_cast<const ShapeMismatchError*>(&e) ||
        dynamic_cast<const DimMismatchError*>(&e) ||
        dynamic_cast<const InvalidFractionError*>(&e) ||
        dynamic_cast<const MissingSamplesError*>(&e)) {
        return kExitValidation;
    }
    return kExitIngestion;
}

struct EvaluateOptions {
    std::string pred_root;
    std::string gt_root;
    std::string out_dir;
    std::string team;
    std::string grid_spec = "5:100:5";
    std::string variant = "full";
    bool with_pr = false;
    int jobs = 1;
    CohortNaming naming;
    std::string config_file;
};

struct RankOptions {
    std::vector<std::string> result_files;
    std::string out_dir;
    std::uint64_t perms = 100000;
    double alpha = 0.05;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
    std::string mode = "auto";
    std::string config_file;
};

struct SynthOptions {
    std::string out_dir;
    std::string shape_spec = "32x32x32";
    int cases = 4;
    double fraction = 0.01;
    double error_rate = 0.15;
    double blur = 1.5;
    int samples = 8;
    std::vector<std::string> kinds = {"all"};
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
    std::string config_file;
};

struct CurvesOptions {
    std::string gt_file;
    std::string pred_file;
    std::array<std::string, 3> unc_files;
    std::string out_dir;
    std::string name;
    std::string grid_spec = "5:100:5";
    bool with_pr = false;
    std::string config_file;
};

/// Values from --config fill in whatever the command line left untouched.
class ConfigMerge {
public:
    ConfigMerge(const CLI::App* cmd, const std::string& config_file) : cmd_(cmd) {
        if (!config_file.empty()) cfg_ = KeyValueConfig::load(config_file);
    }

    void string(const char* key, const char* flag, std::string& out) const {
        if (cfg_.has(key) && cmd_->count(flag) == 0) out = *cfg_.get(key);
    }
    void number(const char* key, const char* flag, double& out) const {
        if (cfg_.has(key) && cmd_->count(flag) == 0) out = cfg_.get_number(key);
    }
    void integer(const char* key, const char* flag, auto& out) const {
        if (cfg_.has(key) && cmd_->count(flag) == 0) {
            out = static_cast<std::remove_reference_t<decltype(out)>>(cfg_.get_integer(key));
        }
    }
    void boolean(const char* key, const char* flag, bool& out) const {
        if (cfg_.has(key) && cmd_->count(flag) == 0) out = cfg_.get_bool(key);
    }
    void list(const char* key, const char* flag, std::vector<std::string>& out) const {
        if (!cfg_.has(key) || cmd_->count(flag) != 0) return;
        out.clear();
        std::stringstream ss(*cfg_.get(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) out.push_back(item);
        }
    }

private:
    const CLI::App* cmd_;
    KeyValueConfig cfg_;
};

void merge_config(const CLI::App* cmd, EvaluateOptions& opt) {
    const ConfigMerge cfg(cmd, opt.config_file);
    cfg.string("team", "--team", opt.team);
    cfg.string("grid", "--grid", opt.grid_spec);
    cfg.string("variant", "--variant", opt.variant);
    cfg.boolean("pr", "--pr", opt.with_pr);
    cfg.integer("jobs", "--jobs", opt.jobs);
    cfg.string("pred-suffix", "--pred-suffix", opt.naming.pred_suffix);
    cfg.string("gt-suffix", "--gt-suffix", opt.naming.gt_suffix);
    cfg.string("unc-whole-suffix", "--unc-whole-suffix", opt.naming.unc_suffix[0]);
    cfg.string("unc-core-suffix", "--unc-core-suffix", opt.naming.unc_suffix[1]);
    cfg.string("unc-enhance-suffix", "--unc-enhance-suffix", opt.naming.unc_suffix[2]);
}

void merge_config(const CLI::App* cmd, RankOptions& opt) {
    const ConfigMerge cfg(cmd, opt.config_file);
    cfg.integer("perms", "--perms", opt.perms);
    cfg.number("alpha", "--alpha", opt.alpha);
    cfg.integer("seed", "--seed", opt.seed);
    cfg.string("mode", "--mode", opt.mode);
    cfg.integer("jobs", "--jobs", opt.jobs);
}

void merge_config(const CLI::App* cmd, SynthOptions& opt) {
    const ConfigMerge cfg(cmd, opt.config_file);
    cfg.string("shape", "--shape", opt.shape_spec);
    cfg.integer("cases", "--cases", opt.cases);
    cfg.number("fraction", "--fraction", opt.fraction);
    cfg.number("error-rate", "--error-rate", opt.error_rate);
    cfg.number("blur", "--blur", opt.blur);
    cfg.integer("samples", "--samples", opt.samples);
    cfg.integer("seed", "--seed", opt.seed);
    cfg.integer("jobs", "--jobs", opt.jobs);
    cfg.list("kinds", "--kinds", opt.kinds);
}

void merge_config(const CLI::App* cmd, CurvesOptions& opt) {
    const ConfigMerge cfg(cmd, opt.config_file);
    cfg.string("grid", "--grid", opt.grid_spec);
    cfg.string("name", "--name", opt.name);
    cfg.boolean("pr", "--pr", opt.with_pr);
}

GridShape parse_shape(const std::string& spec) {
    std::int64_t d[3] = {0, 0, 0};
    char sep1 = 0, sep2 = 0;
    if (std::sscanf(spec.c_str(), "%ld%c%ld%c%ld", &d[0], &sep1, &d[1], &sep2, &d[2]) == 5 &&
        (sep1 == 'x' || sep1 == ',') && sep2 == sep1) {
        return GridShape(d[0], d[1], d[2]);
    }
    throw Error("bad shape spec '" + spec + "', expected NXxNYxNZ");
}

std::vector<GeneratorKind> parse_kinds(const std::vector<std::string>& names) {
    std::vector<GeneratorKind> kinds;
    for (const auto& name : names) {
        if (name == "all") {
            kinds.assign(kAllGenerators.begin(), kAllGenerators.end());
            return kinds;
        }
        kinds.push_back(generator_from_name(name));
    }
    return kinds;
}

PermutationMode parse_mode(const std::string& name) {
    if (name == "auto") return PermutationMode::Auto;
    if (name == "exhaustive") return PermutationMode::Exhaustive;
    if (name == "monte-carlo") return PermutationMode::MonteCarlo;
    throw Error("unknown permutation mode '" + name + "'");
}

std::string case_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "case_%03d", index);
    return buf;
}

int run_evaluate(const EvaluateOptions& opt) {
    const ThresholdGrid grid = ThresholdGrid::from_spec(opt.grid_spec);
    const ScoreVariant variant = variant_from_name(opt.variant);

    CohortLayout layout = discover_cohort(opt.pred_root, opt.gt_root, opt.naming);
    if (layout.cases.empty()) {
        std::cerr << "quscore: no cases found under " << opt.pred_root << "\n";
        return kExitIngestion;
    }
    const std::string team =
        opt.team.empty() ? fs::absolute(opt.pred_root).filename().string() : opt.team;

    const fs::path out_dir(opt.out_dir);
    const fs::path curve_dir = out_dir / "curves";
    fs::create_directories(curve_dir);

    const std::size_t n = layout.cases.size();
    std::vector<ResultRow> rows(n);
    std::vector<std::array<EntityCurve, 3>> curves(n);

    parallel_for(static_cast<std::int64_t>(n), opt.jobs, [&](std::int64_t i) {
        const auto& files = layout.cases[static_cast<std::size_t>(i)];
        LoadedCase loaded = load_case(files);
        auto case_curves =
            compute_case_curves(loaded.gt, loaded.pred, loaded.unc, grid, opt.with_pr);
        rows[static_cast<std::size_t>(i)] = to_result_row(
            team, case_result_from_curves(case_curves, variant, loaded.case_id));
        curves[static_cast<std::size_t>(i)] = std::move(case_curves);
    });

    write_results_csv(out_dir / "results.csv", rows);
    write_results_json(out_dir / "results.json", rows);
    for (std::size_t i = 0; i < n; ++i) {
        for (Entity e : kEntities) {
            const auto name = layout.cases[i].case_id + "_" + std::string(entity_name(e)) + ".csv";
            write_curve_csv(curve_dir / name, curves[i][static_cast<std::size_t>(e)]);
        }
    }

    std::cout << "evaluated " << n << " case(s) for team '" << team << "' -> "
              << out_dir.string() << "\n";
    return 0;
}

int run_rank(const RankOptions& opt) {
    std::vector<ScoreMatrix::Cell> cells;
    for (const auto& file : opt.result_files) {
        for (const auto& row : read_results_json(file)) {
            cells.push_back({row.team, row.case_id, row.score});
        }
    }
    ScoreMatrix matrix = ScoreMatrix::from_cells(cells);

    RankingRun run =
        run_ranking(matrix, opt.perms, opt.seed, opt.alpha, parse_mode(opt.mode), opt.jobs);

    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);
    write_rank_table_csv(out_dir / "rank_table.csv", run.table);
    write_pairwise_csv(out_dir / "pairwise.csv", run.board.pairwise);
    write_leaderboard_csv(out_dir / "leaderboard.csv", run.board);
    write_leaderboard_json(out_dir / "leaderboard.json", run.board, run.table);

    std::cout << "rank team FRS mean_NRS\n";
    for (const auto& e : run.board.entries) {
        std::printf("%4d %s %.4f %.4f\n", e.rank, e.team.c_str(), e.frs, e.mean_nrs);
    }
    return 0;
}

int run_synth(const SynthOptions& opt) {
    const GridShape shape = parse_shape(opt.shape_spec);
    const std::vector<GeneratorKind> kinds = parse_kinds(opt.kinds);
    if (opt.cases < 1) throw Error("need at least one case");

    const fs::path out_dir(opt.out_dir);
    const fs::path gt_dir = out_dir / "gt";
    std::error_code ec;
    fs::create_directories(gt_dir, ec);
    if (ec) throw IoError("cannot create " + gt_dir.string() + ": " + ec.message());
    for (GeneratorKind kind : kinds) {
        fs::create_directories(out_dir / std::string(generator_name(kind)), ec);
        if (ec) throw IoError("cannot create output tree: " + ec.message());
    }

    parallel_for(opt.cases, opt.jobs, [&](std::int64_t i) {
        PhantomParams params;
        params.shape = shape;
        params.tumor_fraction = opt.fraction;
        params.error_rate = opt.error_rate;
        params.blur = opt.blur;
        params.sample_count = opt.samples;
        params.seed = opt.seed + static_cast<std::uint64_t>(i);
        Phantom phantom = make_phantom(params);

        const std::string id = case_name(static_cast<int>(i));
        write_segmentation(gt_dir / (id + ".nii.gz"), phantom.gt);
        for (GeneratorKind kind : kinds) {
            const fs::path kind_dir = out_dir / std::string(generator_name(kind));
            write_segmentation(kind_dir / (id + ".nii.gz"), phantom.pred);
            for (Entity e : kEntities) {
                const auto name =
                    id + "_unc_" + std::string(entity_long_name(e)) + ".nii.gz";
                write_uncertainty(kind_dir / name, gen_uncertainty(phantom, e, kind));
            }
        }
    });

    std::cout << "wrote " << opt.cases << " case(s), " << kinds.size()
              << " generator variant(s) -> " << out_dir.string() << "\n";
    return 0;
}

int run_curves(const CurvesOptions& opt) {
    const ThresholdGrid grid = ThresholdGrid::from_spec(opt.grid_spec);

    SegmentationVolume gt = to_segmentation(read_nifti(opt.gt_file));
    SegmentationVolume pred = to_segmentation(read_nifti(opt.pred_file));
    std::array<UncertaintyMap, 3> unc;
    for (Entity e : kEntities) {
        const auto i = static_cast<std::size_t>(e);
        unc[i] = to_uncertainty(read_nifti(opt.unc_files[i]), e);
    }

    auto curves = compute_case_curves(gt, pred, unc, grid, opt.with_pr);

    std::string name = opt.name;
    if (name.empty()) {
        name = fs::path(opt.pred_file).filename().string();
        for (const char* ext : {".gz", ".nii"}) {
            if (name.ends_with(ext)) name.resize(name.size() - std::strlen(ext));
        }
    }
    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);
    for (Entity e : kEntities) {
        const auto file = name + "_" + std::string(entity_name(e)) + ".csv";
        write_curve_csv(out_dir / file, curves[static_cast<std::size_t>(e)]);
    }
    std::cout << "wrote curves for '" << name << "' -> " << out_dir.string() << "\n";
    return 0;
}

void add_naming_options(CLI::App* cmd, CohortNaming& naming) {
    cmd->add_option("--pred-suffix", naming.pred_suffix, "Prediction file suffix");
    cmd->add_option("--gt-suffix", naming.gt_suffix, "Ground-truth file suffix");
    cmd->add_option("--unc-whole-suffix", naming.unc_suffix[0], "WT uncertainty suffix");
    cmd->add_option("--unc-core-suffix", naming.unc_suffix[1], "TC uncertainty suffix");
    cmd->add_option("--unc-enhance-suffix", naming.unc_suffix[2], "ET uncertainty suffix");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quscore - voxel-wise uncertainty scoring and ranking for tumor segmentation"};
    app.require_subcommand(1);

    EvaluateOptions eval_opt;
    auto* eval = app.add_subcommand("evaluate", "Score every case of a cohort");
    eval->add_option("--pred", eval_opt.pred_root,
                     "Directory with predictions + uncertainty maps")->required();
    eval->add_option("--gt", eval_opt.gt_root, "Directory with ground-truth labels")->required();
    eval->add_option("--out", eval_opt.out_dir, "Output directory")->required();
    eval->add_option("--team", eval_opt.team, "Team name (default: prediction dir name)");
    eval->add_option("--grid", eval_opt.grid_spec, "Threshold grid lo:hi:step");
    eval->add_option("--variant", eval_opt.variant, "Score variant: full, dsc, dsc-ftp, dsc-ftn");
    eval->add_flag("--pr", eval_opt.with_pr, "Also emit precision/recall curves");
    eval->add_option("--jobs,-j", eval_opt.jobs, "Worker threads (0 = all cores)");
    add_naming_options(eval, eval_opt.naming);
    eval->add_option("--config", eval_opt.config_file, "Key/value config file");

    RankOptions rank_opt;
    auto* rank = app.add_subcommand("rank", "Rank teams from their evaluate results");
    rank->add_option("--results", rank_opt.result_files,
                     "results.json files, one per team (>= 2)")->required()->expected(-2);
    rank->add_option("--out", rank_opt.out_dir, "Output directory")->required();
    rank->add_option("--perms", rank_opt.perms, "Monte Carlo permutations per pair");
    rank->add_option("--alpha", rank_opt.alpha, "Significance level for rank grouping");
    rank->add_option("--seed", rank_opt.seed, "Master seed for permutation tests")
        ->envname("QUSCORE_SEED");
    rank->add_option("--mode", rank_opt.mode, "auto, exhaustive, or monte-carlo");
    rank->add_option("--jobs,-j", rank_opt.jobs, "Worker threads (0 = all cores)");
    rank->add_option("--config", rank_opt.config_file, "Key/value config file");

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "Write a synthetic phantom cohort");
    synth->add_option("--out", synth_opt.out_dir, "Output directory")->required();
    synth->add_option("--shape", synth_opt.shape_spec, "Grid shape, e.g. 32x32x32");
    synth->add_option("--cases", synth_opt.cases, "Number of cases");
    synth->add_option("--fraction", synth_opt.fraction, "Tumor fraction of the grid");
    synth->add_option("--error-rate", synth_opt.error_rate, "Prediction corruption in [0,1)");
    synth->add_option("--blur", synth_opt.blur, "Probability falloff width (voxels)");
    synth->add_option("--samples", synth_opt.samples, "Sample predictions per entity (B)");
    synth->add_option("--kinds", synth_opt.kinds,
                      "Generators to emit ('all' or a comma list of names)")
        ->delimiter(',');
    synth->add_option("--seed", synth_opt.seed, "Cohort seed")->envname("QUSCORE_SEED");
    synth->add_option("--jobs,-j", synth_opt.jobs, "Worker threads (0 = all cores)");
    synth->add_option("--config", synth_opt.config_file, "Key/value config file");

    CurvesOptions curves_opt;
    auto* curves = app.add_subcommand("curves", "Emit threshold curves for a single case");
    curves->add_option("--gt", curves_opt.gt_file, "Ground-truth volume")->required();
    curves->add_option("--pred", curves_opt.pred_file, "Prediction volume")->required();
    curves->add_option("--unc-whole", curves_opt.unc_files[0], "WT uncertainty")->required();
    curves->add_option("--unc-core", curves_opt.unc_files[1], "TC uncertainty")->required();
    curves->add_option("--unc-enhance", curves_opt.unc_files[2], "ET uncertainty")->required();
    curves->add_option("--out", curves_opt.out_dir, "Output directory")->required();
    curves->add_option("--name", curves_opt.name, "Case name for output files");
    curves->add_option("--grid", curves_opt.grid_spec, "Threshold grid lo:hi:step");
    curves->add_flag("--pr", curves_opt.with_pr, "Also emit precision/recall columns");
    curves->add_option("--config", curves_opt.config_file, "Key/value config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            merge_config(eval, eval_opt);
            return run_evaluate(eval_opt);
        }
        if (rank->parsed()) {
            merge_config(rank, rank_opt);
            return run_rank(rank_opt);
        }
        if (synth->parsed()) {
            merge_config(synth, synth_opt);
            return run_synth(synth_opt);
        }
        if (curves->parsed()) {
            merge_config(curves, curves_opt);
            return run_curves(curves_opt);
        }
    } catch (const Error& e) {
        std::cerr << "quscore: " << e.what() << "\n";
        if (rank->parsed() && dynamic_cast<const IoError*>(&e) == nullptr) {
            // under rank, everything past file ingestion is a consistency failure
            const int code = exit_code_for(e);
            return code == kExitIngestion ? kExitConsistency : code;
        }
        return exit_code_for(e);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "quscore: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const std::exception& e) {
        std::cerr << "quscore: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
