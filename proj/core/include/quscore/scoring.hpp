#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quscore/volume.hpp"

namespace quscore {

/// Strictly increasing uncertainty thresholds in [0, 100].
/// The last threshold is always 100 and acts as the unfiltered baseline.
class ThresholdGrid {
public:
    /// Validates: size >= 2, strictly increasing, within [0, 100], last == 100.
    explicit ThresholdGrid(std::vector<double> taus);

    /// The grid used when none is configured: 5, 10, ..., 100.
    static ThresholdGrid default_grid();

    /// Parses "lo:hi:step" (e.g. "5:100:5"). hi must be 100.
    static ThresholdGrid from_spec(std::string_view spec);

    const std::vector<double>& taus() const { return taus_; }
    std::size_t size() const { return taus_.size(); }
    double operator[](std::size_t i) const { return taus_[i]; }

private:
    std::vector<double> taus_;
};

/// Voxel confusion counts over the kept (unfiltered) voxels.
/// tp + tn + fp + fn + filtered equals the grid's voxel count.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t filtered = 0;

    std::int64_t total() const { return tp + tn + fp + fn + filtered; }
};

/// Which components enter the combined score.
enum class ScoreVariant { Full, DscOnly, DscPlusFtp, DscPlusFtn };

ScoreVariant variant_from_name(std::string_view name);  // full / dsc / dsc-ftp / dsc-ftn
std::string_view variant_name(ScoreVariant v);

/// Per-threshold metric series for one entity.
struct EntityCurve {
    Entity entity = Entity::WholeTumor;
    std::vector<double> taus;
    std::vector<double> dsc;
    std::vector<double> ftp;
    std::vector<double> ftn;
    std::vector<double> precision;  // filled only when requested
    std::vector<double> recall;

    bool has_pr() const { return !precision.empty(); }
};

/// The three AUCs and the combined score for one entity.
struct EntityScore {
    double auc_dsc = 0.0;
    double auc_ftp = 0.0;
    double auc_ftn = 0.0;
    double score = 0.0;
};

/// Scores for one case: one EntityScore per entity plus their mean.
struct CaseResult {
    std::string case_id;
    std::array<EntityScore, 3> entity{};  // WT, TC, ET
    double overall = 0.0;

    const EntityScore& operator[](Entity e) const { return entity[static_cast<int>(e)]; }
};

/// Voxels kept (not filtered) at threshold tau.
/// tau == 100 keeps everything (the unfiltered baseline); otherwise a voxel
/// is kept iff its uncertainty is strictly below tau (u >= tau is filtered).
std::vector<std::uint8_t> kept_mask(const UncertaintyMap& unc, double tau);

/// Confusion counts restricted to kept voxels; `filtered` counts the rest.
ConfusionCounts confusion(const EntityMask& gt, const EntityMask& pred,
                          std::span<const std::uint8_t> kept);

/// 2*tp / (2*tp + fp + fn); 1.0 when the denominator is zero.
double dsc(const ConfusionCounts& c);

/// (tp_base - tp_tau) / tp_base, clamped to [0, 1]; 0.0 when tp_base == 0.
double ftp_ratio(const ConfusionCounts& at_tau, const ConfusionCounts& baseline);

/// Same as ftp_ratio with tn in place of tp.
double ftn_ratio(const ConfusionCounts& at_tau, const ConfusionCounts& baseline);

/// tp / (tp + fp); 1.0 when the denominator is zero.
double precision(const ConfusionCounts& c);

/// tp / (tp + fn); 1.0 when the denominator is zero.
double recall(const ConfusionCounts& c);

/// Trapezoidal area under (xs, ys), normalized by (xs.back() - xs.front())
/// so a constant series integrates to that constant.
/// Requires |xs| == |ys| >= 2 and strictly increasing xs.
double curve_auc(std::span<const double> xs, std::span<const double> ys);

/// Confusion counts at every grid threshold, computed in a single pass over
/// the voxels (per-voxel classification + threshold bucketing, then prefix
/// sums). The last entry is the tau = 100 baseline.
std::vector<ConfusionCounts> confusion_series(const EntityMask& gt, const EntityMask& pred,
                                              const UncertaintyMap& unc,
                                              const ThresholdGrid& grid);

/// DSC / FTP / FTN (and optionally precision / recall) at every grid
/// threshold, derived from confusion_series; FTP/FTN are relative to the
/// tau = 100 baseline.
EntityCurve compute_entity_curve(const EntityMask& gt, const EntityMask& pred,
                                 const UncertaintyMap& unc, const ThresholdGrid& grid,
                                 bool with_pr = false);

/// Integrates a curve and combines the AUCs:
///   Full:       (auc_dsc + (1 - auc_ftp) + (1 - auc_ftn)) / 3
///   DscOnly:    auc_dsc
///   DscPlusFtp: (auc_dsc + (1 - auc_ftp)) / 2
///   DscPlusFtn: (auc_dsc + (1 - auc_ftn)) / 2
EntityScore entity_score(const EntityCurve& curve, ScoreVariant variant = ScoreVariant::Full);

/// Full per-case evaluation: extracts entity masks from both volumes,
/// validates the uncertainty maps, computes one curve + score per entity,
/// and averages the three entity scores. unc is ordered WT, TC, ET.
CaseResult evaluate_case(const SegmentationVolume& gt, const SegmentationVolume& pred,
                         const std::array<UncertaintyMap, 3>& unc, const ThresholdGrid& grid,
                         ScoreVariant variant = ScoreVariant::Full, bool with_pr = false,
                         std::string case_id = {});

/// Curves for all three entities (same inputs as evaluate_case).
std::array<EntityCurve, 3> compute_case_curves(const SegmentationVolume& gt,
                                               const SegmentationVolume& pred,
                                               const std::array<UncertaintyMap, 3>& unc,
                                               const ThresholdGrid& grid, bool with_pr = false);

/// Scores precomputed curves; evaluate_case == this after compute_case_curves.
CaseResult case_result_from_curves(const std::array<EntityCurve, 3>& curves,
                                   ScoreVariant variant = ScoreVariant::Full,
                                   std::string case_id = {});

}  // namespace quscore
