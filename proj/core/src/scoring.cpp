#include "quscore/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace quscore {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require_same_shape(const GridShape& a, const GridShape& b, const char* what) {
    if (!(a == b)) {
        throw ShapeMismatchError(std::string(what) + ": " + a.str() + " vs " + b.str());
    }
}

}  // namespace

ThresholdGrid::ThresholdGrid(std::vector<double> taus) : taus_(std::move(taus)) {
    if (taus_.size() < 2) throw Error("threshold grid needs at least 2 thresholds");
    for (std::size_t i = 0; i < taus_.size(); ++i) {
        double t = taus_[i];
        if (!std::isfinite(t) || t < 0.0 || t > 100.0) {
            throw Error("threshold outside [0, 100]: " + std::to_string(t));
        }
        if (i > 0 && !(taus_[i - 1] < t)) {
            throw Error("thresholds must be strictly increasing");
        }
    }
    if (taus_.back() != 100.0) {
        throw Error("the last threshold must be 100 (the unfiltered baseline)");
    }
}

ThresholdGrid ThresholdGrid::default_grid() {
    std::vector<double> taus;
    taus.reserve(20);
    for (int t = 5; t <= 100; t += 5) taus.push_back(static_cast<double>(t));
    return ThresholdGrid(std::move(taus));
}

ThresholdGrid ThresholdGrid::from_spec(std::string_view spec) {
    std::array<double, 3> parts{};
    std::size_t part = 0;
    const char* p = spec.data();
    const char* end = spec.data() + spec.size();
    while (p < end && part < 3) {
        auto [next, ec] = std::from_chars(p, end, parts[part]);
        if (ec != std::errc{}) break;
        ++part;
        p = next;
        if (p < end) {
            if (*p != ':') break;
            ++p;
        }
    }
    if (part != 3 || p != end) {
        throw Error("bad threshold grid spec '" + std::string(spec) + "', expected lo:hi:step");
    }
    auto [lo, hi, step] = parts;
    if (step <= 0.0) throw Error("threshold grid step must be positive");
    std::vector<double> taus;
    for (double t = lo; t < hi + step * 0.5; t += step) taus.push_back(std::min(t, hi));
    if (taus.empty() || taus.back() != hi) taus.push_back(hi);
    return ThresholdGrid(std::move(taus));
}

ScoreVariant variant_from_name(std::string_view name) {
    if (name == "full") return ScoreVariant::Full;
    if (name == "dsc") return ScoreVariant::DscOnly;
    if (name == "dsc-ftp") return ScoreVariant::DscPlusFtp;
    if (name == "dsc-ftn") return ScoreVariant::DscPlusFtn;
    throw Error("unknown score variant '" + std::string(name) +
                "' (expected full, dsc, dsc-ftp, or dsc-ftn)");
}

std::string_view variant_name(ScoreVariant v) {
    switch (v) {
        case ScoreVariant::Full: return "full";
        case ScoreVariant::DscOnly: return "dsc";
        case ScoreVariant::DscPlusFtp: return "dsc-ftp";
        case ScoreVariant::DscPlusFtn: return "dsc-ftn";
    }
    return "?";
}

std::vector<std::uint8_t> kept_mask(const UncertaintyMap& unc, double tau) {
    const std::size_t n = unc.values.size();
    std::vector<std::uint8_t> kept(n);
    if (tau == 100.0) {
        std::fill(kept.begin(), kept.end(), std::uint8_t{1});
        return kept;
    }
    for (std::size_t i = 0; i < n; ++i) {
        kept[i] = static_cast<double>(unc.values[i]) < tau ? 1 : 0;
    }
    return kept;
}

ConfusionCounts confusion(const EntityMask& gt, const EntityMask& pred,
                          std::span<const std::uint8_t> kept) {
    require_same_shape(gt.shape, pred.shape, "gt vs pred");
    const std::size_t n = gt.mask.size();
    if (pred.mask.size() != n || kept.size() != n) {
        throw ShapeMismatchError("mask buffers disagree in length");
    }

    ConfusionCounts c;
    for (std::size_t i = 0; i < n; ++i) {
        if (!kept[i]) {
            ++c.filtered;
            continue;
        }
        const bool g = gt.mask[i] != 0;
        const bool p = pred.mask[i] != 0;
        if (g) {
            p ? ++c.tp : ++c.fn;
        } else {
            p ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

double dsc(const ConfusionCounts& c) {
    const std::int64_t denom = 2 * c.tp + c.fp + c.fn;
    if (denom == 0) return 1.0;  // empty-agreement convention
    return 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double ftp_ratio(const ConfusionCounts& at_tau, const ConfusionCounts& baseline) {
    if (baseline.tp == 0) return 0.0;
    const double r = static_cast<double>(baseline.tp - at_tau.tp) /
                     static_cast<double>(baseline.tp);
    return clamp01(r);
}

double ftn_ratio(const ConfusionCounts& at_tau, const ConfusionCounts& baseline) {
    if (baseline.tn == 0) return 0.0;
    const double r = static_cast<double>(baseline.tn - at_tau.tn) /
                     static_cast<double>(baseline.tn);
    return clamp01(r);
}

double precision(const ConfusionCounts& c) {
    const std::int64_t denom = c.tp + c.fp;
    if (denom == 0) return 1.0;
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall(const ConfusionCounts& c) {
    const std::int64_t denom = c.tp + c.fn;
    if (denom == 0) return 1.0;
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double curve_auc(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw Error("curve_auc needs matching xs/ys with at least 2 points");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i - 1] < xs[i])) throw Error("curve_auc needs strictly increasing xs");
    }
    const double range = xs.back() - xs.front();
    if (range == 0.0) throw DegenerateGridError();

    double area = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        area += 0.5 * (ys[i - 1] + ys[i]) * (xs[i] - xs[i - 1]);
    }
    return area / range;
}

std::vector<ConfusionCounts> confusion_series(const EntityMask& gt, const EntityMask& pred,
                                              const UncertaintyMap& unc,
                                              const ThresholdGrid& grid) {
    require_same_shape(gt.shape, pred.shape, "gt vs pred");
    require_same_shape(gt.shape, unc.shape, "masks vs uncertainty");
    const std::size_t n = gt.mask.size();
    if (pred.mask.size() != n || unc.values.size() != n) {
        throw ShapeMismatchError("voxel buffers disagree in length");
    }

    const auto& taus = grid.taus();
    const std::size_t nt = taus.size();

    // One pass: classify each voxel (TN/FP/FN/TP) and find the first
    // threshold index at which it is kept (u < tau). Bucket nt means the
    // voxel is only kept at the tau = 100 baseline.
    std::array<std::vector<std::int64_t>, 4> hist;
    for (auto& h : hist) h.assign(nt + 1, 0);

    for (std::size_t i = 0; i < n; ++i) {
        const auto cls = static_cast<std::size_t>((gt.mask[i] ? 2 : 0) + (pred.mask[i] ? 1 : 0));
        const double u = static_cast<double>(unc.values[i]);
        const auto bucket = static_cast<std::size_t>(
            std::upper_bound(taus.begin(), taus.end(), u) - taus.begin());
        ++hist[cls][bucket];
    }

    std::array<std::int64_t, 4> totals{};
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t b = 0; b <= nt; ++b) totals[c] += hist[c][b];
    }
    const std::int64_t total = static_cast<std::int64_t>(n);

    ConfusionCounts baseline;  // tau = 100 keeps everything
    baseline.tn = totals[0];
    baseline.fp = totals[1];
    baseline.fn = totals[2];
    baseline.tp = totals[3];

    std::vector<ConfusionCounts> series(nt);
    std::array<std::int64_t, 4> kept{};  // running prefix over buckets
    for (std::size_t t = 0; t < nt; ++t) {
        if (t + 1 == nt) {
            series[t] = baseline;
            continue;
        }
        for (std::size_t cls = 0; cls < 4; ++cls) kept[cls] += hist[cls][t];
        series[t].tn = kept[0];
        series[t].fp = kept[1];
        series[t].fn = kept[2];
        series[t].tp = kept[3];
        series[t].filtered = total - (kept[0] + kept[1] + kept[2] + kept[3]);
    }
    return series;
}

EntityCurve compute_entity_curve(const EntityMask& gt, const EntityMask& pred,
                                 const UncertaintyMap& unc, const ThresholdGrid& grid,
                                 bool with_pr) {
    const std::vector<ConfusionCounts> series = confusion_series(gt, pred, unc, grid);
    const ConfusionCounts& baseline = series.back();
    const std::size_t nt = series.size();

    EntityCurve curve;
    curve.entity = gt.entity;
    curve.taus = grid.taus();
    curve.dsc.resize(nt);
    curve.ftp.resize(nt);
    curve.ftn.resize(nt);
    if (with_pr) {
        curve.precision.resize(nt);
        curve.recall.resize(nt);
    }

    for (std::size_t t = 0; t < nt; ++t) {
        const ConfusionCounts& c = series[t];
        curve.dsc[t] = clamp01(dsc(c));
        curve.ftp[t] = ftp_ratio(c, baseline);
        curve.ftn[t] = ftn_ratio(c, baseline);
        if (with_pr) {
            curve.precision[t] = clamp01(precision(c));
            curve.recall[t] = clamp01(recall(c));
        }
    }
    return curve;
}

EntityScore entity_score(const EntityCurve& curve, ScoreVariant variant) {
    EntityScore s;
    s.auc_dsc = curve_auc(curve.taus, curve.dsc);
    s.auc_ftp = curve_auc(curve.taus, curve.ftp);
    s.auc_ftn = curve_auc(curve.taus, curve.ftn);
    switch (variant) {
        case ScoreVariant::Full:
            s.score = (s.auc_dsc + (1.0 - s.auc_ftp) + (1.0 - s.auc_ftn)) / 3.0;
            break;
        case ScoreVariant::DscOnly:
            s.score = s.auc_dsc;
            break;
        case ScoreVariant::DscPlusFtp:
            s.score = (s.auc_dsc + (1.0 - s.auc_ftp)) / 2.0;
            break;
        case ScoreVariant::DscPlusFtn:
            s.score = (s.auc_dsc + (1.0 - s.auc_ftn)) / 2.0;
            break;
    }
    return s;
}

std::array<EntityCurve, 3> compute_case_curves(const SegmentationVolume& gt,
                                               const SegmentationVolume& pred,
                                               const std::array<UncertaintyMap, 3>& unc,
                                               const ThresholdGrid& grid, bool with_pr) {
    require_same_shape(gt.shape, pred.shape, "gt vs pred");
    for (Entity e : kEntities) {
        const auto& map = unc[static_cast<std::size_t>(e)];
        require_same_shape(gt.shape, map.shape, "volumes vs uncertainty");
        auto report = validate_uncertainty(map);
        if (!report.ok()) {
            throw InvalidUncertaintyError(std::string(entity_name(e)) + " map: " +
                                          report.summary());
        }
    }

    EntitySet gt_masks = extract_entity_masks(gt);
    EntitySet pred_masks = extract_entity_masks(pred);

    std::array<EntityCurve, 3> curves;
    for (Entity e : kEntities) {
        const auto i = static_cast<std::size_t>(e);
        curves[i] = compute_entity_curve(gt_masks[e], pred_masks[e], unc[i], grid, with_pr);
    }
    return curves;
}

CaseResult case_result_from_curves(const std::array<EntityCurve, 3>& curves,
                                   ScoreVariant variant, std::string case_id) {
    CaseResult result;
    result.case_id = std::move(case_id);
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        result.entity[i] = entity_score(curves[i], variant);
        sum += result.entity[i].score;
    }
    result.overall = sum / 3.0;
    return result;
}

CaseResult evaluate_case(const SegmentationVolume& gt, const SegmentationVolume& pred,
                         const std::array<UncertaintyMap, 3>& unc, const ThresholdGrid& grid,
                         ScoreVariant variant, bool with_pr, std::string case_id) {
    auto curves = compute_case_curves(gt, pred, unc, grid, with_pr);
    return case_result_from_curves(curves, variant, std::move(case_id));
}

}  // namespace quscore
