// Independent brute-force reference implementations used as test oracles.
// Everything here recomputes results by direct per-voxel / per-threshold
// enumeration and must stay decoupled from the optimized library paths.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "quscore/scoring.hpp"
#include "quscore/volume.hpp"

namespace oracle {

struct Counts {
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0, filtered = 0;
};

/// Per-voxel confusion at one threshold, straight from the filtering rule:
/// tau == 100 keeps everything, otherwise kept iff u < tau.
inline Counts confusion_at(const quscore::EntityMask& gt, const quscore::EntityMask& pred,
                           const quscore::UncertaintyMap& unc, double tau) {
    Counts c;
    for (std::size_t i = 0; i < gt.mask.size(); ++i) {
        const bool kept = tau == 100.0 || static_cast<double>(unc.values[i]) < tau;
        if (!kept) {
            ++c.filtered;
            continue;
        }
        const bool g = gt.mask[i] != 0;
        const bool p = pred.mask[i] != 0;
        if (g && p) ++c.tp;
        if (g && !p) ++c.fn;
        if (!g && p) ++c.fp;
        if (!g && !p) ++c.tn;
    }
    return c;
}

struct Curve {
    std::vector<double> taus, dsc, ftp, ftn, precision, recall;
};

inline Curve curve(const quscore::EntityMask& gt, const quscore::EntityMask& pred,
                   const quscore::UncertaintyMap& unc, const std::vector<double>& taus) {
    const Counts base = confusion_at(gt, pred, unc, 100.0);
    Curve out;
    out.taus = taus;
    for (double tau : taus) {
        const Counts c = confusion_at(gt, pred, unc, tau);
        const std::int64_t dice_denom = 2 * c.tp + c.fp + c.fn;
        out.dsc.push_back(dice_denom == 0
                              ? 1.0
                              : 2.0 * static_cast<double>(c.tp) / static_cast<double>(dice_denom));
        out.ftp.push_back(base.tp == 0 ? 0.0
                                       : static_cast<double>(base.tp - c.tp) /
                                             static_cast<double>(base.tp));
        out.ftn.push_back(base.tn == 0 ? 0.0
                                       : static_cast<double>(base.tn - c.tn) /
                                             static_cast<double>(base.tn));
        out.precision.push_back(c.tp + c.fp == 0 ? 1.0
                                                 : static_cast<double>(c.tp) /
                                                       static_cast<double>(c.tp + c.fp));
        out.recall.push_back(c.tp + c.fn == 0 ? 1.0
                                              : static_cast<double>(c.tp) /
                                                    static_cast<double>(c.tp + c.fn));
    }
    return out;
}

inline double trapezoid_auc(const std::vector<double>& xs, const std::vector<double>& ys) {
    double area = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        area += (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]) / 2.0;
    }
    return area / (xs.back() - xs.front());
}

inline double combined_score(double auc_dsc, double auc_ftp, double auc_ftn) {
    return (auc_dsc + (1.0 - auc_ftp) + (1.0 - auc_ftn)) / 3.0;
}

/// Whole-case reference evaluation: label-set masks, brute-force curves,
/// the combined score per entity, mean overall.
inline double case_overall(const quscore::SegmentationVolume& gt,
                           const quscore::SegmentationVolume& pred,
                           const std::array<quscore::UncertaintyMap, 3>& unc,
                           const std::vector<double>& taus) {
    auto mask_of = [](const quscore::SegmentationVolume& seg, int which) {
        quscore::EntityMask m;
        m.shape = seg.shape;
        m.mask.resize(seg.labels.size());
        for (std::size_t i = 0; i < seg.labels.size(); ++i) {
            const int l = seg.labels[i];
            const bool in = which == 0 ? (l == 1 || l == 2 || l == 4)
                          : which == 1 ? (l == 1 || l == 4)
                                       : (l == 4);
            m.mask[i] = in ? 1 : 0;
        }
        return m;
    };

    double sum = 0.0;
    for (int e = 0; e < 3; ++e) {
        const Curve c = curve(mask_of(gt, e), mask_of(pred, e), unc[static_cast<std::size_t>(e)], taus);
        sum += combined_score(trapezoid_auc(c.taus, c.dsc), trapezoid_auc(c.taus, c.ftp),
                         trapezoid_auc(c.taus, c.ftn));
    }
    return sum / 3.0;
}

/// Exhaustive paired sign-swap test. The observed statistic must go through
/// the same accumulation as the per-permutation one (mask 0), otherwise tie
/// permutations fall on the wrong side of the >= comparison by one rounding.
inline double exhaustive_p(const std::vector<double>& crs_a, const std::vector<double>& crs_b) {
    const std::size_t n = crs_a.size();
    double sum_a = 0.0, sum_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_a += crs_a[i];
        sum_b += crs_b[i];
    }
    const bool a_better = sum_a <= sum_b;

    auto delta = [&](std::uint64_t mask) {
        double worse = 0.0, better = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool swap = (mask >> i) & 1ULL;
            const double a = swap ? crs_b[i] : crs_a[i];
            const double b = swap ? crs_a[i] : crs_b[i];
            better += a_better ? a : b;
            worse += a_better ? b : a;
        }
        return (worse - better) / static_cast<double>(n);
    };

    const double observed = delta(0);
    std::uint64_t hits = 0;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (delta(mask) >= observed) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace oracle
