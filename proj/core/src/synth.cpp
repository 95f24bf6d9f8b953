#include "quscore/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace quscore {

namespace {

constexpr double kTwoM53 = 1.0 / 9007199254740992.0;  // 2^-53

/// Uniform double in [0, 1) from raw generator words (bit-reproducible,
/// unlike std::uniform_real_distribution).
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * kTwoM53;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Smooth random field: trilinear interpolation of a coarse lattice of
/// uniform [-1, 1] values with kCell-voxel spacing.
class NoiseField {
public:
    static constexpr std::int64_t kCell = 4;

    NoiseField(const GridShape& shape, std::mt19937_64& rng)
        : lx_(shape.nx / kCell + 2), ly_(shape.ny / kCell + 2), lz_(shape.nz / kCell + 2) {
        values_.resize(static_cast<std::size_t>(lx_ * ly_ * lz_));
        for (auto& v : values_) v = 2.0 * uniform01(rng) - 1.0;
    }

    double at(std::int64_t x, std::int64_t y, std::int64_t z) const {
        const double fx = static_cast<double>(x) / kCell;
        const double fy = static_cast<double>(y) / kCell;
        const double fz = static_cast<double>(z) / kCell;
        const auto ix = static_cast<std::int64_t>(fx);
        const auto iy = static_cast<std::int64_t>(fy);
        const auto iz = static_cast<std::int64_t>(fz);
        const double tx = fx - static_cast<double>(ix);
        const double ty = fy - static_cast<double>(iy);
        const double tz = fz - static_cast<double>(iz);

        double c[2][2][2];
        for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx) c[dz][dy][dx] = lattice(ix + dx, iy + dy, iz + dz);

        auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
        const double x00 = lerp(c[0][0][0], c[0][0][1], tx);
        const double x01 = lerp(c[0][1][0], c[0][1][1], tx);
        const double x10 = lerp(c[1][0][0], c[1][0][1], tx);
        const double x11 = lerp(c[1][1][0], c[1][1][1], tx);
        const double y0 = lerp(x00, x01, ty);
        const double y1 = lerp(x10, x11, ty);
        return lerp(y0, y1, tz);
    }

private:
    double lattice(std::int64_t x, std::int64_t y, std::int64_t z) const {
        x = std::clamp<std::int64_t>(x, 0, lx_ - 1);
        y = std::clamp<std::int64_t>(y, 0, ly_ - 1);
        z = std::clamp<std::int64_t>(z, 0, lz_ - 1);
        return values_[static_cast<std::size_t>(x + lx_ * (y + ly_ * z))];
    }

    std::int64_t lx_, ly_, lz_;
    std::vector<double> values_;
};

}  // namespace

std::string_view generator_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::InvertedProb: return "inverted-prob";
        case GeneratorKind::BinaryMargin: return "binary-margin";
        case GeneratorKind::PiecewiseSigmoid: return "piecewise-sigmoid";
        case GeneratorKind::NormalizedEntropy: return "normalized-entropy";
        case GeneratorKind::SampleVariance: return "sample-variance";
        case GeneratorKind::Oracle: return "oracle";
        case GeneratorKind::BackgroundUncertain: return "background-uncertain";
    }
    return "?";
}

GeneratorKind generator_from_name(std::string_view name) {
    for (GeneratorKind k : kAllGenerators) {
        if (generator_name(k) == name) return k;
    }
    throw Error("unknown uncertainty generator '" + std::string(name) + "'");
}

Phantom make_phantom(const PhantomParams& params) {
    if (!(params.tumor_fraction > 0.0 && params.tumor_fraction < 1.0)) {
        throw InvalidFractionError("tumor_fraction must be in (0, 1)");
    }
    if (!(params.error_rate >= 0.0 && params.error_rate < 1.0)) {
        throw InvalidFractionError("error_rate must be in [0, 1)");
    }
    if (!(params.blur > 0.0)) {
        throw InvalidFractionError("blur must be positive");
    }
    if (params.sample_count != 0 && params.sample_count < 2) {
        throw InvalidFractionError("sample_count must be 0 or >= 2");
    }

    const GridShape shape(params.shape.nx, params.shape.ny, params.shape.nz);
    const std::int64_t n = shape.voxel_count();

    std::mt19937_64 rng(params.seed);

    // ellipsoid geometry: jittered center, mildly anisotropic axes
    double center[3];
    const double dims[3] = {static_cast<double>(shape.nx), static_cast<double>(shape.ny),
                            static_cast<double>(shape.nz)};
    for (int i = 0; i < 3; ++i) {
        center[i] = 0.5 * (dims[i] - 1.0) + (2.0 * uniform01(rng) - 1.0) * 0.08 * dims[i];
    }
    double axes[3];
    for (int i = 0; i < 3; ++i) axes[i] = 0.8 + 0.45 * uniform01(rng);
    const double frac_tc = 0.30 + 0.10 * uniform01(rng);  // TC volume as fraction of WT
    const double frac_et = 0.25 + 0.10 * uniform01(rng);  // ET volume as fraction of TC

    // Anisotropic distance field, stored as float so the decision boundary
    // below falls exactly on a representable value.
    std::vector<float> dist(static_cast<std::size_t>(n));
    {
        std::size_t i = 0;
        for (std::int64_t z = 0; z < shape.nz; ++z) {
            for (std::int64_t y = 0; y < shape.ny; ++y) {
                for (std::int64_t x = 0; x < shape.nx; ++x, ++i) {
                    const double dx = (static_cast<double>(x) - center[0]) / axes[0];
                    const double dy = (static_cast<double>(y) - center[1]) / axes[1];
                    const double dz = (static_cast<double>(z) - center[2]) / axes[2];
                    dist[i] = static_cast<float>(std::sqrt(dx * dx + dy * dy + dz * dz));
                }
            }
        }
    }

    // Entity radii as order statistics of the distance field, so each entity
    // hits its target voxel count exactly (up to ties).
    const std::int64_t target_wt = std::clamp<std::int64_t>(
        std::llround(params.tumor_fraction * static_cast<double>(n)), 1, n - 1);
    const std::int64_t target_tc = std::clamp<std::int64_t>(
        std::llround(frac_tc * static_cast<double>(target_wt)), 1, target_wt);
    const std::int64_t target_et = std::clamp<std::int64_t>(
        std::llround(frac_et * static_cast<double>(target_tc)), 1, target_tc);

    auto kth_smallest = [&dist](std::int64_t k) {
        std::vector<float> copy(dist);
        auto mid = copy.begin() + (k - 1);
        std::nth_element(copy.begin(), mid, copy.end());
        return *mid;
    };
    const float r_wt = kth_smallest(target_wt);
    const float r_tc = kth_smallest(target_tc);
    const float r_et = kth_smallest(target_et);

    Phantom phantom;
    phantom.gt.shape = shape;
    phantom.gt.labels.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        const float e = dist[i];
        phantom.gt.labels[i] = e <= r_et ? 4 : e <= r_tc ? 1 : e <= r_wt ? 2 : 0;
    }

    // Per-entity probability fields. The logit is the signed distance to the
    // entity boundary (in voxels, scaled by blur) plus smooth noise whose
    // strength follows error_rate. min-cascading keeps the thresholded masks
    // nested.
    const double gain = 6.0 * params.error_rate;
    const float radii[3] = {r_wt, r_tc, r_et};
    for (int ent = 0; ent < 3; ++ent) {
        NoiseField noise(shape, rng);
        auto& prob = phantom.prob[static_cast<std::size_t>(ent)];
        prob.resize(static_cast<std::size_t>(n));
        std::size_t i = 0;
        for (std::int64_t z = 0; z < shape.nz; ++z) {
            for (std::int64_t y = 0; y < shape.ny; ++y) {
                for (std::int64_t x = 0; x < shape.nx; ++x, ++i) {
                    const double d = static_cast<double>(radii[ent]) - static_cast<double>(dist[i]);
                    double logit = d / params.blur;
                    if (gain > 0.0) logit += gain * noise.at(x, y, z);
                    float p = static_cast<float>(sigmoid(logit));
                    if (ent > 0) p = std::min(p, phantom.prob[static_cast<std::size_t>(ent - 1)][i]);
                    prob[i] = p;
                }
            }
        }
    }

    phantom.pred.shape = shape;
    phantom.pred.labels.resize(static_cast<std::size_t>(n));
    const auto& p_wt = phantom.prob[0];
    const auto& p_tc = phantom.prob[1];
    const auto& p_et = phantom.prob[2];
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        phantom.pred.labels[i] = p_et[i] >= 0.5f ? 4
                                 : p_tc[i] >= 0.5f ? 1
                                 : p_wt[i] >= 0.5f ? 2
                                                   : 0;
    }

    phantom.sample_count = params.sample_count;
    if (params.sample_count > 0) {
        const auto b = static_cast<std::size_t>(params.sample_count);
        for (int ent = 0; ent < 3; ++ent) {
            auto& samples = phantom.samples[static_cast<std::size_t>(ent)];
            samples.resize(b * static_cast<std::size_t>(n));
            const auto& prob = phantom.prob[static_cast<std::size_t>(ent)];
            for (std::size_t s = 0; s < b; ++s) {
                for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
                    samples[s * static_cast<std::size_t>(n) + i] =
                        uniform01(rng) < static_cast<double>(prob[i]) ? 1 : 0;
                }
            }
        }
    }
    return phantom;
}

UncertaintyMap gen_uncertainty(const Phantom& phantom, Entity entity, GeneratorKind kind) {
    const GridShape& shape = phantom.gt.shape;
    const std::size_t n = static_cast<std::size_t>(shape.voxel_count());
    const auto ent = static_cast<std::size_t>(entity);
    const auto& prob = phantom.prob[ent];
    if (prob.size() != n) throw Error("phantom probability field missing or wrong size");

    UncertaintyMap map;
    map.shape = shape;
    map.entity = entity;
    map.values.resize(n);

    auto clamp100 = [](double u) { return static_cast<float>(std::clamp(u, 0.0, 100.0)); };

    switch (kind) {
        case GeneratorKind::InvertedProb:
            for (std::size_t i = 0; i < n; ++i) {
                map.values[i] = clamp100(100.0 * (1.0 - static_cast<double>(prob[i])));
            }
            break;

        case GeneratorKind::BinaryMargin:
            for (std::size_t i = 0; i < n; ++i) {
                const double p = static_cast<double>(prob[i]);
                map.values[i] = clamp100(100.0 * (1.0 - 2.0 * std::abs(0.5 - p)));
            }
            break;

        case GeneratorKind::PiecewiseSigmoid:
            for (std::size_t i = 0; i < n; ++i) {
                const double p = static_cast<double>(prob[i]);
                map.values[i] = clamp100(p >= 0.5 ? 200.0 * (1.0 - p) : 200.0 * p);
            }
            break;

        case GeneratorKind::NormalizedEntropy:
            for (std::size_t i = 0; i < n; ++i) {
                const double p = static_cast<double>(prob[i]);
                double u = 0.0;
                if (p > 0.0 && p < 1.0) {
                    u = -100.0 * (p * std::log(p) + (1.0 - p) * std::log(1.0 - p)) /
                        std::log(2.0);
                }
                map.values[i] = clamp100(u);
            }
            break;

        case GeneratorKind::SampleVariance: {
            if (phantom.sample_count < 2) throw MissingSamplesError();
            const auto& samples = phantom.samples[ent];
            const auto b = static_cast<std::size_t>(phantom.sample_count);
            if (samples.size() != b * n) throw MissingSamplesError();
            for (std::size_t i = 0; i < n; ++i) {
                std::int64_t k = 0;
                for (std::size_t s = 0; s < b; ++s) k += samples[s * n + i];
                const double mean = static_cast<double>(k) / static_cast<double>(b);
                // variance of 0/1 samples is mean*(1-mean); max 0.25 maps to 100
                map.values[i] = clamp100(400.0 * mean * (1.0 - mean));
            }
            break;
        }

        case GeneratorKind::Oracle: {
            const EntityMask gt_mask = extract_entity_masks(phantom.gt)[entity];
            const EntityMask pred_mask = extract_entity_masks(phantom.pred)[entity];
            for (std::size_t i = 0; i < n; ++i) {
                map.values[i] = gt_mask.mask[i] != pred_mask.mask[i] ? 100.0f : 0.0f;
            }
            break;
        }

        case GeneratorKind::BackgroundUncertain:
            // marks every predicted-background voxel as uncertain, the
            // softmax-complement failure mode
            for (std::size_t i = 0; i < n; ++i) {
                const double p = static_cast<double>(prob[i]);
                map.values[i] = p < 0.5 ? clamp100(100.0 * (1.0 - p)) : 0.0f;
            }
            break;
    }
    return map;
}

}  // namespace quscore
