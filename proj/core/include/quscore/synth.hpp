#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "quscore/volume.hpp"

namespace quscore {

/// Synthetic case: nested-blob ground truth, a corrupted prediction, the
/// per-entity foreground probability fields behind it, and (optionally)
/// B binary sample predictions per entity.
struct Phantom {
    SegmentationVolume gt;
    SegmentationVolume pred;
    std::array<std::vector<float>, 3> prob;  // foreground probability, WT/TC/ET
    int sample_count = 0;                    // B (0 = no samples)
    std::array<std::vector<std::uint8_t>, 3> samples;  // [b * voxels + v]

    const std::vector<float>& prob_of(Entity e) const { return prob[static_cast<int>(e)]; }
};

/// Reference uncertainty-map constructions.
enum class GeneratorKind {
    InvertedProb,        // 100 * (1 - p)
    BinaryMargin,        // 100 * (1 - 2|0.5 - p|)
    PiecewiseSigmoid,    // 200 * (1 - p) if p >= 0.5 else 200 * p
    NormalizedEntropy,   // 100 * H2(p) / log 2
    SampleVariance,      // 400 * var over B binary samples
    Oracle,              // 100 exactly on FP and FN voxels, 0 elsewhere
    BackgroundUncertain, // 100 * (1 - p) on predicted-background voxels, 0 elsewhere
};

inline constexpr std::array<GeneratorKind, 7> kAllGenerators = {
    GeneratorKind::InvertedProb,    GeneratorKind::BinaryMargin,
    GeneratorKind::PiecewiseSigmoid, GeneratorKind::NormalizedEntropy,
    GeneratorKind::SampleVariance,  GeneratorKind::Oracle,
    GeneratorKind::BackgroundUncertain};

std::string_view generator_name(GeneratorKind k);
GeneratorKind generator_from_name(std::string_view name);

struct PhantomParams {
    GridShape shape;
    double tumor_fraction = 0.001;  // target WT volume as a fraction of the grid
    double error_rate = 0.15;       // boundary corruption strength, [0, 1)
    double blur = 1.5;              // probability falloff width in voxels
    int sample_count = 0;           // B; 0 disables samples, otherwise >= 2
    std::uint64_t seed = 0;
};

/// Deterministic given the seed. The ground truth is a nested three-label
/// ellipsoidal blob whose WT volume hits tumor_fraction * voxel_count; the
/// prediction is the 0.5-thresholded probability field, which reproduces the
/// ground truth exactly when error_rate == 0.
Phantom make_phantom(const PhantomParams& params);

/// Builds one entity's uncertainty map from the phantom.
/// SampleVariance requires phantom.sample_count >= 2 (MissingSamplesError).
UncertaintyMap gen_uncertainty(const Phantom& phantom, Entity entity, GeneratorKind kind);

}  // namespace quscore
