#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "quscore/errors.hpp"

namespace quscore {

/// Voxel grid dimensions. Data is stored x-fastest (NIfTI order):
/// voxel (x, y, z) lives at index x + nx * (y + ny * z).
struct GridShape {
    std::int64_t nx = 0;
    std::int64_t ny = 0;
    std::int64_t nz = 0;

    GridShape() = default;
    GridShape(std::int64_t x, std::int64_t y, std::int64_t z);

    std::int64_t voxel_count() const { return nx * ny * nz; }
    std::int64_t index(std::int64_t x, std::int64_t y, std::int64_t z) const {
        return x + nx * (y + ny * z);
    }

    bool operator==(const GridShape&) const = default;
    std::string str() const;
};

/// The three nested tumor entities the score evaluates.
enum class Entity : int { WholeTumor = 0, TumorCore = 1, EnhancingTumor = 2 };

inline constexpr std::array<Entity, 3> kEntities = {
    Entity::WholeTumor, Entity::TumorCore, Entity::EnhancingTumor};

std::string_view entity_name(Entity e);       // "WT" / "TC" / "ET"
std::string_view entity_long_name(Entity e);  // "whole" / "core" / "enhance"

/// Integer label volume using the BraTS convention:
/// 0 = background, 1 = necrotic core, 2 = edema, 4 = enhancing tumor.
struct SegmentationVolume {
    GridShape shape;
    std::vector<std::uint8_t> labels;
};

/// Binary mask for one tumor entity.
struct EntityMask {
    GridShape shape;
    Entity entity = Entity::WholeTumor;
    std::vector<std::uint8_t> mask;

    std::int64_t count() const;
};

/// Per-voxel uncertainty for one entity, normalized to [0, 100].
struct UncertaintyMap {
    GridShape shape;
    Entity entity = Entity::WholeTumor;
    std::vector<float> values;
};

/// One mask per entity, derived from a single segmentation.
/// Nesting ET <= TC <= WT holds by construction.
struct EntitySet {
    std::array<EntityMask, 3> masks;

    const EntityMask& operator[](Entity e) const { return masks[static_cast<int>(e)]; }
    EntityMask& operator[](Entity e) { return masks[static_cast<int>(e)]; }
};

/// Derives the WT / TC / ET masks from a label volume.
/// WT = {1,2,4}, TC = {1,4}, ET = {4}.
/// Throws InvalidLabelError on any label outside the convention.
EntitySet extract_entity_masks(const SegmentationVolume& seg);

/// One offending voxel found by validate_uncertainty.
struct UncertaintyIssue {
    std::int64_t voxel = 0;
    float value = 0.0f;
};

/// Diagnostic report; callers decide whether to reject.
struct UncertaintyReport {
    std::vector<UncertaintyIssue> issues;  // listing capped at kMaxListed
    std::int64_t issue_count = 0;          // total, including unlisted

    static constexpr std::size_t kMaxListed = 16;

    bool ok() const { return issue_count == 0; }
    std::string summary() const;
};

/// Flags voxels with u < 0, u > 100, or non-finite u.
UncertaintyReport validate_uncertainty(const UncertaintyMap& map);

}  // namespace quscore
