#include "quscore/volume.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace quscore {

GridShape::GridShape(std::int64_t x, std::int64_t y, std::int64_t z) : nx(x), ny(y), nz(z) {
    if (nx < 1 || ny < 1 || nz < 1) {
        throw Error("grid dimensions must be positive, got " + str());
    }
    // dx*dy*dz must fit a 64-bit count
    constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
    if (ny != 0 && nx > kMax / ny) throw Error("grid too large: " + str());
    std::int64_t xy = nx * ny;
    if (nz != 0 && xy > kMax / nz) throw Error("grid too large: " + str());
}

std::string GridShape::str() const {
    std::ostringstream os;
    os << nx << "x" << ny << "x" << nz;
    return os.str();
}

std::string_view entity_name(Entity e) {
    switch (e) {
        case Entity::WholeTumor: return "WT";
        case Entity::TumorCore: return "TC";
        case Entity::EnhancingTumor: return "ET";
    }
    return "?";
}

std::string_view entity_long_name(Entity e) {
    switch (e) {
        case Entity::WholeTumor: return "whole";
        case Entity::TumorCore: return "core";
        case Entity::EnhancingTumor: return "enhance";
    }
    return "?";
}

std::int64_t EntityMask::count() const {
    std::int64_t n = 0;
    for (std::uint8_t m : mask) n += m != 0;
    return n;
}

EntitySet extract_entity_masks(const SegmentationVolume& seg) {
    const std::int64_t n = seg.shape.voxel_count();
    if (static_cast<std::int64_t>(seg.labels.size()) != n) {
        throw ShapeMismatchError("label buffer does not match shape " + seg.shape.str());
    }

    EntitySet out;
    for (Entity e : kEntities) {
        out[e].shape = seg.shape;
        out[e].entity = e;
        out[e].mask.assign(static_cast<std::size_t>(n), 0);
    }

    auto& wt = out[Entity::WholeTumor].mask;
    auto& tc = out[Entity::TumorCore].mask;
    auto& et = out[Entity::EnhancingTumor].mask;

    for (std::int64_t i = 0; i < n; ++i) {
        switch (seg.labels[static_cast<std::size_t>(i)]) {
            case 0:
                break;
            case 1:  // necrotic core: WT + TC
                wt[static_cast<std::size_t>(i)] = 1;
                tc[static_cast<std::size_t>(i)] = 1;
                break;
            case 2:  // edema: WT only
                wt[static_cast<std::size_t>(i)] = 1;
                break;
            case 4:  // enhancing tumor: all three
                wt[static_cast<std::size_t>(i)] = 1;
                tc[static_cast<std::size_t>(i)] = 1;
                et[static_cast<std::size_t>(i)] = 1;
                break;
            default:
                throw InvalidLabelError(seg.labels[static_cast<std::size_t>(i)], i);
        }
    }
    return out;
}

UncertaintyReport validate_uncertainty(const UncertaintyMap& map) {
    UncertaintyReport report;
    const std::int64_t n = map.shape.voxel_count();
    if (static_cast<std::int64_t>(map.values.size()) != n) {
        report.issue_count = 1;
        report.issues.push_back({-1, 0.0f});
        return report;
    }
    for (std::int64_t i = 0; i < n; ++i) {
        float v = map.values[static_cast<std::size_t>(i)];
        if (!std::isfinite(v) || v < 0.0f || v > 100.0f) {
            if (report.issues.size() < UncertaintyReport::kMaxListed) {
                report.issues.push_back({i, v});
            }
            ++report.issue_count;
        }
    }
    return report;
}

std::string UncertaintyReport::summary() const {
    if (ok()) return "pass";
    std::ostringstream os;
    os << issue_count << " voxel(s) outside [0, 100] or non-finite;";
    for (const auto& issue : issues) {
        if (issue.voxel < 0) {
            os << " value buffer does not match shape;";
            continue;
        }
        os << " voxel " << issue.voxel << " = " << issue.value << ";";
    }
    if (issue_count > static_cast<std::int64_t>(issues.size())) os << " ...";
    return os.str();
}

}  // namespace quscore
