#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "quscore/volume.hpp"

namespace quscore {

/// Supported NIfTI-1 datatype codes.
enum class NiftiDatatype : std::int16_t {
    Uint8 = 2,
    Int16 = 4,
    Float32 = 16,
};

/// A decoded volume: values are widened to float with scl_slope/scl_inter
/// already applied (when slope != 0).
struct NiftiVolume {
    GridShape shape;
    NiftiDatatype datatype = NiftiDatatype::Float32;
    std::vector<float> values;  // x fastest, as stored on disk
};

/// Reads a NIfTI-1 single file (.nii or .nii.gz; gzip is detected from the
/// stream, not the name). Handles both byte orders.
/// Throws NotNiftiError, UnsupportedDatatypeError, DimMismatchError, IoError.
NiftiVolume read_nifti(const std::filesystem::path& path);

/// Writers; output is gzip-compressed iff the path ends in ".gz".
void write_nifti(const std::filesystem::path& path, const GridShape& shape,
                 std::span<const std::uint8_t> data);
void write_nifti(const std::filesystem::path& path, const GridShape& shape,
                 std::span<const std::int16_t> data);
void write_nifti(const std::filesystem::path& path, const GridShape& shape,
                 std::span<const float> data);

/// Converts a decoded volume to a label volume. Values must be integral and
/// in {0, 1, 2, 4}; anything else raises InvalidLabelError.
SegmentationVolume to_segmentation(const NiftiVolume& vol);

/// Converts a decoded volume to an uncertainty map. Out-of-range or
/// non-finite values are rejected (InvalidUncertaintyError), not clamped.
UncertaintyMap to_uncertainty(const NiftiVolume& vol, Entity entity);

void write_segmentation(const std::filesystem::path& path, const SegmentationVolume& seg);
void write_uncertainty(const std::filesystem::path& path, const UncertaintyMap& map);

}  // namespace quscore
