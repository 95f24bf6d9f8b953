#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "quscore/nifti.hpp"
#include "quscore/volume.hpp"

namespace quscore {

/// File-name suffixes for cohort discovery. Defaults follow the
/// whole/core/enhance convention; every suffix is overridable.
struct CohortNaming {
    std::string pred_suffix = ".nii.gz";
    std::string gt_suffix = ".nii.gz";
    std::array<std::string, 3> unc_suffix = {
        "_unc_whole.nii.gz", "_unc_core.nii.gz", "_unc_enhance.nii.gz"};  // WT, TC, ET
};

/// The five files of one case.
struct CaseFiles {
    std::string case_id;
    std::filesystem::path gt;
    std::filesystem::path pred;
    std::array<std::filesystem::path, 3> unc;  // WT, TC, ET
};

struct CohortLayout {
    std::filesystem::path pred_root;
    std::filesystem::path gt_root;
    CohortNaming naming;
    std::vector<CaseFiles> cases;  // sorted by case_id
};

/// Scans pred_root for prediction files ({ID}<pred_suffix>, excluding the
/// uncertainty suffixes) and resolves the remaining four files per case.
/// Throws MissingFileError on any gap, IoError if a root is unreadable.
CohortLayout discover_cohort(const std::filesystem::path& pred_root,
                             const std::filesystem::path& gt_root,
                             const CohortNaming& naming = {});

/// Fully decoded case, shape-checked across all five volumes.
struct LoadedCase {
    std::string case_id;
    SegmentationVolume gt;
    SegmentationVolume pred;
    std::array<UncertaintyMap, 3> unc;  // WT, TC, ET
};

/// Reads and validates the five volumes of one case.
/// Throws DimMismatchError when shapes disagree within the case.
LoadedCase load_case(const CaseFiles& files);

}  // namespace quscore
