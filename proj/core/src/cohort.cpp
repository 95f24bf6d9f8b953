#include "quscore/cohort.hpp"

#include <algorithm>

namespace quscore {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

CohortLayout discover_cohort(const std::filesystem::path& pred_root,
                             const std::filesystem::path& gt_root,
                             const CohortNaming& naming) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(pred_root, ec)) {
        throw IoError("prediction root is not a directory: " + pred_root.string());
    }
    if (!fs::is_directory(gt_root, ec)) {
        throw IoError("ground-truth root is not a directory: " + gt_root.string());
    }

    CohortLayout layout;
    layout.pred_root = pred_root;
    layout.gt_root = gt_root;
    layout.naming = naming;

    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(pred_root)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (!ends_with(name, naming.pred_suffix)) continue;
        // uncertainty maps may share the prediction suffix; skip them
        bool is_unc = false;
        for (const auto& suffix : naming.unc_suffix) {
            if (ends_with(name, suffix)) {
                is_unc = true;
                break;
            }
        }
        if (is_unc) continue;
        ids.push_back(name.substr(0, name.size() - naming.pred_suffix.size()));
    }
    std::sort(ids.begin(), ids.end());

    for (const auto& id : ids) {
        CaseFiles files;
        files.case_id = id;
        files.pred = pred_root / (id + naming.pred_suffix);
        files.gt = gt_root / (id + naming.gt_suffix);
        for (int e = 0; e < 3; ++e) {
            files.unc[static_cast<std::size_t>(e)] =
                pred_root / (id + naming.unc_suffix[static_cast<std::size_t>(e)]);
        }

        if (!fs::is_regular_file(files.gt, ec)) {
            throw MissingFileError(id, "ground-truth", files.gt.string());
        }
        static constexpr const char* kRoles[3] = {"unc-whole", "unc-core", "unc-enhance"};
        for (int e = 0; e < 3; ++e) {
            const auto& p = files.unc[static_cast<std::size_t>(e)];
            if (!fs::is_regular_file(p, ec)) {
                throw MissingFileError(id, kRoles[e], p.string());
            }
        }
        layout.cases.push_back(std::move(files));
    }
    return layout;
}

LoadedCase load_case(const CaseFiles& files) {
    LoadedCase loaded;
    loaded.case_id = files.case_id;
    loaded.gt = to_segmentation(read_nifti(files.gt));
    loaded.pred = to_segmentation(read_nifti(files.pred));
    if (!(loaded.gt.shape == loaded.pred.shape)) {
        throw DimMismatchError("case '" + files.case_id + "': ground truth is " +
                               loaded.gt.shape.str() + " but prediction is " +
                               loaded.pred.shape.str());
    }
    for (Entity e : kEntities) {
        const auto i = static_cast<std::size_t>(e);
        loaded.unc[i] = to_uncertainty(read_nifti(files.unc[i]), e);
        if (!(loaded.unc[i].shape == loaded.gt.shape)) {
            throw DimMismatchError("case '" + files.case_id + "': " +
                                   std::string(entity_name(e)) + " uncertainty is " +
                                   loaded.unc[i].shape.str() + " but the volumes are " +
                                   loaded.gt.shape.str());
        }
    }
    return loaded;
}

}  // namespace quscore
