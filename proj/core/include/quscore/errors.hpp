#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace quscore {

/// Base class for every failure raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A segmentation label outside the {0, 1, 2, 4} convention.
class InvalidLabelError : public Error {
public:
    InvalidLabelError(int label, std::int64_t voxel)
        : Error("invalid segmentation label " + std::to_string(label) +
                " at voxel " + std::to_string(voxel) +
                " (expected one of 0, 1, 2, 4)"),
          label(label), voxel(voxel) {}

    int label;
    std::int64_t voxel;
};

/// Two grids that must match do not.
class ShapeMismatchError : public Error {
public:
    explicit ShapeMismatchError(const std::string& what) : Error("shape mismatch: " + what) {}
};

/// An uncertainty map with values outside [0, 100] or non-finite entries.
class InvalidUncertaintyError : public Error {
public:
    explicit InvalidUncertaintyError(const std::string& what)
        : Error("invalid uncertainty map: " + what) {}
};

/// A threshold grid whose integration range collapses to a point.
class DegenerateGridError : public Error {
public:
    DegenerateGridError() : Error("degenerate threshold grid: tau_max == tau_min") {}
};

/// A team/case combination missing from a score matrix.
class IncompleteMatrixError : public Error {
public:
    IncompleteMatrixError(const std::string& team, const std::string& case_id)
        : Error("incomplete score matrix: team '" + team + "' has no entry for case '" +
                case_id + "'"),
          team(team), case_id(case_id) {}

    std::string team;
    std::string case_id;
};

/// Paired vectors of different length fed to the permutation test.
class LengthMismatchError : public Error {
public:
    LengthMismatchError(std::size_t a, std::size_t b)
        : Error("paired score vectors differ in length: " + std::to_string(a) + " vs " +
                std::to_string(b)) {}
};

/// A pairwise significance test required by the leaderboard is absent.
class MissingPairError : public Error {
public:
    MissingPairError(const std::string& a, const std::string& b)
        : Error("no permutation test result for pair (" + a + ", " + b + ")"),
          team_a(a), team_b(b) {}

    std::string team_a;
    std::string team_b;
};

/// Phantom parameters outside their valid range.
class InvalidFractionError : public Error {
public:
    explicit InvalidFractionError(const std::string& what)
        : Error("invalid phantom parameter: " + what) {}
};

/// A sample-based generator was requested on a phantom without samples.
class MissingSamplesError : public Error {
public:
    MissingSamplesError() : Error("phantom carries no sample predictions") {}
};

/// The file is not a NIfTI-1 single file (bad size or magic).
class NotNiftiError : public Error {
public:
    explicit NotNiftiError(const std::string& path) : Error("not a NIfTI-1 file: " + path) {}
};

/// A NIfTI datatype code outside the supported {uint8, int16, float32} set.
class UnsupportedDatatypeError : public Error {
public:
    UnsupportedDatatypeError(int code, const std::string& path)
        : Error("unsupported NIfTI datatype code " + std::to_string(code) + " in " + path),
          code(code) {}

    int code;
};

/// Volume dimensions that this toolkit cannot evaluate.
class DimMismatchError : public Error {
public:
    explicit DimMismatchError(const std::string& what) : Error("dimension mismatch: " + what) {}
};

/// A cohort case lacking one of its required files.
class MissingFileError : public Error {
public:
    MissingFileError(const std::string& case_id, const std::string& role,
                     const std::string& path)
        : Error("case '" + case_id + "' is missing its " + role + " file (" + path + ")"),
          case_id(case_id), role(role) {}

    std::string case_id;
    std::string role;
};

/// Filesystem failures while reading or writing artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace quscore
