#include <doctest.h>

#include <cstring>
#include <fstream>

#include "quscore/nifti.hpp"
#include "temp_dir.hpp"

using namespace quscore;

namespace {

/// Minimal hand-rolled NIfTI-1 file for reader edge cases.
struct RawNifti {
    std::vector<char> bytes = std::vector<char>(352, 0);
    bool big_endian = false;

    void put_i32(int offset, std::int32_t v) { put(offset, &v, 4); }
    void put_i16(int offset, std::int16_t v) { put(offset, &v, 2); }
    void put_f32(int offset, float v) { put(offset, &v, 4); }

    void put(int offset, const void* src, int n) {
        char tmp[8];
        std::memcpy(tmp, src, static_cast<std::size_t>(n));
        if (big_endian) std::reverse(tmp, tmp + n);
        std::memcpy(bytes.data() + offset, tmp, static_cast<std::size_t>(n));
    }

    void standard_fields(std::int16_t dx, std::int16_t dy, std::int16_t dz,
                         std::int16_t datatype, std::int16_t bitpix) {
        put_i32(0, 348);
        put_i16(40, 3);  // dim[0]
        put_i16(42, dx);
        put_i16(44, dy);
        put_i16(46, dz);
        put_i16(70, datatype);
        put_i16(72, bitpix);
        put_f32(108, 352.0f);  // vox_offset
        std::memcpy(bytes.data() + 344, "n+1\0", 4);
    }

    void append(const void* data, std::size_t n) {
        const auto* p = static_cast<const char*>(data);
        bytes.insert(bytes.end(), p, p + n);
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
};

}  // namespace

TEST_CASE("uint8 write-read round trip preserves voxel order") {
    TempDir dir("nifti");
    const GridShape shape(2, 2, 2);
    std::vector<std::uint8_t> voxels{0, 1, 2, 3, 4, 5, 6, 7};

    for (const char* name : {"vol.nii", "vol.nii.gz"}) {
        const auto path = dir / name;
        write_nifti(path, shape, std::span<const std::uint8_t>(voxels));
        const NiftiVolume vol = read_nifti(path);
        CHECK(vol.shape == shape);
        CHECK(vol.datatype == NiftiDatatype::Uint8);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(vol.values[i] == static_cast<float>(voxels[i]));
        }
    }
}

TEST_CASE("int16 and float32 round trips are lossless") {
    TempDir dir("nifti");
    const GridShape shape(3, 2, 1);

    std::vector<std::int16_t> i16{-32768, -5, 0, 7, 255, 32767};
    write_nifti(dir / "i16.nii.gz", shape, std::span<const std::int16_t>(i16));
    const NiftiVolume v16 = read_nifti(dir / "i16.nii.gz");
    CHECK(v16.datatype == NiftiDatatype::Int16);
    for (std::size_t i = 0; i < i16.size(); ++i) {
        CHECK(v16.values[i] == static_cast<float>(i16[i]));
    }

    std::vector<float> f32{0.0f, -1.25f, 3.14159f, 100.0f, 1e-30f, 65504.0f};
    write_nifti(dir / "f32.nii.gz", shape, std::span<const float>(f32));
    const NiftiVolume v32 = read_nifti(dir / "f32.nii.gz");
    CHECK(v32.datatype == NiftiDatatype::Float32);
    for (std::size_t i = 0; i < f32.size(); ++i) {
        CHECK(v32.values[i] == f32[i]);  // bit-exact
    }
}

TEST_CASE("bad magic is rejected") {
    TempDir dir("nifti");
    RawNifti raw;
    raw.standard_fields(2, 1, 1, 2, 8);
    std::memcpy(raw.bytes.data() + 344, "ni1\0", 4);  // .hdr/.img pair marker
    const std::uint8_t data[2] = {1, 2};
    raw.append(data, 2);
    raw.write(dir / "bad.nii");
    CHECK_THROWS_AS(read_nifti(dir / "bad.nii"), NotNiftiError);
}

TEST_CASE("unsupported datatype reports its code") {
    TempDir dir("nifti");
    RawNifti raw;
    raw.standard_fields(1, 1, 1, 64, 64);  // float64
    const double v = 1.0;
    raw.append(&v, 8);
    raw.write(dir / "f64.nii");
    try {
        read_nifti(dir / "f64.nii");
        FAIL("expected UnsupportedDatatypeError");
    } catch (const UnsupportedDatatypeError& e) {
        CHECK(e.code == 64);
    }
}

TEST_CASE("byte-swapped files are decoded via the header byte order") {
    TempDir dir("nifti");
    RawNifti raw;
    raw.big_endian = true;
    raw.standard_fields(2, 2, 1, 4, 16);  // int16 data
    std::int16_t data[4] = {100, -2, 300, 7};
    for (auto& v : data) {
        char* p = reinterpret_cast<char*>(&v);
        std::swap(p[0], p[1]);
    }
    raw.append(data, 8);
    raw.write(dir / "be.nii");

    const NiftiVolume vol = read_nifti(dir / "be.nii");
    CHECK(vol.shape == GridShape(2, 2, 1));
    CHECK(vol.values[0] == 100.0f);
    CHECK(vol.values[1] == -2.0f);
    CHECK(vol.values[2] == 300.0f);
    CHECK(vol.values[3] == 7.0f);
}

TEST_CASE("scl_slope and scl_inter are applied when slope is nonzero") {
    TempDir dir("nifti");
    RawNifti raw;
    raw.standard_fields(2, 1, 1, 2, 8);
    raw.put_f32(112, 2.0f);   // scl_slope
    raw.put_f32(116, 10.0f);  // scl_inter
    const std::uint8_t data[2] = {3, 45};
    raw.append(data, 2);
    raw.write(dir / "scaled.nii");

    const NiftiVolume vol = read_nifti(dir / "scaled.nii");
    CHECK(vol.values[0] == 16.0f);
    CHECK(vol.values[1] == 100.0f);
}

TEST_CASE("4D volumes with singleton trailing dims pass, real 4D fails") {
    TempDir dir("nifti");
    RawNifti ok;
    ok.standard_fields(2, 1, 1, 2, 8);
    ok.put_i16(40, 4);  // dim[0] = 4
    ok.put_i16(48, 1);  // dim[4] = 1
    const std::uint8_t data[2] = {1, 2};
    ok.append(data, 2);
    ok.write(dir / "ok4d.nii");
    CHECK(read_nifti(dir / "ok4d.nii").shape == GridShape(2, 1, 1));

    RawNifti bad;
    bad.standard_fields(2, 1, 1, 2, 8);
    bad.put_i16(40, 4);
    bad.put_i16(48, 3);  // three timepoints
    bad.append(data, 2);
    bad.write(dir / "bad4d.nii");
    CHECK_THROWS_AS(read_nifti(dir / "bad4d.nii"), DimMismatchError);
}

TEST_CASE("truncated and missing files fail loudly") {
    TempDir dir("nifti");
    CHECK_THROWS_AS(read_nifti(dir / "absent.nii"), IoError);

    std::ofstream(dir / "tiny.nii", std::ios::binary) << "short";
    CHECK_THROWS_AS(read_nifti(dir / "tiny.nii"), NotNiftiError);

    RawNifti raw;
    raw.standard_fields(4, 4, 4, 16, 32);  // claims 64 floats, provides none
    raw.write(dir / "trunc.nii");
    CHECK_THROWS_AS(read_nifti(dir / "trunc.nii"), IoError);
}

TEST_CASE("segmentation and uncertainty conversions validate content") {
    TempDir dir("nifti");
    const GridShape shape(2, 2, 1);

    SUBCASE("valid labels convert") {
        const std::vector<std::uint8_t> labels{0, 1, 2, 4};
        write_nifti(dir / "seg.nii.gz", shape, std::span<const std::uint8_t>(labels));
        const SegmentationVolume seg = to_segmentation(read_nifti(dir / "seg.nii.gz"));
        CHECK(seg.labels == labels);
    }
    SUBCASE("label 3 is rejected, not remapped") {
        const std::vector<std::uint8_t> labels{0, 1, 3, 4};
        write_nifti(dir / "seg.nii.gz", shape, std::span<const std::uint8_t>(labels));
        CHECK_THROWS_AS(to_segmentation(read_nifti(dir / "seg.nii.gz")), InvalidLabelError);
    }
    SUBCASE("non-integral labels are rejected") {
        const std::vector<float> labels{0.0f, 1.5f, 2.0f, 4.0f};
        write_nifti(dir / "seg.nii.gz", shape, std::span<const float>(labels));
        CHECK_THROWS_AS(to_segmentation(read_nifti(dir / "seg.nii.gz")), InvalidLabelError);
    }
    SUBCASE("out-of-range uncertainty is rejected at ingestion") {
        const std::vector<float> values{0.0f, 50.0f, 100.0f, 100.5f};
        write_nifti(dir / "unc.nii.gz", shape, std::span<const float>(values));
        CHECK_THROWS_AS(to_uncertainty(read_nifti(dir / "unc.nii.gz"), Entity::WholeTumor),
                        InvalidUncertaintyError);
    }
    SUBCASE("integer uncertainty volumes are cast to real") {
        const std::vector<std::int16_t> values{0, 50, 75, 100};
        write_nifti(dir / "unc.nii.gz", shape, std::span<const std::int16_t>(values));
        const UncertaintyMap map =
            to_uncertainty(read_nifti(dir / "unc.nii.gz"), Entity::TumorCore);
        CHECK(map.values == std::vector<float>{0, 50, 75, 100});
        CHECK(map.entity == Entity::TumorCore);
    }
}
