#include "quscore/nifti.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace quscore {

namespace {

/// NIfTI-1 header, canonical 348-byte layout (naturally aligned, no padding).
struct NiftiHeader {
    std::int32_t sizeof_hdr;
    char data_type[10];
    char db_name[18];
    std::int32_t extents;
    std::int16_t session_error;
    char regular;
    char dim_info;
    std::int16_t dim[8];
    float intent_p1, intent_p2, intent_p3;
    std::int16_t intent_code;
    std::int16_t datatype;
    std::int16_t bitpix;
    std::int16_t slice_start;
    float pixdim[8];
    float vox_offset;
    float scl_slope;
    float scl_inter;
    std::int16_t slice_end;
    char slice_code;
    char xyzt_units;
    float cal_max, cal_min;
    float slice_duration;
    float toffset;
    std::int32_t glmax, glmin;
    char descrip[80];
    char aux_file[24];
    std::int16_t qform_code, sform_code;
    float quatern_b, quatern_c, quatern_d;
    float qoffset_x, qoffset_y, qoffset_z;
    float srow_x[4], srow_y[4], srow_z[4];
    char intent_name[16];
    char magic[4];
};
static_assert(sizeof(NiftiHeader) == 348, "NIfTI-1 header must be 348 bytes");

std::uint16_t bswap16(std::uint16_t v) { return static_cast<std::uint16_t>((v >> 8) | (v << 8)); }
std::uint32_t bswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0x0000ff00u) | ((v << 8) & 0x00ff0000u) | (v << 24);
}

void swap_i16(std::int16_t& v) {
    std::uint16_t u;
    std::memcpy(&u, &v, 2);
    u = bswap16(u);
    std::memcpy(&v, &u, 2);
}

void swap_f32(float& v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    u = bswap32(u);
    std::memcpy(&v, &u, 4);
}

void swap_i32(std::int32_t& v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    u = bswap32(u);
    std::memcpy(&v, &u, 4);
}

void swap_header(NiftiHeader& h) {
    swap_i32(h.sizeof_hdr);
    swap_i32(h.extents);
    swap_i16(h.session_error);
    for (auto& d : h.dim) swap_i16(d);
    swap_f32(h.intent_p1);
    swap_f32(h.intent_p2);
    swap_f32(h.intent_p3);
    swap_i16(h.intent_code);
    swap_i16(h.datatype);
    swap_i16(h.bitpix);
    swap_i16(h.slice_start);
    for (auto& p : h.pixdim) swap_f32(p);
    swap_f32(h.vox_offset);
    swap_f32(h.scl_slope);
    swap_f32(h.scl_inter);
    swap_i16(h.slice_end);
    swap_f32(h.cal_max);
    swap_f32(h.cal_min);
    swap_f32(h.slice_duration);
    swap_f32(h.toffset);
    swap_i32(h.glmax);
    swap_i32(h.glmin);
    swap_i16(h.qform_code);
    swap_i16(h.sform_code);
    swap_f32(h.quatern_b);
    swap_f32(h.quatern_c);
    swap_f32(h.quatern_d);
    swap_f32(h.qoffset_x);
    swap_f32(h.qoffset_y);
    swap_f32(h.qoffset_z);
    for (auto& v : h.srow_x) swap_f32(v);
    for (auto& v : h.srow_y) swap_f32(v);
    for (auto& v : h.srow_z) swap_f32(v);
}

/// Slurps a file, transparently inflating gzip streams (zlib reads plain
/// files through the same API).
std::vector<char> read_file(const std::filesystem::path& path) {
    gzFile file = gzopen(path.string().c_str(), "rb");
    if (file == nullptr) throw IoError("cannot open " + path.string());
    gzbuffer(file, 1 << 18);

    constexpr std::size_t kChunk = 1 << 22;
    std::vector<char> out;
    for (;;) {
        const std::size_t used = out.size();
        out.resize(used + kChunk);
        const int got = gzread(file, out.data() + used, kChunk);
        if (got < 0) {
            gzclose(file);
            throw IoError("read error in " + path.string());
        }
        out.resize(used + static_cast<std::size_t>(got));
        if (got < static_cast<int>(kChunk)) break;
    }
    gzclose(file);
    return out;
}

/// Writes header + voxel data; Z_RLE keeps the constant runs of label and
/// plateau volumes small without paying full LZ77 search on noisy float data.
void write_file(const std::filesystem::path& path, const void* header, std::size_t header_size,
                const void* data, std::size_t data_size) {
    const bool gz = path.string().ends_with(".gz");
    if (gz) {
        gzFile file = gzopen(path.string().c_str(), "wb1R");
        if (file == nullptr) throw IoError("cannot create " + path.string());
        gzbuffer(file, 1 << 20);
        bool ok = gzwrite(file, header, static_cast<unsigned>(header_size)) ==
                  static_cast<int>(header_size);
        const char* p = static_cast<const char*>(data);
        std::size_t written = 0;
        while (ok && written < data_size) {
            const auto step =
                static_cast<unsigned>(std::min<std::size_t>(data_size - written, 1u << 30));
            ok = gzwrite(file, p + written, step) == static_cast<int>(step);
            written += step;
        }
        const bool closed = gzclose(file) == Z_OK;
        if (!ok || !closed) throw IoError("write error in " + path.string());
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(static_cast<const char*>(header), static_cast<std::streamsize>(header_size));
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(data_size));
    if (!out) throw IoError("write error in " + path.string());
}

NiftiHeader make_header(const GridShape& shape, NiftiDatatype datatype, int bitpix) {
    NiftiHeader h{};
    h.sizeof_hdr = 348;
    h.regular = 'r';
    h.dim[0] = 3;
    h.dim[1] = static_cast<std::int16_t>(shape.nx);
    h.dim[2] = static_cast<std::int16_t>(shape.ny);
    h.dim[3] = static_cast<std::int16_t>(shape.nz);
    for (int i = 4; i < 8; ++i) h.dim[i] = 1;
    h.datatype = static_cast<std::int16_t>(datatype);
    h.bitpix = static_cast<std::int16_t>(bitpix);
    for (int i = 0; i < 8; ++i) h.pixdim[i] = 1.0f;
    h.vox_offset = 352.0f;
    h.scl_slope = 1.0f;
    h.scl_inter = 0.0f;
    std::strncpy(h.descrip, "quscore", sizeof(h.descrip) - 1);
    h.magic[0] = 'n';
    h.magic[1] = '+';
    h.magic[2] = '1';
    h.magic[3] = '\0';
    return h;
}

void write_volume(const std::filesystem::path& path, const GridShape& shape,
                  NiftiDatatype datatype, int bitpix, const void* data,
                  std::size_t data_bytes) {
    if (shape.nx > 32767 || shape.ny > 32767 || shape.nz > 32767) {
        throw DimMismatchError("dimensions exceed the NIfTI-1 int16 limit");
    }
    const NiftiHeader header = make_header(shape, datatype, bitpix);
    char padded[352] = {};
    std::memcpy(padded, &header, sizeof(header));
    write_file(path, padded, sizeof(padded), data, data_bytes);
}

}  // namespace

NiftiVolume read_nifti(const std::filesystem::path& path) {
    std::vector<char> raw = read_file(path);
    if (raw.size() < sizeof(NiftiHeader)) throw NotNiftiError(path.string());

    NiftiHeader header;
    std::memcpy(&header, raw.data(), sizeof(header));
    bool swapped = false;
    if (header.sizeof_hdr != 348) {
        swap_header(header);
        swapped = true;
        if (header.sizeof_hdr != 348) throw NotNiftiError(path.string());
    }
    if (std::memcmp(header.magic, "n+1\0", 4) != 0) throw NotNiftiError(path.string());

    const int ndim = header.dim[0];
    if (ndim < 1 || ndim > 7) throw DimMismatchError("dim[0] = " + std::to_string(ndim));
    std::int64_t dims[3] = {1, 1, 1};
    for (int i = 0; i < 3; ++i) {
        if (i < ndim) dims[i] = header.dim[i + 1];
        if (dims[i] < 1) {
            throw DimMismatchError("dim[" + std::to_string(i + 1) + "] = " +
                                   std::to_string(dims[i]));
        }
    }
    for (int i = 4; i <= ndim; ++i) {
        if (header.dim[i] > 1) {
            throw DimMismatchError("volume is " + std::to_string(ndim) +
                                   "-dimensional; only 3D volumes are supported");
        }
    }

    NiftiVolume vol;
    vol.shape = GridShape(dims[0], dims[1], dims[2]);
    const auto n = static_cast<std::size_t>(vol.shape.voxel_count());

    int bytes_per_voxel = 0;
    switch (header.datatype) {
        case 2:
            vol.datatype = NiftiDatatype::Uint8;
            bytes_per_voxel = 1;
            break;
        case 4:
            vol.datatype = NiftiDatatype::Int16;
            bytes_per_voxel = 2;
            break;
        case 16:
            vol.datatype = NiftiDatatype::Float32;
            bytes_per_voxel = 4;
            break;
        default:
            throw UnsupportedDatatypeError(header.datatype, path.string());
    }

    if (!(header.vox_offset >= 348.0f)) throw NotNiftiError(path.string());
    const auto offset = static_cast<std::size_t>(header.vox_offset);
    if (raw.size() < offset + n * static_cast<std::size_t>(bytes_per_voxel)) {
        throw IoError("truncated voxel data in " + path.string());
    }
    const char* data = raw.data() + offset;

    vol.values.resize(n);
    switch (vol.datatype) {
        case NiftiDatatype::Uint8: {
            const auto* p = reinterpret_cast<const std::uint8_t*>(data);
            for (std::size_t i = 0; i < n; ++i) vol.values[i] = static_cast<float>(p[i]);
            break;
        }
        case NiftiDatatype::Int16: {
            for (std::size_t i = 0; i < n; ++i) {
                std::uint16_t u;
                std::memcpy(&u, data + 2 * i, 2);
                if (swapped) u = bswap16(u);
                std::int16_t v;
                std::memcpy(&v, &u, 2);
                vol.values[i] = static_cast<float>(v);
            }
            break;
        }
        case NiftiDatatype::Float32: {
            if (!swapped) {
                std::memcpy(vol.values.data(), data, n * 4);
                break;
            }
            for (std::size_t i = 0; i < n; ++i) {
                std::uint32_t u;
                std::memcpy(&u, data + 4 * i, 4);
                u = bswap32(u);
                float v;
                std::memcpy(&v, &u, 4);
                vol.values[i] = v;
            }
            break;
        }
    }

    if (header.scl_slope != 0.0f &&
        (header.scl_slope != 1.0f || header.scl_inter != 0.0f)) {
        for (auto& v : vol.values) v = v * header.scl_slope + header.scl_inter;
    }
    return vol;
}

void write_nifti(const std::filesystem::path& path, const GridShape& shape,
                 std::span<const std::uint8_t> data) {
    if (static_cast<std::int64_t>(data.size()) != shape.voxel_count()) {
        throw ShapeMismatchError("data size does not match " + shape.str());
    }
    write_volume(path, shape, NiftiDatatype::Uint8, 8, data.data(), data.size());
}

void write_nifti(const std::filesystem::path& path, const GridShape& shape,
                 std::span<const std::int16_t> data) {
    if (static_cast<std::int64_t>(data.size()) != shape.voxel_count()) {
        throw ShapeMismatchError("data size does not match " + shape.str());
    }
    write_volume(path, shape, NiftiDatatype::Int16, 16, data.data(), data.size() * 2);
}

void write_nifti(const std::filesystem::path& path, const GridShape& shape,
                 std::span<const float> data) {
    if (static_cast<std::int64_t>(data.size()) != shape.voxel_count()) {
        throw ShapeMismatchError("data size does not match " + shape.str());
    }
    write_volume(path, shape, NiftiDatatype::Float32, 32, data.data(), data.size() * 4);
}

SegmentationVolume to_segmentation(const NiftiVolume& vol) {
    SegmentationVolume seg;
    seg.shape = vol.shape;
    seg.labels.resize(vol.values.size());
    for (std::size_t i = 0; i < vol.values.size(); ++i) {
        const float v = vol.values[i];
        if (v == 0.0f || v == 1.0f || v == 2.0f || v == 4.0f) {
            seg.labels[i] = static_cast<std::uint8_t>(v);
        } else {
            const int reported = std::isfinite(v) ? static_cast<int>(std::llround(v)) : -1;
            throw InvalidLabelError(reported, static_cast<std::int64_t>(i));
        }
    }
    return seg;
}

UncertaintyMap to_uncertainty(const NiftiVolume& vol, Entity entity) {
    UncertaintyMap map;
    map.shape = vol.shape;
    map.entity = entity;
    map.values = vol.values;
    auto report = validate_uncertainty(map);
    if (!report.ok()) throw InvalidUncertaintyError(report.summary());
    return map;
}

void write_segmentation(const std::filesystem::path& path, const SegmentationVolume& seg) {
    write_nifti(path, seg.shape, std::span<const std::uint8_t>(seg.labels));
}

void write_uncertainty(const std::filesystem::path& path, const UncertaintyMap& map) {
    write_nifti(path, map.shape, std::span<const float>(map.values));
}

}  // namespace quscore
