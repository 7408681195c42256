#include "simignore/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace simignore::io {

namespace {

constexpr char kMagic[4] = {'S', 'I', 'G', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxDims = 32;
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 40;

std::uint32_t load_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t load_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | p[i];
    }
    return v;
}

void store_u32_le(std::uint32_t v, unsigned char* p) {
    for (int i = 0; i < 4; ++i) {
        p[i] = static_cast<unsigned char>(v >> (8 * i));
    }
}

void store_u64_le(std::uint64_t v, unsigned char* p) {
    for (int i = 0; i < 8; ++i) {
        p[i] = static_cast<unsigned char>(v >> (8 * i));
    }
}

void read_exact(std::ifstream& in, unsigned char* buf, std::size_t n, const char* what) {
    in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw Error(Errc::TruncatedPayload,
                    std::string("file ends inside ") + what);
    }
}

std::vector<double> widen(const std::vector<float>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

Tensor read_tensor(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        throw Error(Errc::FileNotFound, "no such file: " + path.string());
    }
    const std::uint64_t file_size = std::filesystem::file_size(path, ec);
    if (ec) {
        throw Error(Errc::IoError, "cannot stat " + path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::IoError, "cannot open " + path.string());
    }

    unsigned char header[12];
    read_exact(in, header, sizeof(header), "header");
    if (std::memcmp(header, kMagic, 4) != 0) {
        throw Error(Errc::BadMagic, "bad magic in " + path.string());
    }
    const std::uint32_t version = load_u32_le(header + 4);
    if (version != kVersion) {
        throw Error(Errc::BadVersion,
                    "unsupported version " + std::to_string(version) + " in " + path.string());
    }
    const std::uint32_t ndim = load_u32_le(header + 8);
    if (ndim > kMaxDims) {
        throw Error(Errc::DimOverflow,
                    "dimension count " + std::to_string(ndim) + " exceeds " +
                        std::to_string(kMaxDims));
    }

    Tensor t;
    t.dims.resize(ndim);
    std::uint64_t elements = 1;
    for (std::uint32_t i = 0; i < ndim; ++i) {
        unsigned char dim_buf[8];
        read_exact(in, dim_buf, sizeof(dim_buf), "dimension list");
        t.dims[i] = load_u64_le(dim_buf);
        if (t.dims[i] != 0 && elements > kMaxElements / t.dims[i]) {
            throw Error(Errc::DimOverflow, "dimension product overflows in " + path.string());
        }
        elements *= t.dims[i];
    }

    const std::uint64_t header_bytes = 12 + 8ull * ndim;
    const std::uint64_t payload_bytes = 4ull * elements;
    if (file_size != header_bytes + payload_bytes) {
        throw Error(Errc::TruncatedPayload,
                    "payload length mismatch in " + path.string() + ": header declares " +
                        std::to_string(payload_bytes) + " bytes, file carries " +
                        std::to_string(file_size - std::min(file_size, header_bytes)));
    }

    t.data.resize(static_cast<std::size_t>(elements));
    for (auto& value : t.data) {
        unsigned char b[4];
        read_exact(in, b, sizeof(b), "payload");
        value = std::bit_cast<float>(load_u32_le(b));
    }
    return t;
}

void write_tensor(const Tensor& tensor, const std::filesystem::path& path) {
    if (tensor.data.size() != tensor.element_count()) {
        throw Error(Errc::DimensionMismatch,
                    "tensor payload length " + std::to_string(tensor.data.size()) +
                        " != dim product " + std::to_string(tensor.element_count()));
    }
    if (tensor.dims.size() > kMaxDims) {
        throw Error(Errc::DimOverflow, "too many dimensions to serialize");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
    }

    unsigned char header[12];
    std::memcpy(header, kMagic, 4);
    store_u32_le(kVersion, header + 4);
    store_u32_le(static_cast<std::uint32_t>(tensor.dims.size()), header + 8);
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (auto d : tensor.dims) {
        unsigned char b[8];
        store_u64_le(d, b);
        out.write(reinterpret_cast<const char*>(b), sizeof(b));
    }
    for (float value : tensor.data) {
        unsigned char b[4];
        store_u32_le(std::bit_cast<std::uint32_t>(value), b);
        out.write(reinterpret_cast<const char*>(b), sizeof(b));
    }
    out.flush();
    if (!out) {
        throw Error(Errc::IoError, "write failed for " + path.string());
    }
}

EmbeddingMatrix to_embedding(const Tensor& t) {
    if (t.dims.size() != 2) {
        throw Error(Errc::DimensionMismatch,
                    "embedding tensor must be 2-D, got " + std::to_string(t.dims.size()) + "-D");
    }
    return EmbeddingMatrix(static_cast<std::size_t>(t.dims[0]),
                           static_cast<std::size_t>(t.dims[1]), widen(t.data));
}

FeatureMap to_feature_map(const Tensor& t) {
    if (t.dims.size() != 3) {
        throw Error(Errc::DimensionMismatch,
                    "feature map tensor must be 3-D, got " + std::to_string(t.dims.size()) + "-D");
    }
    return FeatureMap(static_cast<std::size_t>(t.dims[0]), static_cast<std::size_t>(t.dims[1]),
                      static_cast<std::size_t>(t.dims[2]), widen(t.data));
}

AlignmentMap to_alignment(const Tensor& t) {
    if (t.dims.size() != 2) {
        throw Error(Errc::DimensionMismatch,
                    "alignment tensor must be 2-D, got " + std::to_string(t.dims.size()) + "-D");
    }
    return AlignmentMap(static_cast<std::size_t>(t.dims[0]),
                        static_cast<std::size_t>(t.dims[1]), widen(t.data));
}

AttentionTensor to_attention(const Tensor& t) {
    if (t.dims.size() != 4) {
        throw Error(Errc::DimensionMismatch,
                    "attention tensor must be 4-D, got " + std::to_string(t.dims.size()) + "-D");
    }
    return AttentionTensor(static_cast<std::size_t>(t.dims[0]),
                           static_cast<std::size_t>(t.dims[1]),
                           static_cast<std::size_t>(t.dims[2]),
                           static_cast<std::size_t>(t.dims[3]), widen(t.data));
}

Tensor from_embedding(const EmbeddingMatrix& m) {
    Tensor t;
    t.dims = {m.rows(), m.dim()};
    t.data.assign(m.data().begin(), m.data().end());
    return t;
}

Tensor from_mask(const TokenMask& mask) {
    Tensor t;
    t.dims = {mask.size()};
    t.data.reserve(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        t.data.push_back(mask.bit(i) ? 1.0f : 0.0f);
    }
    return t;
}

}  // namespace simignore::io
