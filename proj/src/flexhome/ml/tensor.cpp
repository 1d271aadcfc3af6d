#include "flexhome/ml/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "flexhome/common/errors.hpp"
#include "flexhome/common/strconv.hpp"

static_assert(std::endian::native == std::endian::little,
              "tensor and weight files are little-endian; big-endian hosts are unsupported");

namespace flexhome::ml {

namespace {
constexpr char kMagic[4] = {'F', 'H', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (in.gcount() != sizeof(T)) throw_io(path + ": truncated tensor file");
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    data.assign(shape_size(shape), 0.0);
}

bool Tensor::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

std::size_t shape_size(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return shape.empty() ? 0 : n;
}

void write_tensor(const std::string& path, const Tensor& t) {
    if (t.data.size() != shape_size(t.shape)) throw_invalid("write_tensor: shape/data mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write tensor file: " + path);
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) write_pod(out, static_cast<std::uint64_t>(d));
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    if (!out) throw_io("failed writing tensor file: " + path);
}

Tensor read_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open tensor file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw_io(path + ": not a tensor file (bad magic)");
    std::uint32_t version = 0;
    read_pod(in, version, path);
    if (version != kVersion)
        throw_io(path + ": unsupported tensor format version " + format_u64(version));
    std::uint32_t ndim = 0;
    read_pod(in, ndim, path);
    if (ndim == 0 || ndim > 8) throw_io(path + ": implausible tensor rank");
    Tensor t;
    t.shape.resize(ndim);
    for (auto& d : t.shape) {
        std::uint64_t v = 0;
        read_pod(in, v, path);
        d = static_cast<std::size_t>(v);
    }
    const std::size_t n = shape_size(t.shape);
    t.data.resize(n);
    in.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double))
        throw_io(path + ": truncated tensor file");
    return t;
}

}  // namespace flexhome::ml
