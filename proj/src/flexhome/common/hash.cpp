#include "flexhome/common/hash.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "flexhome/common/errors.hpp"
#include "flexhome/common/rng.hpp"

namespace flexhome {

namespace {

std::string to_hex(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

}  // namespace

std::string hash_bytes_hex(const std::string& bytes) {
    return to_hex(fnv1a64(bytes));
}

std::string hash_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        std::streamsize got = in.gcount();
        h = fnv1a64(std::string_view(buf.data(), static_cast<std::size_t>(got)), h);
    }
    return to_hex(h);
}

}  // namespace flexhome
