#pragma once

#include <cstdint>
#include <string>

namespace flexhome {

// Content hash used for staleness detection in stage manifests. Not
// cryptographic; 64-bit FNV-1a over the raw bytes is enough to notice an
// edited or regenerated input.
std::string hash_file_hex(const std::string& path);
std::string hash_bytes_hex(const std::string& bytes);

}  // namespace flexhome
