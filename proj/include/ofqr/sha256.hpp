#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ofqr {

/// SHA-256 of a byte buffer, as a lowercase hex string.
std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);
std::string sha256_file_hex(const std::string& path);

}  // namespace ofqr
