#pragma once

#include <cstdint>
#include <string>

#include "robust/types.hpp"

namespace robust {

// 4ti2-style text: first line "rows cols", then whitespace-separated integer
// entries row by row.
std::string matrix_to_text(const MatZ& m);
MatZ matrix_from_text(const std::string& text);
void write_matrix_file(const MatZ& m, const std::string& path);
MatZ read_matrix_file(const std::string& path);

// FNV-1a over the canonical text form; keys circuit bases to their source
// matrix in sidecar metadata.
std::uint64_t matrix_fingerprint(const MatZ& m);
std::string fingerprint_hex(std::uint64_t fp);

}  // namespace robust
