#pragma once

#include <filesystem>
#include <string>

#include "curvlab/curvature_tensor.hpp"

namespace curvlab {

// Tensor files are UTF-8 JSON with fields dim / format / entries and
// 1-based indices.
//
// dense:  entries is the row-major n^4 component array.
// sparse: entries is a list of [i, j, k, l, value] canonical representatives
//         (i < j, k < l, (i,j) <= (k,l) lexicographically, exact zeros
//         omitted, duplicates rejected); loading expands the symmetry orbit.
//
// Numbers are serialized as shortest round-trip decimals, so saving a loaded
// canonical file is byte-identical.
enum class TensorFileFormat { Dense, Sparse };

std::string tensor_to_string(const CurvatureTensor& r, TensorFileFormat fmt);
CurvatureTensor tensor_from_string(const std::string& text);

void save_tensor(const CurvatureTensor& r, const std::filesystem::path& path,
                 TensorFileFormat fmt);
CurvatureTensor load_tensor(const std::filesystem::path& path);

// FNV-1a 64 content digest (non-cryptographic), as "fnv1a64:<16 hex>".
std::string content_digest(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

}  // namespace curvlab
