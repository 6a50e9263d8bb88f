#include "curvlab/tensor_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace curvlab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::size_t idx4(int n, int i, int j, int k, int l) {
  return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
}

// Fills the full symmetry orbit of a canonical entry (0-based indices).
void assign_orbit(std::vector<double>& c, int n, int i, int j, int k, int l,
                  double v) {
  c[idx4(n, i, j, k, l)] = v;
  c[idx4(n, j, i, k, l)] = -v;
  c[idx4(n, i, j, l, k)] = -v;
  c[idx4(n, j, i, l, k)] = v;
  c[idx4(n, k, l, i, j)] = v;
  c[idx4(n, l, k, i, j)] = -v;
  c[idx4(n, k, l, j, i)] = -v;
  c[idx4(n, l, k, j, i)] = v;
}

}  // namespace

std::string tensor_to_string(const CurvatureTensor& r, TensorFileFormat fmt) {
  const int n = r.dim();
  ordered_json j;
  j["dim"] = n;
  j["format"] = fmt == TensorFileFormat::Dense ? "dense" : "sparse";
  ordered_json entries = ordered_json::array();
  if (fmt == TensorFileFormat::Dense) {
    for (double x : r.components()) entries.push_back(x);
  } else {
    // Canonical representatives: i < j, k < l, (i,j) <= (k,l)
    // lexicographically, 1-based, exact zeros omitted.
    for (int i = 0; i < n; ++i)
      for (int jj = i + 1; jj < n; ++jj)
        for (int k = i; k < n; ++k)
          for (int l = k + 1; l < n; ++l) {
            if (k == i && l < jj) continue;  // (k,l) >= (i,j) lexicographically
            const double v = r.at(i, jj, k, l);
            if (v == 0.0) continue;
            entries.push_back(
                ordered_json::array({i + 1, jj + 1, k + 1, l + 1, v}));
          }
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

CurvatureTensor tensor_from_string(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw IOError(std::string("tensor file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("format") ||
      !j.contains("entries"))
    throw IOError("tensor file needs fields dim, format and entries");
  if (!j["dim"].is_number_integer())
    throw IOError("dim must be an integer");
  const int n = j["dim"].get<int>();
  if (n < 1) throw InvalidDimension("tensor file dimension must be >= 1");
  const std::string fmt = j["format"].get<std::string>();
  const auto& entries = j["entries"];
  if (!entries.is_array()) throw IOError("entries must be an array");

  const std::size_t total = static_cast<std::size_t>(n) * n * n * n;
  std::vector<double> c(total, 0.0);

  if (fmt == "dense") {
    if (entries.size() != total)
      throw IOError("dense entries must hold n^4 numbers");
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (!entries[idx].is_number())
        throw IOError("dense entries must be numbers");
      c[idx] = entries[idx].get<double>();
    }
  } else if (fmt == "sparse") {
    std::set<std::uint64_t> seen;
    for (const auto& e : entries) {
      if (!e.is_array() || e.size() != 5)
        throw IOError("sparse entries must be [i, j, k, l, value]");
      for (int t = 0; t < 4; ++t)
        if (!e[t].is_number_integer())
          throw IOError("sparse entry indices must be integers");
      const int i = e[0].get<int>();
      const int jj = e[1].get<int>();
      const int k = e[2].get<int>();
      const int l = e[3].get<int>();
      if (i < 1 || i > n || jj < 1 || jj > n || k < 1 || k > n || l < 1 ||
          l > n)
        throw InvalidInput("sparse entry index out of range (1-based)");
      if (!(i < jj) || !(k < l) || !(k > i || (k == i && l >= jj)))
        throw InvalidInput(
            "sparse entries must be canonical: i < j, k < l, (i,j) <= (k,l)");
      const std::uint64_t key =
          ((static_cast<std::uint64_t>(i) * 257 + jj) * 257 + k) * 257 + l;
      if (!seen.insert(key).second)
        throw InvalidInput("duplicate sparse entry");
      if (!e[4].is_number()) throw IOError("sparse entry value must be a number");
      assign_orbit(c, n, i - 1, jj - 1, k - 1, l - 1, e[4].get<double>());
    }
  } else {
    throw IOError("format must be \"dense\" or \"sparse\"");
  }

  // Validation doubles as the projection test: orbit expansion already
  // enforces the pair symmetries bit-exactly, and anything violating the
  // Bianchi identity beyond tolerance is rejected rather than repaired, so
  // canonical files round-trip byte-identically.
  return CurvatureTensor::from_components_checked(std::move(c), n);
}

void save_tensor(const CurvatureTensor& r, const std::filesystem::path& path,
                 TensorFileFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  out << tensor_to_string(r, fmt);
  if (!out) throw IOError("failed while writing " + path.string());
}

CurvatureTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return tensor_from_string(buf.str());
}

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + out;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return content_digest(buf.str());
}

}  // namespace curvlab
