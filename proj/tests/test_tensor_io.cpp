#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "curvlab/model_spaces.hpp"
#include "curvlab/tensor_io.hpp"

using namespace curvlab;

namespace {

bool bit_identical(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("sparse round trip is byte-identical and exact") {
  std::vector<CurvatureTensor> tensors;
  tensors.push_back(constant_curvature(4, 1.0));
  tensors.push_back(fubini_study(2).tensor);
  tensors.push_back(sphere_cross_circle(5));
  tensors.push_back(random_curvature_tensor(5, 42, 1.0));
  tensors.push_back(flat(4));

  for (const auto& r : tensors) {
    const std::string text = tensor_to_string(r, TensorFileFormat::Sparse);
    auto loaded = tensor_from_string(text);
    CHECK(bit_identical(loaded.components(), r.components()));
    CHECK(tensor_to_string(loaded, TensorFileFormat::Sparse) == text);
  }
}

TEST_CASE("dense round trip is byte-identical and exact") {
  auto r = random_curvature_tensor(4, 7, 2.0);
  const std::string text = tensor_to_string(r, TensorFileFormat::Dense);
  auto loaded = tensor_from_string(text);
  CHECK(bit_identical(loaded.components(), r.components()));
  CHECK(tensor_to_string(loaded, TensorFileFormat::Dense) == text);
}

TEST_CASE("file save and load") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "curvlab_io_test";
  fs::create_directories(dir);
  const auto path = dir / "cp2.json";
  auto r = fubini_study(2).tensor;
  save_tensor(r, path, TensorFileFormat::Sparse);
  auto loaded = load_tensor(path);
  CHECK(bit_identical(loaded.components(), r.components()));
  CHECK(file_digest(path) == content_digest(tensor_to_string(r, TensorFileFormat::Sparse)));
  fs::remove_all(dir);
}

TEST_CASE("sparse canonicality is enforced") {
  // non-canonical index order (j < i)
  CHECK_THROWS_AS(tensor_from_string(R"({"dim":4,"format":"sparse",
    "entries":[[2,1,1,2,1.0]]})"),
                  InvalidInput);
  // (k,l) < (i,j)
  CHECK_THROWS_AS(tensor_from_string(R"({"dim":4,"format":"sparse",
    "entries":[[3,4,1,2,1.0]]})"),
                  InvalidInput);
  // duplicate entry
  CHECK_THROWS_AS(tensor_from_string(R"({"dim":4,"format":"sparse",
    "entries":[[1,2,1,2,1.0],[1,2,1,2,2.0]]})"),
                  InvalidInput);
  // out of range
  CHECK_THROWS_AS(tensor_from_string(R"({"dim":4,"format":"sparse",
    "entries":[[1,5,1,5,1.0]]})"),
                  InvalidInput);
}

TEST_CASE("invariant-violating files are rejected with a residual message") {
  // A lone R_1234 entry violates the Bianchi identity after expansion.
  try {
    tensor_from_string(R"({"dim":4,"format":"sparse",
      "entries":[[1,2,3,4,1.0]]})");
    CHECK(false);
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("Bianchi") != std::string::npos);
  }
  // A Bianchi-consistent pair loads fine: R_1234 = 1, R_1324 = -... the
  // orbit of {1,2,3,4} needs three canonical entries summing to zero.
  auto ok = tensor_from_string(R"({"dim":4,"format":"sparse",
    "entries":[[1,2,3,4,1.0],[1,3,2,4,1.0]]})");
  // Bianchi: R_1234 + R_1342 + R_1423 = R_1234 - R_1324 + R_1423.
  CHECK(ok.at(0, 1, 2, 3) == 1.0);
}

TEST_CASE("malformed files raise IOError") {
  CHECK_THROWS_AS(tensor_from_string("not json"), IOError);
  CHECK_THROWS_AS(tensor_from_string(R"({"dim":4})"), IOError);
  CHECK_THROWS_AS(tensor_from_string(R"({"dim":4,"format":"xml","entries":[]})"),
                  IOError);
  CHECK_THROWS_AS(tensor_from_string(R"({"dim":4,"format":"dense","entries":[1.0]})"),
                  IOError);
  CHECK_THROWS_AS(load_tensor("/nonexistent/path.json"), IOError);
}

TEST_CASE("digest is stable") {
  CHECK(content_digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(content_digest("curvlab") != content_digest("curvlab "));
}
