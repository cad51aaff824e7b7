// Copyright 2026 The seld3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELD_TENSOR_IO_HPP_
#define SELD_TENSOR_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace seld {

enum class TensorDtype : std::uint32_t { kFloat32 = 1, kFloat64 = 2 };

// Dense row-major tensor of doubles, used for on-disk exchange.
struct FlatTensor {
  std::vector<std::size_t> dims;
  std::vector<double> data;

  std::size_t element_count() const;
};

// Block layout (little-endian):
//   char[8]  magic "SELDTNSR"
//   u32      version (1)
//   u32      dtype (TensorDtype)
//   u32      ndim
//   u32      reserved (0)
//   u64      dims[ndim]
//   dtype    data[prod(dims)], row-major
void write_tensor(std::ostream& out, const FlatTensor& tensor,
                  TensorDtype dtype = TensorDtype::kFloat32);
FlatTensor read_tensor(std::istream& in);

void write_tensor_file(const std::filesystem::path& path, const FlatTensor& tensor,
                       TensorDtype dtype = TensorDtype::kFloat32);
FlatTensor read_tensor_file(const std::filesystem::path& path);

// Little-endian scalar helpers shared by the binary formats.
namespace binio {
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);
}  // namespace binio

}  // namespace seld

#endif  // SELD_TENSOR_IO_HPP_
