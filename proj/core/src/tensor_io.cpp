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

#include "seld/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "seld/error.hpp"
#include "seld/file_io.hpp"

namespace seld {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {
constexpr char kMagic[8] = {'S', 'E', 'L', 'D', 'T', 'N', 'S', 'R'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_raw(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw IoError("unexpected end of binary data");
  return v;
}
}  // namespace

namespace binio {
void write_u32(std::ostream& out, std::uint32_t v) { write_raw(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { write_raw(out, v); }
void write_f64(std::ostream& out, double v) { write_raw(out, v); }
std::uint32_t read_u32(std::istream& in) { return read_raw<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return read_raw<std::uint64_t>(in); }
double read_f64(std::istream& in) { return read_raw<double>(in); }
}  // namespace binio

std::size_t FlatTensor::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void write_tensor(std::ostream& out, const FlatTensor& tensor, TensorDtype dtype) {
  if (tensor.element_count() != tensor.data.size())
    throw ShapeError("tensor data size does not match its dimensions");
  out.write(kMagic, sizeof kMagic);
  binio::write_u32(out, kVersion);
  binio::write_u32(out, static_cast<std::uint32_t>(dtype));
  binio::write_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
  binio::write_u32(out, 0);
  for (auto d : tensor.dims) binio::write_u64(out, d);
  if (dtype == TensorDtype::kFloat64) {
    out.write(reinterpret_cast<const char*>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.data.size() * sizeof(double)));
  } else {
    std::vector<float> narrow(tensor.data.begin(), tensor.data.end());
    out.write(reinterpret_cast<const char*>(narrow.data()),
              static_cast<std::streamsize>(narrow.size() * sizeof(float)));
  }
  if (!out) throw IoError("error while writing tensor");
}

FlatTensor read_tensor(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw IoError("not a tensor block (bad magic)");
  if (binio::read_u32(in) != kVersion) throw IoError("unsupported tensor version");
  const auto dtype = static_cast<TensorDtype>(binio::read_u32(in));
  if (dtype != TensorDtype::kFloat32 && dtype != TensorDtype::kFloat64)
    throw IoError("unsupported tensor dtype");
  const std::uint32_t ndim = binio::read_u32(in);
  if (ndim > 16) throw IoError("tensor rank too large");
  binio::read_u32(in);
  FlatTensor t;
  for (std::uint32_t i = 0; i < ndim; ++i) t.dims.push_back(binio::read_u64(in));
  const std::size_t n = t.element_count();
  if (n > (std::size_t{1} << 34)) throw IoError("tensor too large");
  t.data.resize(n);
  if (dtype == TensorDtype::kFloat64) {
    in.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    std::vector<float> narrow(n);
    in.read(reinterpret_cast<char*>(narrow.data()), static_cast<std::streamsize>(n * sizeof(float)));
    std::copy(narrow.begin(), narrow.end(), t.data.begin());
  }
  if (!in) throw IoError("truncated tensor data");
  return t;
}

void write_tensor_file(const std::filesystem::path& path, const FlatTensor& tensor,
                       TensorDtype dtype) {
  std::ostringstream ss(std::ios::binary);
  write_tensor(ss, tensor, dtype);
  write_file_atomic(path, ss.str());
}

FlatTensor read_tensor_file(const std::filesystem::path& path) {
  std::istringstream ss(read_file(path), std::ios::binary);
  try {
    return read_tensor(ss);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace seld
