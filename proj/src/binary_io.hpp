// Copyright 2026 The mvgcn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "mvgcn/error.hpp"

namespace mvgcn::detail {

static_assert(std::endian::native == std::endian::little,
              "checkpoint formats are little-endian");

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path)
      : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError(path_, 0, "cannot open for writing");
  }

  void magic(std::string_view m) { out_.write(m.data(), static_cast<std::streamsize>(m.size())); }
  void u64(std::uint64_t v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }

  /// Writes row-major.
  void matrix(const Eigen::MatrixXd& m) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> r = m;
    out_.write(reinterpret_cast<const char*>(r.data()),
               static_cast<std::streamsize>(sizeof(double) * r.size()));
  }

  void finish() {
    out_.flush();
    if (!out_) throw IoError(path_, 0, "write failed");
  }

 private:
  std::string path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError(path_, 0, "cannot open");
  }

  void expect_magic(std::string_view m) {
    std::string buf(m.size(), '\0');
    in_.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!in_ || buf != m) throw IoError(path_, 0, "bad magic, expected " + std::string(m));
  }

  std::uint64_t u64() {
    std::uint64_t v = 0;
    in_.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in_) throw IoError(path_, 0, "truncated header");
    return v;
  }

  Eigen::MatrixXd matrix(std::uint64_t rows, std::uint64_t cols) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> r(
        static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    in_.read(reinterpret_cast<char*>(r.data()),
             static_cast<std::streamsize>(sizeof(double) * r.size()));
    if (!in_) throw IoError(path_, 0, "truncated payload");
    return r;
  }

  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw IoError(path_, 0, "trailing bytes after payload");
    }
  }

 private:
  std::string path_;
  std::ifstream in_;
};

}  // namespace mvgcn::detail
