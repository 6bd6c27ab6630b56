// Copyright 2026 the perslex authors
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

#include <zlib.h>

#include <cstdio>
#include <memory>

#include "chunked_source.hpp"
#include "perslex/error.hpp"

namespace perslex {

namespace detail {

bool ChunkedLineSource::next(std::string& line) {
  line.clear();
  while (true) {
    for (std::size_t i = begin_; i < end_; ++i) {
      if (buffer_[i] == '\n') {
        line.append(buffer_.data() + begin_, i - begin_);
        begin_ = i + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
    }
    line.append(buffer_.data() + begin_, end_ - begin_);
    begin_ = end_ = 0;
    if (eof_) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return !line.empty();
    }
    end_ = read_chunk(buffer_.data(), buffer_.size());
    if (end_ == 0) eof_ = true;
  }
}

}  // namespace detail

namespace {

class FileLineSource final : public detail::ChunkedLineSource {
 public:
  explicit FileLineSource(const std::filesystem::path& path) : file_(std::fopen(path.c_str(), "rb")) {
    if (!file_) throw Error(Errc::io, "cannot open " + path.string());
  }
  ~FileLineSource() override { std::fclose(file_); }

 protected:
  std::size_t read_chunk(char* buffer, std::size_t capacity) override {
    std::size_t n = std::fread(buffer, 1, capacity, file_);
    if (n == 0 && std::ferror(file_)) throw Error(Errc::io, "read error");
    return n;
  }

 private:
  std::FILE* file_;
};

class GzipLineSource final : public detail::ChunkedLineSource {
 public:
  explicit GzipLineSource(const std::filesystem::path& path) : file_(gzopen(path.c_str(), "rb")) {
    if (!file_) throw Error(Errc::io, "cannot open " + path.string());
    gzbuffer(file_, 1 << 17);
  }
  ~GzipLineSource() override { gzclose(file_); }

 protected:
  std::size_t read_chunk(char* buffer, std::size_t capacity) override {
    int n = gzread(file_, buffer, static_cast<unsigned>(capacity));
    if (n < 0) {
      int err = 0;
      throw Error(Errc::io, std::string("gzip read error: ") + gzerror(file_, &err));
    }
    return static_cast<std::size_t>(n);
  }

 private:
  gzFile file_;
};

}  // namespace

bool MemoryLineSource::next(std::string& line) {
  if (pos_ >= lines_.size()) return false;
  line = lines_[pos_++];
  return true;
}

std::unique_ptr<LineSource> open_line_source(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(Errc::missing_input, "no such file: " + path.string());
  const std::string ext = path.extension().string();
  if (ext == ".gz") return std::make_unique<GzipLineSource>(path);
  if (ext == ".zst" || ext == ".zstd") {
#if defined(PERSLEX_HAVE_ZSTD)
    return detail::open_zstd_source(path);
#else
    throw Error(Errc::io, "zstd input requested but this build has no zstd support");
#endif
  }
  return std::make_unique<FileLineSource>(path);
}

}  // namespace perslex
