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

#if defined(PERSLEX_HAVE_ZSTD)

#include <cstdio>
#include <memory>

#include "chunked_source.hpp"
#include "perslex/error.hpp"

// Stable streaming API of libzstd (>= 1.4), declared here because only the
// runtime library may be installed.
extern "C" {
struct ZSTD_DCtx_s;
typedef struct ZSTD_DCtx_s ZSTD_DCtx;
typedef struct {
  const void* src;
  size_t size;
  size_t pos;
} ZSTD_inBuffer;
typedef struct {
  void* dst;
  size_t size;
  size_t pos;
} ZSTD_outBuffer;
ZSTD_DCtx* ZSTD_createDCtx(void);
size_t ZSTD_freeDCtx(ZSTD_DCtx* dctx);
size_t ZSTD_DCtx_setParameter(ZSTD_DCtx* dctx, int param, int value);
size_t ZSTD_decompressStream(ZSTD_DCtx* zds, ZSTD_outBuffer* output, ZSTD_inBuffer* input);
unsigned ZSTD_isError(size_t code);
const char* ZSTD_getErrorName(size_t code);
}

namespace perslex::detail {

namespace {

constexpr int kZstdWindowLogMax = 100;  // ZSTD_d_windowLogMax

class ZstdLineSource final : public ChunkedLineSource {
 public:
  explicit ZstdLineSource(const std::filesystem::path& path)
      : file_(std::fopen(path.c_str(), "rb")), ctx_(ZSTD_createDCtx()) {
    if (!file_) throw Error(Errc::io, "cannot open " + path.string());
    if (!ctx_) throw Error(Errc::io, "cannot create zstd context");
    // Reddit dumps are compressed with --long=31.
    ZSTD_DCtx_setParameter(ctx_, kZstdWindowLogMax, 31);
  }
  ~ZstdLineSource() override {
    ZSTD_freeDCtx(ctx_);
    if (file_) std::fclose(file_);
  }

 protected:
  std::size_t read_chunk(char* buffer, std::size_t capacity) override {
    ZSTD_outBuffer out{buffer, capacity, 0};
    while (out.pos == 0) {
      if (in_.pos == in_.size) {
        std::size_t n = std::fread(input_.data(), 1, input_.size(), file_);
        in_ = {input_.data(), n, 0};
        if (n == 0) {
          // Flush whatever the decoder still holds; zero output means end of stream.
          std::size_t rc = ZSTD_decompressStream(ctx_, &out, &in_);
          if (ZSTD_isError(rc)) throw Error(Errc::io, std::string("zstd: ") + ZSTD_getErrorName(rc));
          return out.pos;
        }
      }
      std::size_t rc = ZSTD_decompressStream(ctx_, &out, &in_);
      if (ZSTD_isError(rc)) throw Error(Errc::io, std::string("zstd: ") + ZSTD_getErrorName(rc));
    }
    return out.pos;
  }

 private:
  std::FILE* file_;
  ZSTD_DCtx* ctx_;
  std::vector<char> input_ = std::vector<char>(1 << 17);
  ZSTD_inBuffer in_{nullptr, 0, 0};
};

}  // namespace

std::unique_ptr<LineSource> open_zstd_source(const std::filesystem::path& path) {
  return std::make_unique<ZstdLineSource>(path);
}

}  // namespace perslex::detail

#endif
