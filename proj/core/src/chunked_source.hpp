#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "perslex/corpus.hpp"

namespace perslex::detail {

// Splits a byte stream produced by read_chunk() into lines.
class ChunkedLineSource : public LineSource {
 public:
  bool next(std::string& line) override;

 protected:
  // Returns 0 at end of stream.
  virtual std::size_t read_chunk(char* buffer, std::size_t capacity) = 0;

 private:
  std::vector<char> buffer_ = std::vector<char>(1 << 16);
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
};

#if defined(PERSLEX_HAVE_ZSTD)
std::unique_ptr<LineSource> open_zstd_source(const std::filesystem::path& path);
#endif

}  // namespace perslex::detail
