#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace linklab {

// Line-oriented reader for tab-separated tables with one header row.
// Rows are read one at a time; the previous row's fields are invalidated by
// next(). Blank lines are skipped, a trailing '\r' is stripped.
class TsvReader {
 public:
  TsvReader(std::istream& in, std::string source,
            std::vector<std::string> expected_header);

  bool next();

  std::size_t row() const { return row_; }
  std::size_t size() const { return fields_.size(); }
  std::string_view operator[](std::size_t i) const { return fields_[i]; }
  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }

  [[noreturn]] void fail(const std::string& message) const;

 private:
  bool read_line();
  void split();

  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::size_t row_ = 0;
};

// Reads the header row only; used to sniff which table a file holds.
std::vector<std::string> read_header(std::istream& in);

// An input file opened for streaming. Paths ending in ".gz" are
// decompressed on the fly.
class InputFile {
 public:
  explicit InputFile(const std::filesystem::path& path);
  ~InputFile();
  InputFile(const InputFile&) = delete;
  InputFile& operator=(const InputFile&) = delete;

  std::istream& stream() { return *stream_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::unique_ptr<std::streambuf> gz_buf_;
  std::unique_ptr<std::istream> stream_;
};

class TsvWriter {
 public:
  TsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);
  TsvWriter(std::ostream& out, std::span<const std::string> header);

  // Fields may not contain tabs or line breaks.
  void row(std::initializer_list<std::string_view> fields);
  void row(std::span<const std::string> fields);

 private:
  void put(std::string_view field, bool first);

  std::ostream& out_;
  std::size_t columns_;
};

// Opens `path` for writing, throwing linklab::Error on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace linklab
