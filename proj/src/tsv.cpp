#include "linklab/tsv.hpp"

#include <zlib.h>

#include <array>

#include "linklab/error.hpp"

namespace linklab {
namespace {

class GzStreambuf : public std::streambuf {
 public:
  explicit GzStreambuf(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw InputError("cannot open " + path);
    gzbuffer(file_, 1 << 17);
  }
  ~GzStreambuf() override {
    if (file_ != nullptr) gzclose(file_);
  }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    int n = gzread(file_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
    if (n < 0) {
      int errnum = 0;
      throw Error(std::string("gzip read error: ") + gzerror(file_, &errnum));
    }
    if (n == 0) return traits_type::eof();
    setg(buffer_.data(), buffer_.data(), buffer_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  gzFile file_;
  std::array<char, 1 << 16> buffer_{};
};

void check_field(std::string_view field) {
  if (field.find_first_of("\t\n\r") != std::string_view::npos) {
    throw Error("field contains tab or line break: '" + std::string(field) + "'");
  }
}

}  // namespace

TsvReader::TsvReader(std::istream& in, std::string source,
                     std::vector<std::string> expected_header)
    : in_(in), source_(std::move(source)), header_(std::move(expected_header)) {
  if (!read_line()) throw IngestError(source_, 1, "missing header row");
  split();
  bool ok = fields_.size() == header_.size();
  for (std::size_t i = 0; ok && i < header_.size(); ++i) ok = fields_[i] == header_[i];
  if (!ok) {
    std::string want;
    for (const auto& h : header_) want += (want.empty() ? "" : ",") + h;
    fail("unexpected header, want columns " + want);
  }
}

bool TsvReader::read_line() {
  while (std::getline(in_, line_)) {
    ++row_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (!line_.empty()) return true;
  }
  if (in_.bad()) fail("read error");
  return false;
}

void TsvReader::split() {
  fields_.clear();
  std::string_view rest(line_);
  for (;;) {
    auto tab = rest.find('\t');
    fields_.push_back(rest.substr(0, tab));
    if (tab == std::string_view::npos) break;
    rest.remove_prefix(tab + 1);
  }
}

bool TsvReader::next() {
  if (!read_line()) return false;
  split();
  if (fields_.size() != header_.size()) {
    fail("expected " + std::to_string(header_.size()) + " fields, got " +
         std::to_string(fields_.size()));
  }
  return true;
}

void TsvReader::fail(const std::string& message) const {
  throw IngestError(source_, row_, message);
}

std::vector<std::string> read_header(std::istream& in) {
  std::string line;
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    for (;;) {
      auto tab = rest.find('\t');
      out.emplace_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    break;
  }
  return out;
}

InputFile::InputFile(const std::filesystem::path& path) : name_(path.string()) {
  if (!std::filesystem::exists(path)) throw InputError("no such file: " + name_);
  if (path.extension() == ".gz") {
    gz_buf_ = std::make_unique<GzStreambuf>(name_);
    stream_ = std::make_unique<std::istream>(gz_buf_.get());
  } else {
    auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file) throw InputError("cannot open " + name_);
    stream_ = std::move(file);
  }
}

InputFile::~InputFile() = default;

TsvWriter::TsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(header.size()) {
  row(header);
}

TsvWriter::TsvWriter(std::ostream& out, std::span<const std::string> header)
    : out_(out), columns_(header.size()) {
  row(header);
}

void TsvWriter::put(std::string_view field, bool first) {
  check_field(field);
  if (!first) out_.put('\t');
  out_.write(field.data(), static_cast<std::streamsize>(field.size()));
}

void TsvWriter::row(std::initializer_list<std::string_view> fields) {
  if (fields.size() != columns_) throw Error("tsv row width mismatch");
  bool first = true;
  for (auto f : fields) {
    put(f, first);
    first = false;
  }
  out_.put('\n');
}

void TsvWriter::row(std::span<const std::string> fields) {
  if (fields.size() != columns_) throw Error("tsv row width mismatch");
  bool first = true;
  for (const auto& f : fields) {
    put(f, first);
    first = false;
  }
  out_.put('\n');
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot write " + path.string());
  return out;
}

}  // namespace linklab
