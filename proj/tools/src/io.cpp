#include "io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "genum/error.hpp"

namespace genum::cli {

InputFormat parse_format(std::string_view name) {
  if (name == "values") return InputFormat::Values;
  if (name == "value-freq") return InputFormat::ValueFreq;
  throw Error(ErrorCode::ParseError, "unknown input format '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what, line);
}

double parse_value(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  // from_chars rejects a leading '+', which plain decimal text may carry.
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ptr != tok.data() + tok.size()) {
    bad_line(line, "not a number: '" + std::string(tok) + "'");
  }
  if (ec == std::errc::result_out_of_range) bad_line(line, "value out of double range");
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteValue, "line " + std::to_string(line) + ": non-finite value",
                line);
  }
  return v;
}

std::uint64_t parse_frequency(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  std::uint64_t f = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), f);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || f == 0) {
    bad_line(line, "frequency must be a positive integer: '" + std::string(tok) + "'");
  }
  return f;
}

}  // namespace

DataSet parse_dataset(std::string_view text, InputFormat format) {
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    if (format == InputFormat::Values) {
      entries.push_back({parse_value(line, line_no), 1});
    } else {
      const std::size_t comma = line.find(',');
      if (comma == std::string_view::npos) bad_line(line_no, "expected 'value,frequency'");
      entries.push_back({parse_value(line.substr(0, comma), line_no),
                         parse_frequency(line.substr(comma + 1), line_no)});
    }
  }
  if (entries.empty()) throw Error(ErrorCode::EmptyInput, "input holds no values");

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const Entry& e : entries) {
    if (!merged.empty() && merged.back().value == e.value) {
      merged.back().frequency += e.frequency;
    } else {
      merged.push_back(e);
    }
  }
  return DataSet::from_entries(std::move(merged));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArguments, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::InvalidArguments, "write failed: " + path.string());
}

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace genum::cli
