#include "robin/field_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace robin {

void write_field(std::ostream& out, const FemField& field) {
  out << "field v1\n" << "N " << field.n << '\n';
  char buf[64];
  for (double v : field.values) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.write(buf, res.ptr - buf);
    out.put('\n');
  }
}

FemField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "field v1") {
    throw FieldFormatError("field file: missing 'field v1' header");
  }
  if (!std::getline(in, line) || !line.starts_with("N ")) {
    throw FieldFormatError("field file: missing 'N <int>' line");
  }
  int n = 0;
  {
    const char* first = line.data() + 2;
    const char* last = line.data() + line.size();
    const auto res = std::from_chars(first, last, n);
    if (res.ec != std::errc() || res.ptr != last || n < 1) {
      throw FieldFormatError("field file: invalid mesh size '" + line.substr(2) + "'");
    }
  }
  FemField field = FemField::zeros(n);
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (!std::getline(in, line)) {
      throw FieldFormatError("field file: expected " + std::to_string(field.values.size()) +
                             " values, found " + std::to_string(i));
    }
    const char* last = line.data() + line.size();
    const auto res = std::from_chars(line.data(), last, field.values[i]);
    if (res.ec != std::errc() || res.ptr != last) {
      throw FieldFormatError("field file: invalid value on line " + std::to_string(i + 3));
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty()) throw FieldFormatError("field file: trailing data after values");
  }
  return field;
}

void write_field_file(const std::filesystem::path& path, const FemField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FieldFormatError("cannot open '" + path.string() + "' for writing");
  write_field(out, field);
  if (!out) throw FieldFormatError("write to '" + path.string() + "' failed");
}

FemField read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FieldFormatError("cannot open '" + path.string() + "'");
  return read_field(in);
}

}  // namespace robin
