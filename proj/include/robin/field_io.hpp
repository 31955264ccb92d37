#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "robin/fem_robin.hpp"

namespace robin {

class FieldFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text format:
//   field v1
//   N <int>
//   (N+1)^2 values, one per line, row-major, 17 significant digits

void write_field(std::ostream& out, const FemField& field);
FemField read_field(std::istream& in);

void write_field_file(const std::filesystem::path& path, const FemField& field);
FemField read_field_file(const std::filesystem::path& path);

}  // namespace robin
