#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nsdecay/field.hpp"

namespace nsd {

// Binary field snapshot, format version 1:
//   bytes 0..3   magic "NSDF"
//   uint32       version (= 1)
//   uint32       n (spatial dimension)
//   uint32       ncomp
//   uint32[n]    dims
//   float64      L
//   float64      time
//   float64[...] components, each dims-shaped, C order, little endian
// All integers little endian.
void write_snapshot(const std::filesystem::path& path, const GridField& f, double time);
GridField read_snapshot(const std::filesystem::path& path, double* time = nullptr);

// CSV with a single header line; rows are written with %.17g.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Same, with a leading text column.
void write_csv_labeled(const std::filesystem::path& path, const std::string& label_header,
                       const std::vector<std::string>& header,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& rows);

void ensure_dir(const std::filesystem::path& dir);

}  // namespace nsd
