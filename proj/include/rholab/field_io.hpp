#pragma once

#include <filesystem>
#include <iosfwd>

#include "rholab/grid.hpp"

namespace rholab {

/// RSF1: text header (magic, dim, counts, origin, spacing, kind, payload
/// description, blank line) followed by raw little-endian float64 values.
void write_field(const std::filesystem::path& path, const GridField& field);
GridField read_field(const std::filesystem::path& path);

void write_field(std::ostream& out, const GridField& field);
GridField read_field(std::istream& in);

/// CSV import: `# rsf-csv dim=3 counts=2,2,2 [origin=..] [spacing=..] [kind=..]`
/// then one value per line. Origin defaults to 0 and spacing to 1.
GridField read_csv_field(const std::filesystem::path& path);
GridField read_csv_field(std::istream& in);
void write_csv_field(std::ostream& out, const GridField& field);

/// Dispatches on the first bytes: RSF1 magic or rsf-csv header.
GridField load_field(const std::filesystem::path& path);

}  // namespace rholab
