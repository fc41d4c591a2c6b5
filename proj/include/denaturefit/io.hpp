#pragma once

#include <iosfwd>
#include <string>

#include "denaturefit/types.hpp"

namespace denaturefit::io {

// Shortest decimal round-trip representation of a double.
std::string format_double(double v);

// CSV with header "denaturant,signal"; blank lines and lines starting with
// '#' are skipped. Throws ParseError (with the 1-based line number) on
// malformed content and Error if the file cannot be opened.
DenaturationDataset read_dataset_csv(const std::string& path);
DenaturationDataset parse_dataset_csv(std::istream& in);

void write_dataset_csv(const std::string& path, const DenaturationDataset& data,
                       const std::string& comment = "");

}  // namespace denaturefit::io
