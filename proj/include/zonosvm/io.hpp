#pragma once

#include "zonosvm/common.hpp"
#include "zonosvm/dataset.hpp"

#include <iosfwd>
#include <string>

namespace zonosvm {

enum class DatasetFormat { csv, svmlight };

// csv rows: "label,x1,...,xd" with label in {+1, 1, -1}. svmlight rows:
// "label idx:val ..." with 1-based indices; unlisted coordinates are zero and
// the dimension is the largest index seen in the file. In both formats
// '#'-prefixed lines are comments, blank lines are skipped and a trailing
// '\r' is tolerated. Throws ParseError with the 1-based line number on
// malformed rows and ValidationError for single-class data.
LabeledDataset parse_dataset(std::istream& in, DatasetFormat format);

// parse_dataset on the contents of `path`; throws ValidationError if the file
// cannot be opened.
LabeledDataset load_dataset(const std::string& path, DatasetFormat format);

// Inverse of parse_dataset: values are written with enough digits to
// round-trip exactly. The svmlight writer omits zero coordinates except the
// last one, which is always written so the dimension survives the trip.
void write_dataset(std::ostream& out, const LabeledDataset& ds, DatasetFormat format);

DatasetFormat parse_format_name(const std::string& name);  // "csv" | "svmlight"

}  // namespace zonosvm
