#pragma once

#include <iosfwd>
#include <string>

#include "ldpclab/qc_code.hpp"

namespace ldpclab {

// Reads a MacKay alist matrix (padded or unpadded index lists) into a QcCode
// with lifting size 1, one layer per check row. Used for imported reference
// matrices that have no circulant structure.
QcCode parse_alist(std::istream& in);
QcCode parse_alist_file(const std::string& path);

// Expanded parity-check matrix in padded alist form.
std::string serialize_alist(const QcCode& code);

}  // namespace ldpclab
