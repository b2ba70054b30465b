#pragma once

#include <string>

namespace qhfmp {

// Canonical test-vector file for both standard instances: empty input, the
// three-byte string "abc", 1 KiB of 0x00 and 1 KiB of 0xFF. Byte-stable
// across releases; regenerating it must reproduce the committed golden file.
std::string canonical_vectors_json();

}  // namespace qhfmp
