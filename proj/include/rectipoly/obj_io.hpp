#pragma once

#include <iosfwd>
#include <string>

#include "rectipoly/mesh.hpp"

namespace rectipoly {

/// Reads the strict OBJ subset: `v x y z`, `f i j k ...` (1-based vertex
/// indices, three or more per face), `#` comments and blank lines. Any other
/// record type or malformed field throws Error{ParseError} naming the line.
/// The resulting mesh is validated via build_mesh in the given mode.
Mesh read_obj(std::istream& in, MeshMode mode = MeshMode::Closed,
              double tol = kDefaultTol);
Mesh read_obj_file(const std::string& path, MeshMode mode = MeshMode::Closed,
                   double tol = kDefaultTol);

/// Writes the same subset with 17-significant-digit coordinates, so a
/// write/read round trip reproduces vertices bit-exactly.
void write_obj(std::ostream& out, const Mesh& mesh);
void write_obj_file(const std::string& path, const Mesh& mesh);

}  // namespace rectipoly
