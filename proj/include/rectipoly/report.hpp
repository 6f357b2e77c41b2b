#pragma once

#include "json.hpp"

#include "rectipoly/mesh.hpp"

namespace rectipoly {

/// Full analysis of a closed mesh as a versioned JSON document: topology,
/// rectangle inventory, folded-dihedral histogram (bucketed at 1e-6 rad),
/// orthogonality certificate, per-component red-graph statistics with the
/// Euler bound, and the genus-0/1 audit verdict. Deterministic ordering
/// (edges by vertex pair, buckets by value) so reports diff cleanly.
nlohmann::json analyze(const Mesh& mesh, double tol = kDefaultTol);

/// Short human-readable summary of the same analysis.
std::string summarize(const nlohmann::json& report);

}  // namespace rectipoly
