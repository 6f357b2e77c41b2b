#include "rectipoly/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "rectipoly/ortho.hpp"
#include "rectipoly/red_graph.hpp"
#include "rectipoly/version.hpp"

namespace rectipoly {

namespace {

const char* verdict_name(AuditVerdict v) {
  switch (v) {
    case AuditVerdict::Consistent: return "Consistent";
    case AuditVerdict::NoConstraint: return "NoConstraint";
    case AuditVerdict::Inconsistent: return "Inconsistent";
  }
  return "Unknown";
}

std::string trimmed_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

nlohmann::json analyze(const Mesh& mesh, double tol) {
  const Topology topo = topology(mesh);
  const EdgeClassification cls = classify_edges(mesh, tol);
  const RectangleVerdict rect = rectangle_check(mesh, tol);
  const OrthogonalityCertificate cert = orthogonality_certificate(mesh, tol);

  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["tolerances"] = {{"rectilinear_rad", tol}, {"rectangle", tol}};
  doc["topology"] = {{"vertices", topo.vertex_count},
                     {"edges", topo.edge_count},
                     {"faces", topo.face_count},
                     {"euler_characteristic", topo.euler_characteristic},
                     {"genus", topo.genus},
                     {"closed", topo.closed}};

  nlohmann::json inventory = nlohmann::json::array();
  for (const RectangleBucket& bucket : rect.inventory)
    inventory.push_back({{"side_a", bucket.side_a},
                         {"side_b", bucket.side_b},
                         {"count", bucket.count}});
  doc["rectangles"] = {{"all_rectangles", rect.all_rectangles},
                       {"inventory", inventory}};

  // Folded dihedral histogram: greedy 1e-6 clusters of the sorted values,
  // each reported by its mean.
  std::vector<double> folded = cls.folded;
  std::sort(folded.begin(), folded.end());
  nlohmann::json histogram = nlohmann::json::array();
  std::size_t i = 0;
  while (i < folded.size()) {
    std::size_t j = i;
    double sum = 0;
    while (j < folded.size() && folded[j] - folded[i] <= 1e-6)
      sum += folded[j++];
    const double mean = sum / double(j - i);
    histogram.push_back({{"folded_rad", mean},
                         {"folded_deg", mean * 180.0 / M_PI},
                         {"count", j - i}});
    i = j;
  }
  doc["dihedrals"] = {{"histogram", histogram},
                      {"red_count", cls.red_count},
                      {"green_count", cls.green_count}};

  doc["certificate"] = {{"pass", cert.pass},
                        {"red_edge_count", cert.red_edge_count}};

  const RedGraph rg = build_red_graph(mesh, cls);
  const std::vector<ComponentStats> stats =
      red_component_stats(rg, topo.euler_characteristic);
  nlohmann::json components = nlohmann::json::array();
  for (const ComponentStats& cs : stats) {
    nlohmann::json degrees = nlohmann::json::object();
    for (const auto& [deg, count] : cs.degree_histogram)
      degrees[std::to_string(deg)] = count;
    nlohmann::json walks = nlohmann::json::object();
    for (const auto& [len, count] : cs.walk_length_histogram)
      walks[std::to_string(len)] = count;
    components.push_back(
        {{"nodes", cs.node_count},
         {"arcs", cs.arc_count},
         {"mesh_edges", cs.mesh_edge_count},
         {"degree_histogram", degrees},
         {"average_degree", cs.average_degree.to_string()},
         {"average_degree_value", cs.average_degree.to_double()},
         {"min_facial_walk", cs.min_walk_length},
         {"facial_walk_count", cs.walk_count},
         {"walk_length_histogram", walks},
         {"euler_bound", {{"holds", cs.bound.holds},
                          {"lhs", cs.bound.lhs.to_string()},
                          {"rhs", cs.bound.rhs.to_string()},
                          {"slack", cs.bound.slack.to_string()}}}});
  }
  doc["red_graph"] = {{"component_count", rg.component_count},
                      {"components", components}};

  if (rect.all_rectangles) {
    const AuditReport audit = g01_audit(mesh, tol);
    doc["audit"] = {{"verdict", verdict_name(audit.verdict)},
                    {"genus", audit.genus},
                    {"red_edge_count", audit.red_edge_count},
                    {"min_red_degree", audit.min_red_degree},
                    {"degree_floor_ok", audit.degree_floor_ok}};
  } else {
    doc["audit"] = {{"verdict", "NotRectangleFaced"}};
  }
  return doc;
}

std::string summarize(const nlohmann::json& report) {
  std::ostringstream out;
  const auto& topo = report.at("topology");
  out << "topology: V=" << topo.at("vertices").get<long long>()
      << " E=" << topo.at("edges").get<long long>()
      << " F=" << topo.at("faces").get<long long>()
      << " chi=" << topo.at("euler_characteristic").get<long long>()
      << " genus=" << topo.at("genus").get<long long>()
      << (topo.at("closed").get<bool>() ? " (closed)" : " (open)") << "\n";

  const auto& rect = report.at("rectangles");
  if (rect.at("all_rectangles").get<bool>()) {
    out << "faces: all rectangles;";
    for (const auto& bucket : rect.at("inventory"))
      out << " " << trimmed_number(bucket.at("side_a").get<double>()) << "x"
          << trimmed_number(bucket.at("side_b").get<double>()) << " x"
          << bucket.at("count").get<long long>();
    out << "\n";
  } else {
    out << "faces: not all rectangles\n";
  }

  const auto& dih = report.at("dihedrals");
  out << "dihedrals:";
  for (const auto& bin : dih.at("histogram"))
    out << " " << trimmed_number(bin.at("folded_deg").get<double>()) << "deg x"
        << bin.at("count").get<long long>();
  out << "\n";

  const auto& cert = report.at("certificate");
  out << "certificate: " << (cert.at("pass").get<bool>() ? "Pass" : "Fail")
      << " (" << cert.at("red_edge_count").get<long long>()
      << " red edges)\n";

  const auto& rg = report.at("red_graph");
  out << "red graph: " << rg.at("component_count").get<long long>()
      << " component(s)";
  int idx = 0;
  for (const auto& comp : rg.at("components")) {
    out << "\n  component " << idx++ << ": "
        << comp.at("nodes").get<long long>() << " nodes, "
        << comp.at("arcs").get<long long>() << " arcs, average degree "
        << comp.at("average_degree").get<std::string>()
        << ", min facial walk " << comp.at("min_facial_walk").get<long long>()
        << ", Euler bound "
        << (comp.at("euler_bound").at("holds").get<bool>() ? "holds"
                                                           : "violated")
        << " (slack "
        << comp.at("euler_bound").at("slack").get<std::string>() << ")";
  }
  out << "\n";

  const auto& audit = report.at("audit");
  out << "audit: " << audit.at("verdict").get<std::string>();
  if (audit.contains("genus"))
    out << " (genus " << audit.at("genus").get<long long>()
        << ", min red degree " << audit.at("min_red_degree").get<long long>()
        << ")";
  out << "\n";
  return out.str();
}

}  // namespace rectipoly
