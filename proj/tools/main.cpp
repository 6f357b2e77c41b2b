#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "rectipoly/constructions.hpp"
#include "rectipoly/mesh.hpp"
#include "rectipoly/obj_io.hpp"
#include "rectipoly/report.hpp"
#include "rectipoly/spherical.hpp"
#include "rectipoly/unfold.hpp"
#include "rectipoly/version.hpp"

namespace {

using namespace rectipoly;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
      return 2;
    case ErrorKind::ConstructionSelfCheck:
    case ErrorKind::SamplingFailure:
    case ErrorKind::UnrealizablePattern:
    case ErrorKind::FoldMismatch:
      return 3;
    case ErrorKind::NonManifoldEdge:
    case ErrorKind::BadVertexLink:
    case ErrorKind::NonPlanarFace:
    case ErrorKind::DegenerateFace:
    case ErrorKind::OpenMesh:
    case ErrorKind::CollinearityViolation:
    case ErrorKind::NotRectangleFaced:
    case ErrorKind::NonQuarterArc:
      return 4;
  }
  return 1;
}

double default_tolerance() {
  if (const char* env = std::getenv("RECTIPOLY_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0))
      throw Error(ErrorKind::InvalidArgument,
                  "RECTIPOLY_TOL must be a positive number, got '" +
                      std::string(env) + "'");
    return v;
  }
  return kDefaultTol;
}

void write_mesh(const Mesh& mesh, const std::string& out_path) {
  if (out_path.empty()) {
    write_obj(std::cout, mesh);
    return;
  }
  write_obj_file(out_path, mesh);
  const char* kind = mesh.mode == MeshMode::Closed ? "closed" : "open";
  std::cerr << "wrote " << out_path << " (" << kind << ", V="
            << mesh.vertex_count() << " E=" << mesh.edge_count()
            << " F=" << mesh.face_count() << ")\n";
}

struct BuildOptions {
  std::string model;
  double L = 3.0;
  double size = 1.0;
  int outer = 3;
  int hole = 1;
  int height = 1;
  std::uint64_t seed = 1;
  double edge_length = 1.0;
  std::string out;
};

int run_build(const BuildOptions& opt, double tol) {
  if (opt.model.rfind("star:", 0) == 0) {
    const std::string pattern = opt.model.substr(5);
    const StarGadget gadget =
        make_star_gadget(pattern, opt.seed, opt.edge_length, tol);
    write_mesh(gadget.mesh, opt.out);
    std::cerr << "star pattern '" << pattern << "' realized at offset "
              << gadget.pattern_offset << " (seed " << opt.seed << ")\n";
    return 0;
  }
  Mesh mesh;
  if (opt.model == "cube") {
    mesh = make_cube(opt.size);
  } else if (opt.model == "frame-torus") {
    mesh = make_frame_torus(opt.outer, opt.hole, opt.height);
  } else if (opt.model == "octopus") {
    mesh = make_octopus(opt.L);
  } else if (opt.model == "octopus-cubes") {
    mesh = make_octopus_cubes(opt.L);
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "unknown model '" + opt.model +
                    "' (expected cube, frame-torus, octopus, octopus-cubes, "
                    "or star:<pattern>)");
  }
  write_mesh(mesh, opt.out);
  return 0;
}

int run_analyze(const std::string& input, double tol,
                const std::string& json_path) {
  const Mesh mesh = read_obj_file(input, MeshMode::Closed, tol);
  const nlohmann::json report = analyze(mesh, tol);
  std::cout << summarize(report);
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out)
      throw Error(ErrorKind::InvalidArgument,
                  "cannot open '" + json_path + "' for writing");
    out << report.dump(2) << "\n";
    std::cerr << "wrote " << json_path << "\n";
  }
  return 0;
}

int run_unfold(const std::string& input, const std::string& strategy_name,
               Index root, const std::string& svg_path, double scale,
               double tol) {
  const Mesh mesh = read_obj_file(input, MeshMode::Closed, tol);
  UnfoldStrategy strategy = UnfoldStrategy::BreadthFirst;
  if (strategy_name == "dfs") strategy = UnfoldStrategy::DepthFirst;
  if (strategy_name == "steepest") strategy = UnfoldStrategy::SteepestNormal;
  const Net net = unfold(mesh, strategy, root);
  const OverlapReport overlap = overlap_status(net, tol);

  std::cout << "strategy: " << strategy_name << "  root: " << net.root
            << "\n";
  std::cout << "faces: " << net.panels.size()
            << "  folds: " << net.fold_edges.size()
            << "  cuts: " << net.cut_edges.size()
            << "  cut cycle rank: " << net.cut_cycle_rank << "\n";
  const char* status = overlap.status == OverlapStatus::Simple ? "Simple"
                       : overlap.status == OverlapStatus::Touching
                           ? "Touching"
                           : "Overlapping";
  std::cout << "overlap: " << status;
  if (!overlap.witnesses.empty()) {
    std::cout << " (witness panels";
    for (const auto& [a, b] : overlap.witnesses)
      std::cout << " " << a << "-" << b;
    std::cout << ")";
  }
  std::cout << "\n";

  if (!svg_path.empty()) {
    std::ofstream out(svg_path);
    if (!out)
      throw Error(ErrorKind::InvalidArgument,
                  "cannot open '" + svg_path + "' for writing");
    export_svg(out, net, scale);
    std::cerr << "wrote " << svg_path << "\n";
  }
  return 0;
}

int run_sweep(int samples, const std::string& degrees, std::uint64_t seed,
              double tol) {
  const auto dots = degrees.find("..");
  int lo = 0, hi = 0;
  try {
    if (dots == std::string::npos) throw std::invalid_argument(degrees);
    lo = std::stoi(degrees.substr(0, dots));
    hi = std::stoi(degrees.substr(dots + 2));
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument,
                "--degrees expects a..b, got '" + degrees + "'");
  }
  if (lo < 3 || hi < lo)
    throw Error(ErrorKind::InvalidArgument,
                "--degrees needs 3 <= a <= b, got '" + degrees + "'");
  if (samples < 1)
    throw Error(ErrorKind::InvalidArgument, "--samples must be positive");

  Rng rng(seed);
  std::map<int, long> red_histogram;
  long violations = 0;
  long detail_failures = 0;
  for (int i = 0; i < samples; ++i) {
    const int n = lo + (i % (hi - lo + 1));
    const SphericalLink link = sample_closed_link(n, rng, tol);
    const LocalVerdict verdict = local_constraint_check(link, tol);
    red_histogram[int(verdict.red_count)] += 1;
    if (verdict.status == LocalStatus::LemmaViolation) {
      ++violations;
      std::cerr << "violation (" << verdict.violated_lemma << "): "
                << verdict.detail << "\n";
    } else if (verdict.red_count == 2 && !verdict.antipodal) {
      ++detail_failures;
      std::cerr << "two red edges not antipodal: " << verdict.detail << "\n";
    } else if (verdict.red_count == 4 && !verdict.plus_shape) {
      ++detail_failures;
      std::cerr << "four red edges without '+' shape: " << verdict.detail
                << "\n";
    }
  }

  std::cout << "samples: " << samples << "  degrees: " << lo << ".." << hi
            << "  seed: " << seed << "\n";
  std::cout << "red-count histogram:";
  for (const auto& [reds, count] : red_histogram)
    std::cout << " " << reds << ":" << count;
  std::cout << "\n";
  std::cout << "lemma violations: " << violations << "\n";
  std::cout << "detail failures: " << detail_failures << "\n";
  return violations + detail_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rectangle-faced polyhedra: build, analyze, unfold"};
  app.set_version_flag("--version", std::string(kToolName) + " " +
                                        kToolVersion);
  app.require_subcommand(1);

  double tol_flag = -1.0;
  app.add_option("--tol", tol_flag,
                 "rectilinearity tolerance in radians (default 1e-9, or "
                 "RECTIPOLY_TOL)");

  BuildOptions build_opt;
  CLI::App* build = app.add_subcommand("build", "construct a model as OBJ");
  build->add_option("model", build_opt.model,
                    "cube | frame-torus | octopus | octopus-cubes | "
                    "star:<pattern>")
      ->required();
  build->add_option("--L", build_opt.L, "octopus arm length (default 3)");
  build->add_option("--size", build_opt.size, "cube side (default 1)");
  build->add_option("--outer", build_opt.outer,
                    "frame torus outer side (default 3)");
  build->add_option("--hole", build_opt.hole,
                    "frame torus hole side (default 1)");
  build->add_option("--height", build_opt.height,
                    "frame torus height (default 1)");
  build->add_option("--seed", build_opt.seed, "star sampling seed");
  build->add_option("--edge-length", build_opt.edge_length,
                    "star gadget edge length (default 1)");
  build->add_option("--out", build_opt.out, "output OBJ path (default stdout)");

  std::string analyze_input, analyze_json;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "audit a closed OBJ mesh");
  analyze_cmd->add_option("input", analyze_input, "OBJ file")->required();
  analyze_cmd->add_option("--json", analyze_json, "write full JSON report");

  std::string unfold_input, unfold_strategy = "bfs", unfold_svg;
  Index unfold_root = 0;
  double unfold_scale = 20.0;
  CLI::App* unfold_cmd =
      app.add_subcommand("unfold", "edge-unfold a closed OBJ mesh");
  unfold_cmd->add_option("input", unfold_input, "OBJ file")->required();
  unfold_cmd->add_option("--strategy", unfold_strategy,
                         "bfs | dfs | steepest (default bfs)")
      ->check(CLI::IsMember({"bfs", "dfs", "steepest"}));
  unfold_cmd->add_option("--root", unfold_root, "root face id (default 0)");
  unfold_cmd->add_option("--svg", unfold_svg, "write the net as SVG");
  unfold_cmd->add_option("--scale", unfold_scale,
                         "millimeters per model unit (default 20)");

  int sweep_samples = 10000;
  std::string sweep_degrees = "3..12";
  std::uint64_t sweep_seed = 42;
  CLI::App* sweep = app.add_subcommand(
      "lemma-sweep", "sample random spherical links, check local lemmas");
  sweep->add_option("--samples", sweep_samples, "sample count (default 10000)");
  sweep->add_option("--degrees", sweep_degrees,
                    "degree range a..b (default 3..12)");
  sweep->add_option("--seed", sweep_seed, "RNG seed (default 42)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const double tol = tol_flag > 0 ? tol_flag : default_tolerance();
    if (build->parsed()) return run_build(build_opt, tol);
    if (analyze_cmd->parsed())
      return run_analyze(analyze_input, tol, analyze_json);
    if (unfold_cmd->parsed())
      return run_unfold(unfold_input, unfold_strategy, unfold_root,
                        unfold_svg, unfold_scale, tol);
    if (sweep->parsed())
      return run_sweep(sweep_samples, sweep_degrees, sweep_seed, tol);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
