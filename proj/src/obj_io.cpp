#include "rectipoly/obj_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rectipoly {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::ParseError,
              "line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& tok, std::size_t line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty())
    parse_fail(line, "malformed number '" + tok + "'");
  return value;
}

long parse_int(const std::string& tok, std::size_t line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const long value = std::strtol(begin, &end, 10);
  if (end != begin + tok.size() || tok.empty())
    parse_fail(line, "malformed index '" + tok + "'");
  return value;
}

}  // namespace

Mesh read_obj(std::istream& in, MeshMode mode, double tol) {
  std::vector<Vec3> vertices;
  std::vector<std::vector<Index>> faces;
  std::vector<std::size_t> face_lines;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string head;
    if (!(ss >> head)) continue;  // blank line
    if (head[0] == '#') continue;  // comment

    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);

    if (head == "v") {
      if (toks.size() != 3)
        parse_fail(lineno, "'v' record needs exactly 3 coordinates");
      vertices.emplace_back(parse_double(toks[0], lineno),
                            parse_double(toks[1], lineno),
                            parse_double(toks[2], lineno));
    } else if (head == "f") {
      if (toks.size() < 3)
        parse_fail(lineno, "'f' record needs at least 3 indices");
      std::vector<Index> loop;
      for (const auto& t : toks) {
        const long idx = parse_int(t, lineno);
        if (idx < 1)
          parse_fail(lineno, "face index " + std::to_string(idx) +
                                 " below 1 (indices are 1-based)");
        loop.push_back(Index(idx - 1));
      }
      faces.push_back(std::move(loop));
      face_lines.push_back(lineno);
    } else {
      parse_fail(lineno, "unsupported record '" + head + "'");
    }
  }

  for (std::size_t f = 0; f < faces.size(); ++f)
    for (Index idx : faces[f])
      if (idx >= Index(vertices.size()))
        parse_fail(face_lines[f], "face index " + std::to_string(idx + 1) +
                                      " exceeds vertex count " +
                                      std::to_string(vertices.size()));

  if (faces.empty()) parse_fail(lineno, "no faces in input");
  return build_mesh(std::move(vertices), std::move(faces), mode, tol);
}

Mesh read_obj_file(const std::string& path, MeshMode mode, double tol) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  return read_obj(in, mode, tol);
}

void write_obj(std::ostream& out, const Mesh& mesh) {
  char buf[96];
  for (const Vec3& p : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(),
                  p.z());
    out << buf;
  }
  for (const auto& loop : mesh.faces) {
    out << 'f';
    for (Index v : loop) out << ' ' << (v + 1);
    out << '\n';
  }
}

void write_obj_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::ParseError, "cannot open '" + path + "' for write");
  write_obj(out, mesh);
}

}  // namespace rectipoly
