#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "tcurv/develop.hpp"
#include "tcurv/majorize.hpp"
#include "tcurv/surface.hpp"

namespace tcurv {

// ASCII mesh format:
//
//   tcurv-mesh 1
//   space <tag>          model space tag (euclidean3, hyperbolic3, klein3, ...)
//   vertices <V>
//   triangles <F>
//   genus <g>
//   <V lines: n chart coordinates, n normal coordinates>
//   <F lines: three zero-based vertex indices>
//
// Numbers carry enough digits for exact double round trips.  read_mesh
// throws ConfigError on malformed headers, counts, or indices.
void write_mesh(std::ostream& os, const TriSurface& s);
TriSurface read_mesh(std::istream& is);
void write_mesh_file(const std::string& path, const TriSurface& s);
TriSurface read_mesh_file(const std::string& path);

// Triangulated copy of a grid patch (two triangles per cell, row-major
// vertex order preserved) so patches can be emitted in the mesh format.
TriSurface surface_from_grid(const GridPatch& p);

// Turning curve table:
//
//   tcurv-turning 1
//   speed <v>
//   knots <m+1>
//   base <x> <y>
//   <t_j> <theta_j>      one line per edge
//   <t_m>                closing knot
//
// Vertices are rebuilt from the recurrence on read.
void write_turning_curve(std::ostream& os, const TurningCurve& c);
TurningCurve read_turning_curve(std::istream& is);

// Shortest representation with 12 significant digits, C locale ('.' decimal
// point); all CSV cells and plot files go through this.
std::string format_g(double v);

// Comma-separated table with one header row and LF line endings.  add()
// rejects rows whose width differs from the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> head) : header(std::move(head)) {}

  void add(std::vector<std::string> row);
  std::string to_string() const;
  void write(std::ostream& os) const;
};

// Two-column whitespace-separated plot data.
void write_plot(std::ostream& os, const std::vector<std::array<double, 2>>& xy);

// Whole-file helpers; write replaces the file, read throws ConfigError when
// the file cannot be opened.
void write_text_file(const std::string& path, const std::string& bytes);
std::string read_text_file(const std::string& path);

}  // namespace tcurv
