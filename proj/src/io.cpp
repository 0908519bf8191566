#include "tcurv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tcurv/errors.hpp"

namespace tcurv {

namespace {

// %.17g: shortest fixed precision that round-trips IEEE doubles.
std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& what) { throw ConfigError("mesh format: " + what); }

std::string expect_word(std::istream& is, const char* what) {
  std::string w;
  if (!(is >> w)) bad(std::string("missing ") + what);
  return w;
}

long expect_count(std::istream& is, const char* what) {
  long v;
  if (!(is >> v) || v < 0) bad(std::string("bad ") + what);
  return v;
}

void expect_key(std::istream& is, const char* key) {
  if (expect_word(is, key) != key) bad(std::string("expected '") + key + "'");
}

}  // namespace

void write_mesh(std::ostream& os, const TriSurface& s) {
  const int n = s.space->dimension();
  os << "tcurv-mesh 1\n";
  os << "space " << s.space->name() << "\n";
  os << "vertices " << s.vertices() << "\n";
  os << "triangles " << s.triangles() << "\n";
  os << "genus " << s.genus << "\n";
  for (int i = 0; i < s.vertices(); ++i) {
    for (int k = 0; k < n; ++k) os << exact(s.x[i](k)) << ' ';
    for (int k = 0; k < n; ++k) os << exact(s.nu[i](k)) << (k + 1 == n ? "" : " ");
    os << '\n';
  }
  for (const auto& t : s.tri) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

TriSurface read_mesh(std::istream& is) {
  expect_key(is, "tcurv-mesh");
  if (expect_count(is, "format version") != 1) bad("unsupported version");
  expect_key(is, "space");
  TriSurface s;
  s.space = make_space(expect_word(is, "space tag"));
  expect_key(is, "vertices");
  long nv = expect_count(is, "vertex count");
  expect_key(is, "triangles");
  long nf = expect_count(is, "triangle count");
  expect_key(is, "genus");
  s.genus = static_cast<int>(expect_count(is, "genus"));

  const int n = s.space->dimension();
  s.x.resize(nv, Eigen::VectorXd(n));
  s.nu.resize(nv, Eigen::VectorXd(n));
  for (long i = 0; i < nv; ++i)
    for (int k = 0; k < 2 * n; ++k) {
      double v;
      if (!(is >> v)) bad("truncated vertex data");
      (k < n ? s.x[i](k) : s.nu[i](k - n)) = v;
    }
  s.tri.resize(nf);
  for (long f = 0; f < nf; ++f)
    for (int e = 0; e < 3; ++e) {
      long ix;
      if (!(is >> ix)) bad("truncated triangle data");
      if (ix < 0 || ix >= nv) bad("vertex index out of range");
      s.tri[f][e] = static_cast<int>(ix);
    }
  return s;
}

void write_mesh_file(const std::string& path, const TriSurface& s) {
  std::ostringstream os;
  write_mesh(os, s);
  write_text_file(path, os.str());
}

TriSurface read_mesh_file(const std::string& path) {
  std::istringstream is(read_text_file(path));
  return read_mesh(is);
}

TriSurface surface_from_grid(const GridPatch& p) {
  if (p.rows < 2 || p.cols < 2) throw DegenerateInput("grid patch too small to triangulate");
  TriSurface s;
  s.space = p.space;
  s.x = p.x;
  s.nu = p.nu;
  for (int i = 0; i + 1 < p.rows; ++i)
    for (int j = 0; j + 1 < p.cols; ++j) {
      int a = p.idx(i, j), b = p.idx(i, j + 1), c = p.idx(i + 1, j), d = p.idx(i + 1, j + 1);
      s.tri.push_back({a, b, d});
      s.tri.push_back({a, d, c});
    }
  return s;
}

void write_turning_curve(std::ostream& os, const TurningCurve& c) {
  os << "tcurv-turning 1\n";
  os << "speed " << exact(c.speed) << "\n";
  os << "knots " << c.knots.size() << "\n";
  os << "base " << exact(c.verts.front()(0)) << ' ' << exact(c.verts.front()(1)) << "\n";
  for (int j = 0; j < c.edges(); ++j)
    os << exact(c.knots[j]) << ' ' << exact(c.theta[j]) << "\n";
  os << exact(c.knots.back()) << "\n";
}

TurningCurve read_turning_curve(std::istream& is) {
  expect_key(is, "tcurv-turning");
  if (expect_count(is, "format version") != 1) bad("unsupported version");
  expect_key(is, "speed");
  TurningCurve c;
  if (!(is >> c.speed)) bad("bad speed");
  expect_key(is, "knots");
  long m = expect_count(is, "knot count");
  if (m < 2) bad("need at least two knots");
  expect_key(is, "base");
  Eigen::Vector2d base;
  if (!(is >> base(0) >> base(1))) bad("bad base vertex");

  c.knots.resize(m);
  c.theta.resize(m - 1);
  for (long j = 0; j + 1 < m; ++j)
    if (!(is >> c.knots[j] >> c.theta[j])) bad("truncated knot table");
  if (!(is >> c.knots[m - 1])) bad("missing closing knot");

  c.verts.resize(m);
  c.verts[0] = base;
  for (long j = 0; j + 1 < m; ++j) {
    double dt = c.knots[j + 1] - c.knots[j];
    c.verts[j + 1] =
        c.verts[j] + c.speed * dt * Eigen::Vector2d(std::cos(c.theta[j]), std::sin(c.theta[j]));
  }
  return c;
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw Error("csv row width " + std::to_string(row.size()) + " != header width " +
                std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

void CsvTable::write(std::ostream& os) const { os << to_string(); }

void write_plot(std::ostream& os, const std::vector<std::array<double, 2>>& xy) {
  for (const auto& p : xy) os << format_g(p[0]) << ' ' << format_g(p[1]) << '\n';
}

void write_text_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace tcurv
