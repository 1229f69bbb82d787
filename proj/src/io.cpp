#include "fgc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fgc/error.hpp"

namespace fgc::io {
namespace {

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::FileNotFound, path.string());
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::filesystem::path& path) {
  const std::string f = trim(field);
  double value = 0.0;
  const auto* end = f.data() + f.size();
  auto [ptr, ec] = std::from_chars(f.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorCode::ParseError, "bad number '" + f + "' in " + path.string());
  return value;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  return fields;
}

bool is_skippable(const std::string& line) { return line.empty() || line[0] == '#'; }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::vector<double> read_measure_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<double> plain;
  std::vector<std::pair<std::size_t, double>> indexed;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (is_skippable(line)) continue;
    const auto fields = split(line);
    if (fields.size() == 1) {
      plain.push_back(parse_double(fields[0], path));
    } else if (fields.size() == 2) {
      const double idx = parse_double(fields[0], path);
      if (idx < 0 || idx != std::floor(idx))
        throw Error(ErrorCode::ParseError, "bad index in " + path.string());
      indexed.emplace_back(static_cast<std::size_t>(idx), parse_double(fields[1], path));
    } else {
      throw Error(ErrorCode::ParseError, "expected 1 or 2 fields per line in " + path.string());
    }
  }
  if (!plain.empty() && !indexed.empty())
    throw Error(ErrorCode::ParseError, "mixed measure formats in " + path.string());
  if (indexed.empty()) return plain;
  std::size_t n = 0;
  for (const auto& [i, w] : indexed) n = std::max(n, i + 1);
  std::vector<double> weights(n, 0.0);
  for (const auto& [i, w] : indexed) weights[i] = w;
  return weights;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (is_skippable(line)) continue;
    std::vector<double> row;
    for (const auto& f : split(line)) row.push_back(parse_double(f, path));
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::ParseError, "ragged matrix in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "empty matrix in " + path.string());
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_output(path);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out << ',';
      out << format_double(r[j]);
    }
    out << '\n';
  }
}

void write_plan_triplets(const std::filesystem::path& path, const Matrix& plan, double threshold) {
  auto out = open_output(path);
  out << "i,p,gamma\n";
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    auto r = plan.row(i);
    for (std::size_t p = 0; p < r.size(); ++p)
      if (r[p] > threshold) out << i << ',' << p << ',' << format_double(r[p]) << '\n';
  }
}

Matrix read_plan_csv(const std::filesystem::path& path, std::size_t rows, std::size_t cols) {
  std::string first;
  {
    auto in = open_input(path);
    std::getline(in, first);
  }
  if (trim(first) != "i,p,gamma") {
    Matrix m = read_matrix_csv(path);
    if (m.rows() != rows || m.cols() != cols)
      throw Error(ErrorCode::DimensionMismatch, "plan file shape differs from the expected one");
    return m;
  }
  auto in = open_input(path);
  std::string line;
  std::getline(in, line);
  Matrix m(rows, cols);
  while (std::getline(in, line)) {
    line = trim(line);
    if (is_skippable(line)) continue;
    const auto f = split(line);
    if (f.size() != 3) throw Error(ErrorCode::ParseError, "bad triplet in " + path.string());
    const auto i = static_cast<std::size_t>(parse_double(f[0], path));
    const auto p = static_cast<std::size_t>(parse_double(f[1], path));
    if (i >= rows || p >= cols) throw Error(ErrorCode::DimensionMismatch, "triplet out of range");
    m(i, p) = parse_double(f[2], path);
  }
  return m;
}

GrayscaleImage read_pgm(const std::filesystem::path& path) {
  auto in = open_input(path, std::ios::in | std::ios::binary);
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5")
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is not a P2/P5 PGM");

  auto next_int = [&]() -> long {
    while (true) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string comment;
        std::getline(in, comment);
        continue;
      }
      long v = -1;
      if (!(in >> v)) throw Error(ErrorCode::ParseError, "truncated PGM header in " + path.string());
      return v;
    }
  };
  const long width = next_int();
  const long height = next_int();
  const long maxval = next_int();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw Error(ErrorCode::ParseError, "bad PGM header in " + path.string());

  GrayscaleImage img;
  img.width = static_cast<std::size_t>(width);
  img.height = static_cast<std::size_t>(height);
  img.pixels.resize(img.width * img.height);
  const double scale = 1.0 / static_cast<double>(maxval);

  if (magic == "P2") {
    for (double& px : img.pixels) {
      long v = 0;
      if (!(in >> v)) throw Error(ErrorCode::ParseError, "truncated PGM data in " + path.string());
      px = std::clamp(static_cast<double>(v) * scale, 0.0, 1.0);
    }
  } else {
    in.get();  // single whitespace after maxval
    const bool wide = maxval > 255;
    for (double& px : img.pixels) {
      unsigned v = 0;
      unsigned char bytes[2] = {0, 0};
      if (!in.read(reinterpret_cast<char*>(bytes), wide ? 2 : 1))
        throw Error(ErrorCode::ParseError, "truncated PGM data in " + path.string());
      v = wide ? (static_cast<unsigned>(bytes[0]) << 8) | bytes[1] : bytes[0];
      px = std::clamp(static_cast<double>(v) * scale, 0.0, 1.0);
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayscaleImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  for (double px : image.pixels) {
    const auto v = static_cast<unsigned char>(std::lround(std::clamp(px, 0.0, 1.0) * 255.0));
    out.put(static_cast<char>(v));
  }
}

GrayscaleImage read_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".csv") {
    const Matrix m = read_matrix_csv(path);
    GrayscaleImage img{m.cols(), m.rows(), {}};
    img.pixels.reserve(m.size());
    for (double v : m.values()) img.pixels.push_back(std::clamp(v, 0.0, 1.0));
    return img;
  }
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
  throw Error(ErrorCode::UnsupportedFormat, "unsupported image type '" + ext + "'");
}

}  // namespace fgc::io
