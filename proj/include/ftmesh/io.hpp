#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ftmesh/types.hpp"

namespace ftmesh {

// Complex entry text format: "a+bi" (e.g. "0.5-0.25i"). A bare real part is
// accepted on input; output always carries both parts.
inline std::string format_complex(const Complex& z) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

inline Complex parse_complex(const std::string& token) {
  if (token.empty()) throw std::runtime_error("parse_complex: empty token");
  std::string s = token;
  bool has_i = false;
  if (s.back() == 'i' || s.back() == 'I') {
    has_i = true;
    s.pop_back();
  }
  // split at the last sign that is not a leading sign or part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  try {
    if (!has_i) {
      if (split != std::string::npos)
        throw std::runtime_error("unexpected sign in real token");
      return Complex(std::stod(s), 0.0);
    }
    if (split == std::string::npos) return Complex(0.0, std::stod(s));  // pure "bi"
    const double re = std::stod(s.substr(0, split));
    const double im = std::stod(s.substr(split));
    return Complex(re, im);
  } catch (const std::exception&) {
    throw std::runtime_error("parse_complex: cannot parse '" + token + "'");
  }
}

// Matrix/vector text file: header line "rows cols", then one row per line,
// entries whitespace-separated in a+bi form.
inline void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << " ";
      os << format_complex(m(r, c));
    }
    os << "\n";
  }
}

inline void write_matrix(const std::string& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_matrix(os, m);
}

inline void write_vector(const std::string& path, const Vector& v) {
  Matrix m(v.size(), 1);
  m.col(0) = v;
  write_matrix(path, m);
}

inline Matrix read_matrix(std::istream& is, const std::string& origin = "<stream>") {
  Eigen::Index rows = 0, cols = 0;
  std::string header;
  if (!std::getline(is, header))
    throw std::runtime_error(origin + ": missing header line");
  {
    std::istringstream hs(header);
    if (!(hs >> rows >> cols) || rows < 1 || cols < 1)
      throw std::runtime_error(origin + ": bad header, expected 'rows cols'");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    std::string line;
    if (!std::getline(is, line))
      throw std::runtime_error(origin + ": unexpected end of file at row " +
                               std::to_string(r + 1));
    std::istringstream ls(line);
    std::string token;
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!(ls >> token))
        throw std::runtime_error(origin + ": row " + std::to_string(r + 1) +
                                 " has fewer than " + std::to_string(cols) +
                                 " entries");
      m(r, c) = parse_complex(token);
    }
  }
  return m;
}

inline Matrix read_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_matrix(is, path);
}

inline Vector read_vector(const std::string& path) {
  const Matrix m = read_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw std::runtime_error(path + ": expected a vector, got " +
                           std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()));
}

}  // namespace ftmesh
