#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>

namespace prequant {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 4;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Fixed-capacity coordinate tuple; every chart in this library has dim <= 4.
class Coords {
 public:
  Coords() = default;
  Coords(std::initializer_list<double> xs) {
    for (double x : xs) push_back(x);
  }
  static Coords zeros(int n) {
    Coords c;
    c.n_ = n;
    return c;
  }

  int size() const { return n_; }
  double operator[](int i) const { return a_[i]; }
  double& operator[](int i) { return a_[i]; }
  void push_back(double x) { a_[n_++] = x; }

  Coords operator+(const Coords& o) const {
    Coords r = *this;
    for (int i = 0; i < n_; ++i) r.a_[i] += o.a_[i];
    return r;
  }
  Coords operator-(const Coords& o) const {
    Coords r = *this;
    for (int i = 0; i < n_; ++i) r.a_[i] -= o.a_[i];
    return r;
  }
  Coords operator*(double s) const {
    Coords r = *this;
    for (int i = 0; i < n_; ++i) r.a_[i] *= s;
    return r;
  }
  /// this + s*o, the only compound op the integrators need
  Coords axpy(double s, const Coords& o) const {
    Coords r = *this;
    for (int i = 0; i < n_; ++i) r.a_[i] += s * o.a_[i];
    return r;
  }
  double norm() const {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += a_[i] * a_[i];
    return std::sqrt(s);
  }
  double max_abs_diff(const Coords& o) const {
    double m = 0;
    for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(a_[i] - o.a_[i]));
    return m;
  }
  std::string str() const {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < n_; ++i) os << (i ? ", " : "") << a_[i];
    os << ")";
    return os.str();
  }

 private:
  std::array<double, kMaxDim> a_{};
  int n_ = 0;
};

/// Per-coordinate complex partial derivatives of a scalar field.
struct Gradient {
  std::array<Complex, kMaxDim> d{};
  int n = 0;
  Complex operator[](int i) const { return d[i]; }
  Complex& operator[](int i) { return d[i]; }
};

/// Small dense real matrix (Jacobians, symplectic coefficient matrices).
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols) {}
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double at(int r, int c) const { return a_[r * kMaxDim + c]; }
  double& at(int r, int c) { return a_[r * kMaxDim + c]; }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
  }
  Mat mul(const Mat& o) const {
    Mat p(rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < o.cols_; ++c) {
        double s = 0;
        for (int k = 0; k < cols_; ++k) s += at(r, k) * o.at(k, c);
        p.at(r, c) = s;
      }
    return p;
  }
  Coords mul(const Coords& v) const {
    Coords r = Coords::zeros(rows_);
    for (int i = 0; i < rows_; ++i) {
      double s = 0;
      for (int k = 0; k < cols_; ++k) s += at(i, k) * v[k];
      r[i] = s;
    }
    return r;
  }
  double max_abs_diff(const Mat& o) const {
    double m = 0;
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) m = std::max(m, std::abs(at(r, c) - o.at(r, c)));
    return m;
  }

 private:
  std::array<double, kMaxDim * kMaxDim> a_{};
  int rows_ = 0, cols_ = 0;
};

/// Determinant for the sizes that occur here (n <= 4).
inline double det(const Mat& m) {
  const int n = m.rows();
  switch (n) {
    case 1:
      return m.at(0, 0);
    case 2:
      return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    case 3:
      return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
             m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
             m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
    case 4: {
      double s = 0;
      for (int c = 0; c < 4; ++c) {
        Mat sub(3, 3);
        for (int r = 1; r < 4; ++r) {
          int cc = 0;
          for (int k = 0; k < 4; ++k) {
            if (k == c) continue;
            sub.at(r - 1, cc++) = m.at(r, k);
          }
        }
        s += ((c % 2) ? -1.0 : 1.0) * m.at(0, c) * det(sub);
      }
      return s;
    }
    default:
      return 0.0;
  }
}

/// Deterministic uniform samples in [0,1): a splitmix64 stream, so results do
/// not depend on the standard library's distribution implementation.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : state_(seed) {}
  double next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::uint64_t state_;
};

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

}  // namespace prequant
