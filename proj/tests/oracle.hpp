#pragma once

// Test-side reference: dense vectors and matrices, Kronecker products, explicit
// projectors and exhaustive outcome enumeration. Deliberately slow and written
// without reference to the simulator's kernels; addresses are built from bit
// strings with qubit 0 as the leftmost character.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;

struct Mat {
  std::size_t dim = 0;
  std::vector<C> a;  // row-major

  explicit Mat(std::size_t d = 0) : dim(d), a(d * d) {}
  C& operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  C operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

inline const double kS = 1.0 / std::sqrt(2.0);
inline const C kI{0.0, 1.0};

inline Mat identity(std::size_t d) {
  Mat m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

inline Mat mat2(C a, C b, C c, C d) {
  Mat m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

inline Mat X() { return mat2(0, 1, 1, 0); }
inline Mat Z() { return mat2(1, 0, 0, -1); }
inline Mat H() { return mat2(kS, kS, kS, -kS); }
inline Mat S() { return mat2(1, 0, 0, kI); }
inline Mat Sdg() { return mat2(1, 0, 0, -kI); }

inline Mat kron(const Mat& x, const Mat& y) {
  Mat m(x.dim * y.dim);
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t j = 0; j < x.dim; ++j)
      for (std::size_t k = 0; k < y.dim; ++k)
        for (std::size_t l = 0; l < y.dim; ++l) m(i * y.dim + k, j * y.dim + l) = x(i, j) * y(k, l);
  return m;
}

inline Vec kron(const Vec& x, const Vec& y) {
  Vec v;
  for (C p : x)
    for (C q : y) v.push_back(p * q);
  return v;
}

inline Mat mul(const Mat& x, const Mat& y) {
  Mat m(x.dim);
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t k = 0; k < x.dim; ++k)
      for (std::size_t j = 0; j < x.dim; ++j) m(i, j) += x(i, k) * y(k, j);
  return m;
}

inline Vec mul(const Mat& m, const Vec& v) {
  Vec out(m.dim);
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) out[i] += m(i, j) * v[j];
  return out;
}

inline Mat add(const Mat& x, const Mat& y) {
  Mat m(x.dim);
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = x.a[i] + y.a[i];
  return m;
}

inline Mat outer(const Vec& k, const Vec& b) {
  Mat m(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = k[i] * std::conj(b[j]);
  return m;
}

inline C inner(const Vec& a, const Vec& b) {
  C s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm2(const Vec& v) { return std::real(inner(v, v)); }

/// `g` acting on qubit q of n.
inline Mat embed(const Mat& g, int q, int n) {
  Mat m = identity(1);
  for (int i = 0; i < n; ++i) m = kron(m, i == q ? g : identity(2));
  return m;
}

inline Mat cnot(int control, int target, int n) {
  const Mat p0 = embed(mat2(1, 0, 0, 0), control, n);
  const Mat p1 = mul(embed(mat2(0, 0, 0, 1), control, n), embed(X(), target, n));
  return add(p0, p1);
}

inline Vec ket(const std::string& bits) {
  Vec v{1.0};
  for (char c : bits) v = kron(v, c == '0' ? Vec{1.0, 0.0} : Vec{0.0, 1.0});
  return v;
}

/// Eigenvector for bit b (0 = +1 eigenvalue) of basis 'Z', 'X' or 'Y'.
inline Vec eigen(char basis, int b) {
  switch (basis) {
    case 'Z':
      return b == 0 ? Vec{1.0, 0.0} : Vec{0.0, 1.0};
    case 'X':
      return b == 0 ? Vec{kS, kS} : Vec{kS, -kS};
    case 'Y':
      return b == 0 ? Vec{kS, kS * kI} : Vec{kS, -kS * kI};
    default:
      throw std::invalid_argument("basis");
  }
}

inline std::string flip_bits(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = c == '0' ? '1' : '0';
  return out;
}

/// (|0 c> + s|1 c'>)/sqrt2 where c' complements c.
inline Vec ghz(const std::string& corr, int sign) {
  const Vec a = ket("0" + corr);
  const Vec b = ket("1" + flip_bits(corr));
  Vec v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = kS * (a[i] + static_cast<double>(sign) * b[i]);
  return v;
}

/// 0 phi+, 1 phi-, 2 psi+, 3 psi-.
inline Vec bell(int which) {
  const double s = (which % 2 == 0) ? 1.0 : -1.0;
  if (which < 2) return {kS, 0.0, 0.0, s * kS};
  return {0.0, kS, s * kS, 0.0};
}

inline std::string to_bits(std::size_t v, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(n - 1 - i)] = ((v >> i) & 1u) ? '1' : '0';
  return s;
}

inline std::size_t from_bits(const std::string& s) { return std::stoull(s, nullptr, 2); }

/// Probability of every outcome string when qubit i is measured in bases[i].
inline std::map<std::string, double> outcome_distribution(const Vec& psi, const std::string& bases) {
  const int n = static_cast<int>(bases.size());
  std::map<std::string, double> out;
  for (std::size_t r = 0; r < (std::size_t{1} << n); ++r) {
    const std::string bits = to_bits(r, n);
    Vec bra{1.0};
    for (int i = 0; i < n; ++i) bra = kron(bra, eigen(bases[static_cast<std::size_t>(i)], bits[static_cast<std::size_t>(i)] - '0'));
    out[bits] = std::norm(inner(bra, psi));
  }
  return out;
}

inline int parity(const std::string& bits) {
  int p = 0;
  for (char c : bits) p ^= c - '0';
  return p;
}

/// Joint parity if it is certain, else -1.
inline int certain_parity(const Vec& psi, const std::string& bases) {
  double p[2] = {0.0, 0.0};
  for (const auto& [bits, prob] : outcome_distribution(psi, bases)) p[parity(bits)] += prob;
  if (p[0] > 1.0 - 1e-9) return 0;
  if (p[1] > 1.0 - 1e-9) return 1;
  return -1;
}

/// Contracts qubits (q1, q2) of an n-qubit state with <pair|; unnormalized.
inline Vec contract_pair(const Vec& psi, int n, int q1, int q2, const Vec& pair) {
  Vec out(std::size_t{1} << (n - 2));
  for (std::size_t r = 0; r < out.size(); ++r) {
    const std::string rest = to_bits(r, n - 2);
    for (int ab = 0; ab < 4; ++ab) {
      std::string full;
      std::size_t k = 0;
      for (int i = 0; i < n; ++i) {
        if (i == q1) full += (ab & 2) ? '1' : '0';
        else if (i == q2) full += (ab & 1) ? '1' : '0';
        else full += rest[k++];
      }
      out[r] += std::conj(pair[static_cast<std::size_t>(ab)]) * psi[from_bits(full)];
    }
  }
  return out;
}

/// Reduced density matrix of one qubit.
inline Mat reduced_density(const Vec& psi, int n, int q) {
  Mat rho(2);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    for (std::size_t j = 0; j < psi.size(); ++j) {
      std::string bi = to_bits(i, n);
      std::string bj = to_bits(j, n);
      const int a = bi[static_cast<std::size_t>(q)] - '0';
      const int b = bj[static_cast<std::size_t>(q)] - '0';
      bi.erase(static_cast<std::size_t>(q), 1);
      bj.erase(static_cast<std::size_t>(q), 1);
      if (bi == bj) rho(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) += psi[i] * std::conj(psi[j]);
    }
  }
  return rho;
}

inline Vec normalized(Vec v) {
  const double n = std::sqrt(norm2(v));
  for (C& c : v) c /= n;
  return v;
}

inline bool same_ray(const Vec& a, const Vec& b, double tol = 1e-9) {
  return std::abs(std::abs(inner(a, b)) - 1.0) < tol && std::abs(norm2(a) - 1.0) < tol &&
         std::abs(norm2(b) - 1.0) < tol;
}

}  // namespace oracle
