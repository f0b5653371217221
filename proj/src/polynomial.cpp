#include "qlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "qlab/error.hpp"

namespace qlab {

bool MonomialOrder::operator()(const Exponent& a, const Exponent& b) const {
  const int da = std::accumulate(a.begin(), a.end(), 0);
  const int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<Exponent> monomials_up_to(std::size_t dim, int d) {
  std::vector<Exponent> out;
  Exponent e(dim, 0);
  // Enumerate all exponent vectors with entries in [0, d] and keep those
  // within the total degree; dim and d are small.
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == dim) {
      out.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), MonomialOrder{});
  return out;
}

Polynomial Polynomial::constant(std::size_t dim, double c) {
  Polynomial p(dim);
  p.set(Exponent(dim, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t i) {
  Exponent e(dim, 0);
  e.at(i) = 1;
  return monomial(std::move(e), 1.0);
}

Polynomial Polynomial::monomial(Exponent e, double c) {
  Polynomial p(e.size());
  p.set(e, c);
  return p;
}

double Polynomial::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::set(const Exponent& e, double c) {
  if (e.size() != dim_) throw InvalidArgument("exponent has the wrong length");
  if (c == 0.0) {
    terms_.erase(e);
  } else {
    terms_[e] = c;
  }
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  }
  return d;
}

double Polynomial::operator()(std::span<const double> x) const {
  if (x.size() != dim_) throw InvalidArgument("point has the wrong dimension");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (int k = 0; k < e[i]; ++k) m *= x[i];
    }
    acc += m;
  }
  return acc;
}

double Polynomial::at(std::span<const std::int64_t> x) const {
  std::vector<double> xd(x.begin(), x.end());
  return (*this)(xd);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.dim_ != dim_) throw InvalidArgument("polynomial dimensions differ");
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.set(e, out.coefficient(e) + c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  return *this + o * -1.0;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.dim_ != dim_) throw InvalidArgument("polynomial dimensions differ");
  Polynomial out(dim_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponent e(dim_);
      for (std::size_t i = 0; i < dim_; ++i) e[i] = ea[i] + eb[i];
      out.set(e, out.coefficient(e) + ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) out.set(e, c * s);
  return out;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) > tol) out.set(e, c);
  }
  return out;
}

double Polynomial::max_coefficient_diff(const Polynomial& o) const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c - o.coefficient(e)));
  for (const auto& [e, c] : o.terms_) m = std::max(m, std::abs(c - coefficient(e)));
  return m;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  static const char* names[] = {"u", "v", "w"};
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool is_const = std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
    double shown = c;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      shown = std::abs(c);
    }
    first = false;
    if (is_const || shown != 1.0) {
      if (shown == -1.0 && !is_const) {
        os << "-";
      } else {
        os << shown;
        if (!is_const) os << "*";
      }
    }
    bool first_var = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first_var) os << "*";
      first_var = false;
      if (i < 3) {
        os << names[i];
      } else {
        os << "x" << i;
      }
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

Polynomial compose(const std::map<int, double>& coeffs, const Polynomial& arg) {
  Polynomial out(arg.dim());
  Polynomial power = Polynomial::constant(arg.dim(), 1.0);
  int k = 0;
  for (const auto& [deg, c] : coeffs) {
    if (deg < 0) throw InvalidArgument("negative power in polynomial");
    while (k < deg) {
      power = power * arg;
      ++k;
    }
    out = out + power * c;
  }
  return out;
}

}  // namespace qlab
