#include "qlab/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qlab/error.hpp"

namespace qlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kGrid = 4096;
constexpr double kDensityFloor = -1e-9;
constexpr double kMassTol = 1e-9;
constexpr double kTailBound = 1e-12;
constexpr std::int64_t kUnlimited = std::int64_t{1} << 40;

double normalize_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void check_density(const DensityReport& d, const std::string& what) {
  if (d.min < kDensityFloor) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": density minimum " << d.min << " on the grid";
    throw ConstructionRejected(os.str());
  }
  if (std::abs(d.integral - 1.0) > kMassTol) {
    throw ConstructionRejected(what + ": density does not integrate to 1");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// EvenPolynomial

EvenPolynomial EvenPolynomial::monomial(int power, double c) {
  if (power < 2 || power % 2 != 0) {
    throw InvalidArgument("even polynomials use powers 2, 4, ...; got " +
                          std::to_string(power));
  }
  EvenPolynomial p;
  if (c != 0.0) p.coeffs[power] = c;
  return p;
}

double EvenPolynomial::operator()(double n) const {
  double acc = 0.0;
  for (const auto& [k, a] : coeffs) acc += a * std::pow(n, k);
  return acc;
}

double EvenPolynomial::leading() const {
  return coeffs.empty() ? 0.0 : coeffs.rbegin()->second;
}

Polynomial EvenPolynomial::compose_linear(const Polynomial& arg) const {
  return compose(coeffs, arg);
}

EvenPolynomial EvenPolynomial::operator+(const EvenPolynomial& o) const {
  EvenPolynomial out = *this;
  for (const auto& [k, a] : o.coeffs) {
    out.coeffs[k] += a;
    if (out.coeffs[k] == 0.0) out.coeffs.erase(k);
  }
  return out;
}

std::string EvenPolynomial::to_string() const {
  Polynomial p(1);
  for (const auto& [k, a] : coeffs) p.set({k}, a);
  std::string s = p.to_string();
  std::replace(s.begin(), s.end(), 'u', 'n');
  return s;
}

// ---------------------------------------------------------------------------
// CircleSpectrum

CircleSpectrum CircleSpectrum::gaussian(double shift, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be >= 0");
  CircleSpectrum s;
  s.shift = normalize_angle(shift);
  if (sigma > 0.0) s.phi = EvenPolynomial::monomial(2, sigma);
  return s;
}

CircleSpectrum CircleSpectrum::haar_measure() {
  CircleSpectrum s;
  s.haar = true;
  return s;
}

Complex CircleSpectrum::log_cf(std::int64_t n) const {
  if (haar) return n == 0 ? Complex{0.0, 0.0} : Complex{kNegInf, 0.0};
  const double dn = static_cast<double>(n);
  return {-phi(dn), dn * shift};
}

Complex CircleSpectrum::cf(std::int64_t n) const {
  const Complex l = log_cf(n);
  if (l.real() == kNegInf) return 0.0;
  return std::exp(l);
}

LogWindow CircleSpectrum::log_window(std::int64_t radius) const {
  return LogWindow::from_logs(WindowFunction::sample(
      radius, 1, [&](std::span<const std::int64_t> y) { return log_cf(y[0]); }));
}

// ---------------------------------------------------------------------------
// Sums and densities

SpectralSum spectral_sum(const EvenPolynomial& phi, double eps) {
  const double lead = phi.leading();
  if (!(lead > 0.0)) {
    throw InvalidArgument("phi must tend to +infinity (positive leading coefficient)");
  }
  // Beyond the Cauchy bound for the roots of phi' the sequence is monotone.
  const int d = phi.coeffs.rbegin()->first;
  double bound = 1.0;
  for (const auto& [k, a] : phi.coeffs) {
    if (k == d) continue;
    bound = std::max(bound, 1.0 + std::abs(k * a) / (d * lead));
  }
  SpectralSum out;
  double head = 1.0;  // n = 0
  std::int64_t last_big = 0;
  std::vector<double> terms;
  for (std::int64_t n = 1;; ++n) {
    if (n > 100000000) {
      throw ConstructionRejected("spectral sum does not converge fast enough");
    }
    const double t = std::exp(-phi(static_cast<double>(n)));
    terms.push_back(t);
    if (t >= eps) last_big = n;
    if (static_cast<double>(n) > bound && t < 1e-300) break;
  }
  out.truncation = last_big + 1;
  // Sum small terms first.
  double tail = 0.0;
  for (std::size_t i = terms.size(); i-- > 0;) {
    const auto n = static_cast<std::int64_t>(i) + 1;
    if (n >= out.truncation) tail += 2.0 * terms[i];
  }
  double body = 0.0;
  for (std::int64_t n = out.truncation - 1; n >= 1; --n) body += 2.0 * terms[n - 1];
  out.tail = tail;
  out.sum = head + body + tail;
  return out;
}

DensityReport density_grid(const CircleDistribution& g, std::size_t m) {
  const std::int64_t n_max = g.truncation();
  if (m < static_cast<std::size_t>(4 * n_max) || m == 0) {
    throw InvalidArgument("grid size must be at least 4N");
  }
  DensityReport out;
  out.rho.assign(m, 0.0);
  std::vector<Complex> c(static_cast<std::size_t>(n_max) + 1);
  for (std::int64_t n = 0; n <= n_max; ++n) c[n] = g.cf(n);
  const auto mm = static_cast<std::int64_t>(m);
  for (std::int64_t k = 0; k < mm; ++k) {
    double acc = c[0].real();
    for (std::int64_t n = 1; n <= n_max; ++n) {
      // Exact phase reduction keeps the grid values reproducible.
      const double t = kTwoPi * static_cast<double>((k * n) % mm) / static_cast<double>(mm);
      acc += 2.0 * (c[n] * Complex{std::cos(t), -std::sin(t)}).real();
    }
    out.rho[k] = acc;
  }
  const auto it = std::min_element(out.rho.begin(), out.rho.end());
  out.min = *it;
  out.argmin = static_cast<std::size_t>(it - out.rho.begin());
  double s = 0.0;
  for (double r : out.rho) s += r;
  out.integral = s / static_cast<double>(m);
  return out;
}

// ---------------------------------------------------------------------------
// CircleDistribution

CircleDistribution CircleDistribution::from_spectrum(const CircleSpectrum& s,
                                                     std::string provenance) {
  CircleDistribution d;
  d.spectrum_ = s;
  d.provenance_ = std::move(provenance);
  if (!s.haar) {
    if (s.phi.coeffs.empty()) {
      throw ConstructionRejected("degenerate spectral data has no density on T");
    }
    if (!(s.phi.leading() > 0.0)) {
      throw ConstructionRejected("phi must have a positive leading coefficient");
    }
    const auto sum = spectral_sum(s.phi);
    d.truncation_ = sum.truncation;
    d.tail_ = sum.tail;
    if (d.tail_ >= kTailBound) {
      throw ConstructionRejected("truncation tail is not below 1e-12");
    }
  }
  check_density(density_grid(d, std::max<std::size_t>(kGrid, 4 * d.truncation_)),
                d.provenance_);
  return d;
}

CircleDistribution CircleDistribution::from_coefficients(std::vector<Complex> coeffs,
                                                         std::string provenance) {
  if (coeffs.size() % 2 != 1) {
    throw InvalidDistribution("coefficient list must have odd length 2N+1");
  }
  const auto n_max = static_cast<std::int64_t>(coeffs.size() / 2);
  if (std::abs(coeffs[n_max] - 1.0) > 1e-12) throw InvalidDistribution("c_0 must be 1");
  for (std::int64_t n = 1; n <= n_max; ++n) {
    if (std::abs(coeffs[n_max + n] - std::conj(coeffs[n_max - n])) > 1e-12) {
      throw InvalidDistribution("coefficients are not Hermitian at n = " +
                                std::to_string(n));
    }
  }
  CircleDistribution d;
  d.coeffs_ = std::move(coeffs);
  d.truncation_ = n_max;
  d.provenance_ = std::move(provenance);
  check_density(density_grid(d, std::max<std::size_t>(kGrid, 4 * n_max)), d.provenance_);
  return d;
}

Complex CircleDistribution::cf(std::int64_t n) const {
  if (spectrum_) return spectrum_->cf(n);
  if (std::abs(n) > truncation_) return 0.0;
  return coeffs_[static_cast<std::size_t>(n + truncation_)];
}

Complex CircleDistribution::log_cf(std::int64_t n) const {
  if (spectrum_) return spectrum_->log_cf(n);
  const Complex z = cf(n);
  if (z == 0.0) return {kNegInf, 0.0};
  return std::log(z);
}

std::int64_t CircleDistribution::max_window_radius() const {
  return spectrum_ ? kUnlimited : truncation_ / 2;
}

LogWindow CircleDistribution::log_window(std::int64_t radius) const {
  if (radius > max_window_radius()) {
    throw WindowExhausted("radius " + std::to_string(radius) +
                          " exceeds the usable radius " +
                          std::to_string(max_window_radius()));
  }
  if (spectrum_) return spectrum_->log_window(radius);
  return LogWindow::from_values(WindowFunction::sample(
      radius, 1, [&](std::span<const std::int64_t> y) { return cf(y[0]); }));
}

// ---------------------------------------------------------------------------
// Constructions

SummableConstruction remark7_construct(const EvenPolynomial& phi) {
  SpectralSum sum;
  try {
    sum = spectral_sum(phi);
  } catch (const InvalidArgument& e) {
    throw ConstructionRejected(e.what());
  }
  if (!(sum.sum < 2.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "summability gate failed: sum of exp{-phi(n)} = " << sum.sum << " >= 2";
    throw ConstructionRejected(os.str());
  }
  CircleSpectrum s;
  s.phi = phi;
  auto dist = CircleDistribution::from_spectrum(s, "remark7 phi(n) = " + phi.to_string());
  auto density = density_grid(dist, kGrid);
  if (!(density.min > 0.0)) {
    throw NumericalInconsistency("gate passed but the grid density is not positive");
  }
  return {std::move(dist), sum.sum, std::move(density)};
}

Polynomial remark5_q(const EvenPolynomial& phi1, const EvenPolynomial& phi2) {
  const auto u = Polynomial::variable(2, 0);
  const auto v = Polynomial::variable(2, 1);
  const Polynomial q = phi1.compose_linear(u) + phi2.compose_linear(u) +
                       phi1.compose_linear(v) + phi2.compose_linear(v) -
                       phi1.compose_linear(u + v) - phi2.compose_linear(u - v);
  double scale = 0.0;
  for (const auto& [e, c] : q.terms()) scale = std::max(scale, std::abs(c));
  return q.pruned(1e-12 * scale);
}

WindowJoint sum_difference_joint(const CircleDistribution& g1,
                                 const CircleDistribution& g2, std::int64_t radius) {
  const std::int64_t usable = std::min(g1.max_window_radius(), g2.max_window_radius());
  if (radius > usable) {
    throw WindowExhausted("sum/difference window radius " + std::to_string(radius) +
                          " exceeds the usable radius " + std::to_string(usable));
  }
  if (radius < 0) throw InvalidArgument("radius must be >= 0");
  const bool linear = !g1.spectrum() || !g2.spectrum();
  const auto add_logs = [](Complex a, Complex b) -> Complex {
    if (a.real() == kNegInf || b.real() == kNegInf) return {kNegInf, 0.0};
    return a + b;
  };
  WindowJoint j;
  j.joint = LogWindow{WindowFunction::sample(radius, 2,
                                             [&](std::span<const std::int64_t> p) {
                                               return add_logs(g1.log_cf(p[0] + p[1]),
                                                               g2.log_cf(p[0] - p[1]));
                                             }),
                      linear};
  j.marginals.push_back(LogWindow{
      WindowFunction::sample(radius, 1,
                             [&](std::span<const std::int64_t> p) {
                               return add_logs(g1.log_cf(p[0]), g2.log_cf(p[0]));
                             }),
      linear});
  j.marginals.push_back(LogWindow{
      WindowFunction::sample(radius, 1,
                             [&](std::span<const std::int64_t> p) {
                               return add_logs(g1.log_cf(p[0]), g2.log_cf(-p[0]));
                             }),
      linear});
  return j;
}

// ---------------------------------------------------------------------------
// Gaussian test

GaussianFitT gaussian_check_T(const LogWindow& f, double tol) {
  const auto& box = f.logs.box;
  if (box.dim() != 1) throw InvalidArgument("gaussian_check_T expects a window of Z");
  for (const auto& l : f.logs.values) {
    if (l.real() == kNegInf || (f.from_linear && l.real() < std::log(1e-12))) {
      throw UndefinedLog("characteristic sequence vanishes on the window");
    }
  }
  const auto phi = WindowFunction::sample(box, [&](std::span<const std::int64_t> y) {
    return Complex{-f.log_at(y).real(), 0.0};
  });
  GaussianFitT out;
  const auto quad = quadratic_check(phi);
  out.quadratic_residual = quad.residual;
  out.quadratic_at_u = quad.u;
  out.quadratic_at_v = quad.v;
  const auto phase = unwrap_phase(f.logs, f.from_linear);
  const Point one{1};
  const double slope = box.contains(one) ? phase.at(one).imag() - phase.at(Point{0}).imag()
                                         : 0.0;
  for (std::size_t i = 0; i < phase.values.size(); ++i) {
    const double n = static_cast<double>(box.point(i)[0]);
    out.phase_residual =
        std::max(out.phase_residual, std::abs(phase.values[i].imag() - n * slope));
  }
  out.shift = normalize_angle(slope);
  out.sigma = box.contains(one) ? phi.at(one).real() : 0.0;
  out.gaussian = out.quadratic_residual < tol && out.phase_residual < tol &&
                 out.sigma >= -tol;
  return out;
}

GaussianFitT gaussian_check_T(const WindowFunction& f, double tol) {
  return gaussian_check_T(LogWindow::from_values(f), tol);
}

}  // namespace qlab
