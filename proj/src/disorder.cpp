#include "lyap/disorder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "lyap/errors.hpp"

namespace lyap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normalPdf(double x, double mu, double sigma) {
  const double t = (x - mu) / sigma;
  return std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}
double normalCdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}
double normalTail(double x, double mu, double sigma) {
  return 0.5 * std::erfc((x - mu) / (sigma * std::numbers::sqrt2));
}

// 5-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 5> kGlNodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                         0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGlWeights{0.2369268850561891, 0.4786286704993665,
                                           0.5688888888888889, 0.4786286704993665,
                                           0.2369268850561891};

}  // namespace

std::string familyName(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::Laplace: return "laplace";
    case Family::Mixture: return "mixture";
    case Family::Table: return "table";
    case Family::Constant: return "constant";
  }
  return "unknown";
}

DisorderModel DisorderModel::gaussian(double mu, double sigma) {
  if (!std::isfinite(mu)) throw DomainError("gaussian: mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("degenerate sigma");
  DisorderModel m;
  m.family_ = Family::Gaussian;
  m.params_ = {mu, sigma};
  return m;
}

DisorderModel DisorderModel::laplace(double mu, double scale) {
  if (!std::isfinite(mu)) throw DomainError("laplace: mu must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("degenerate scale");
  DisorderModel m;
  m.family_ = Family::Laplace;
  m.params_ = {mu, scale};
  return m;
}

DisorderModel DisorderModel::mixture(double p, double a, double b, double mu2, double sigma2) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mixture: p must lie in [0, 1]");
  if (!(std::abs(b) > 0.0) || !std::isfinite(b)) throw DomainError("degenerate sigma");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("degenerate sigma");
  if (!std::isfinite(a) || !std::isfinite(mu2)) throw DomainError("mixture: locations must be finite");
  DisorderModel m;
  m.family_ = Family::Mixture;
  m.params_ = {p, a, b, mu2, sigma2};
  return m;
}

DisorderModel DisorderModel::figure2() { return mixture(2.0 / 3.0, -0.5, 0.3, 1.0, 1.0); }

DisorderModel DisorderModel::table(std::vector<double> x, std::vector<double> pdf) {
  if (x.size() != pdf.size()) throw DomainError("table: x and pdf lengths differ");
  if (x.size() < 2) throw DomainError("table: need at least two nodes");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(pdf[i])) throw DomainError("table: non-finite entry");
    if (pdf[i] < 0.0) throw DomainError("table: negative pdf value");
    if (i > 0 && !(x[i] > x[i - 1])) throw DomainError("table: x must be strictly increasing");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) mass += 0.5 * (pdf[i] + pdf[i + 1]) * (x[i + 1] - x[i]);
  if (!(mass > 0.0)) throw DomainError("table: density has zero mass");
  for (auto& p : pdf) p /= mass;

  DisorderModel m;
  m.family_ = Family::Table;
  m.tabX_ = std::move(x);
  m.tabPdf_ = std::move(pdf);
  m.tabCdf_.assign(m.tabX_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < m.tabX_.size(); ++i) {
    m.tabCdf_[i + 1] =
        m.tabCdf_[i] + 0.5 * (m.tabPdf_[i] + m.tabPdf_[i + 1]) * (m.tabX_[i + 1] - m.tabX_[i]);
  }
  m.tabCdf_.back() = 1.0;
  return m;
}

DisorderModel DisorderModel::constant(double z0) {
  if (!std::isfinite(z0)) throw DomainError("constant: z0 must be finite");
  DisorderModel m;
  m.family_ = Family::Constant;
  m.params_ = {z0};
  return m;
}

DisorderModel DisorderModel::shifted(double shift) const {
  if (!std::isfinite(shift)) throw DomainError("shift must be finite");
  DisorderModel m = *this;
  m.shift_ += shift;
  return m;
}

DisorderModel DisorderModel::centered() const {
  DisorderModel m = *this;
  m.shift_ = -rawMean();
  return m;
}

DisorderModel DisorderModel::mirror() const {
  DisorderModel m = *this;
  m.shift_ = -shift_;
  switch (family_) {
    case Family::Gaussian:
    case Family::Laplace:
      m.params_[0] = -params_[0];
      break;
    case Family::Mixture:
      m.params_[1] = -params_[1];
      m.params_[3] = -params_[3];
      break;
    case Family::Constant:
      m.params_[0] = -params_[0];
      break;
    case Family::Table: {
      const std::size_t n = tabX_.size();
      for (std::size_t i = 0; i < n; ++i) {
        m.tabX_[i] = -tabX_[n - 1 - i];
        m.tabPdf_[i] = tabPdf_[n - 1 - i];
      }
      for (std::size_t i = 0; i < n; ++i) m.tabCdf_[i] = 1.0 - tabCdf_[n - 1 - i];
      m.tabCdf_.front() = 0.0;
      m.tabCdf_.back() = 1.0;
      break;
    }
  }
  return m;
}

double DisorderModel::tailRateDelta() const {
  if (family_ == Family::Laplace) return 1.0 / params_[1];
  return kInf;
}

double DisorderModel::pdf(double x) const { return rawPdf(x - shift_); }
double DisorderModel::cdf(double x) const { return rawCdf(x - shift_); }
double DisorderModel::tail(double x) const { return rawTail(x - shift_); }
double DisorderModel::mean() const { return rawMean() + shift_; }

double DisorderModel::variance() const {
  switch (family_) {
    case Family::Gaussian: return params_[1] * params_[1];
    case Family::Laplace: return 2.0 * params_[1] * params_[1];
    case Family::Mixture: {
      const double p = params_[0], a = params_[1], b = params_[2], mu2 = params_[3], s2 = params_[4];
      const double m = p * a + (1.0 - p) * mu2;
      return p * (a * a + b * b) + (1.0 - p) * (mu2 * mu2 + s2 * s2) - m * m;
    }
    case Family::Table: {
      const double m = rawMean();
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < tabX_.size(); ++i) {
        const double x0 = tabX_[i], dx = tabX_[i + 1] - x0;
        const double s = (tabPdf_[i + 1] - tabPdf_[i]) / dx;
        for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
          const double t = 0.5 * dx * (kGlNodes[q] + 1.0);
          const double d = x0 + t - m;
          acc += 0.5 * dx * kGlWeights[q] * d * d * (tabPdf_[i] + s * t);
        }
      }
      return acc;
    }
    case Family::Constant: return 0.0;
  }
  return 0.0;
}

double DisorderModel::stddev() const { return std::sqrt(variance()); }

double DisorderModel::expMoment(double u) const {
  if (!std::isfinite(u)) throw DomainError("moment diverges");
  if (std::abs(u) >= tailRateDelta()) throw DomainError("moment diverges");
  return std::exp(u * shift_) * rawExpMoment(u);
}

double DisorderModel::draw(RngStream& rng) const {
  double z = 0.0;
  switch (family_) {
    case Family::Gaussian:
      z = params_[0] + params_[1] * rng.normal();
      break;
    case Family::Laplace: {
      const double u = rng.uniform() - 0.5;
      z = params_[0] - params_[1] * std::copysign(std::log1p(-2.0 * std::abs(u)), u);
      break;
    }
    case Family::Mixture: {
      const bool first = rng.bernoulli(params_[0]);
      const double eta = rng.normal();
      z = first ? params_[1] + params_[2] * eta : params_[3] + params_[4] * eta;
      break;
    }
    case Family::Table: {
      const double u = rng.uniform();
      const auto it = std::upper_bound(tabCdf_.begin(), tabCdf_.end(), u);
      std::size_t i = static_cast<std::size_t>(std::distance(tabCdf_.begin(), it));
      i = std::clamp<std::size_t>(i, 1, tabX_.size() - 1) - 1;
      const double dx = tabX_[i + 1] - tabX_[i];
      const double p0 = tabPdf_[i];
      const double s = (tabPdf_[i + 1] - p0) / dx;
      const double r = u - tabCdf_[i];
      const double disc = std::max(0.0, p0 * p0 + 2.0 * s * r);
      const double denom = p0 + std::sqrt(disc);
      const double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
      z = tabX_[i] + std::clamp(t, 0.0, dx);
      break;
    }
    case Family::Constant:
      z = params_[0];
      break;
  }
  return z + shift_;
}

std::vector<double> DisorderModel::sample(RngStream& rng, std::size_t n) const {
  std::vector<double> out(n);
  for (auto& v : out) v = draw(rng);
  return out;
}

double DisorderModel::rawPdf(double x) const {
  switch (family_) {
    case Family::Gaussian: return normalPdf(x, params_[0], params_[1]);
    case Family::Laplace: return std::exp(-std::abs(x - params_[0]) / params_[1]) / (2.0 * params_[1]);
    case Family::Mixture:
      return params_[0] * normalPdf(x, params_[1], std::abs(params_[2])) +
             (1.0 - params_[0]) * normalPdf(x, params_[3], params_[4]);
    case Family::Table: {
      if (x < tabX_.front() || x > tabX_.back()) return 0.0;
      const auto it = std::upper_bound(tabX_.begin(), tabX_.end(), x);
      std::size_t i = static_cast<std::size_t>(std::distance(tabX_.begin(), it));
      i = std::clamp<std::size_t>(i, 1, tabX_.size() - 1) - 1;
      const double w = (x - tabX_[i]) / (tabX_[i + 1] - tabX_[i]);
      return (1.0 - w) * tabPdf_[i] + w * tabPdf_[i + 1];
    }
    case Family::Constant: throw DomainError("model has no density");
  }
  return 0.0;
}

double DisorderModel::rawCdf(double x) const {
  switch (family_) {
    case Family::Gaussian: return normalCdf(x, params_[0], params_[1]);
    case Family::Laplace: {
      const double t = (x - params_[0]) / params_[1];
      return t < 0.0 ? 0.5 * std::exp(t) : 1.0 - 0.5 * std::exp(-t);
    }
    case Family::Mixture:
      return params_[0] * normalCdf(x, params_[1], std::abs(params_[2])) +
             (1.0 - params_[0]) * normalCdf(x, params_[3], params_[4]);
    case Family::Table: {
      if (x <= tabX_.front()) return 0.0;
      if (x >= tabX_.back()) return 1.0;
      const auto it = std::upper_bound(tabX_.begin(), tabX_.end(), x);
      const std::size_t i = static_cast<std::size_t>(std::distance(tabX_.begin(), it)) - 1;
      const double dx = tabX_[i + 1] - tabX_[i];
      const double t = x - tabX_[i];
      const double s = (tabPdf_[i + 1] - tabPdf_[i]) / dx;
      return tabCdf_[i] + tabPdf_[i] * t + 0.5 * s * t * t;
    }
    case Family::Constant: return x >= params_[0] ? 1.0 : 0.0;
  }
  return 0.0;
}

double DisorderModel::rawTail(double x) const {
  switch (family_) {
    case Family::Gaussian: return normalTail(x, params_[0], params_[1]);
    case Family::Laplace: {
      const double t = (x - params_[0]) / params_[1];
      return t < 0.0 ? 1.0 - 0.5 * std::exp(t) : 0.5 * std::exp(-t);
    }
    case Family::Mixture:
      return params_[0] * normalTail(x, params_[1], std::abs(params_[2])) +
             (1.0 - params_[0]) * normalTail(x, params_[3], params_[4]);
    case Family::Table:
    case Family::Constant:
      return 1.0 - rawCdf(x);
  }
  return 0.0;
}

double DisorderModel::rawMean() const {
  switch (family_) {
    case Family::Gaussian:
    case Family::Laplace:
      return params_[0];
    case Family::Mixture: return params_[0] * params_[1] + (1.0 - params_[0]) * params_[3];
    case Family::Table: {
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < tabX_.size(); ++i) {
        const double x0 = tabX_[i], dx = tabX_[i + 1] - x0;
        const double p0 = tabPdf_[i], s = (tabPdf_[i + 1] - p0) / dx;
        acc += x0 * (p0 * dx + 0.5 * s * dx * dx) + 0.5 * p0 * dx * dx + s * dx * dx * dx / 3.0;
      }
      return acc;
    }
    case Family::Constant: return params_[0];
  }
  return 0.0;
}

double DisorderModel::rawExpMoment(double u) const {
  switch (family_) {
    case Family::Gaussian:
      return std::exp(u * params_[0] + 0.5 * u * u * params_[1] * params_[1]);
    case Family::Laplace: {
      const double bu = params_[1] * u;
      return std::exp(u * params_[0]) / (1.0 - bu * bu);
    }
    case Family::Mixture: {
      const double p = params_[0], a = params_[1], b = params_[2], mu2 = params_[3], s2 = params_[4];
      return p * std::exp(u * a + 0.5 * u * u * b * b) +
             (1.0 - p) * std::exp(u * mu2 + 0.5 * u * u * s2 * s2);
    }
    case Family::Table: {
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < tabX_.size(); ++i) {
        const double x0 = tabX_[i], dx = tabX_[i + 1] - x0;
        const double s = (tabPdf_[i + 1] - tabPdf_[i]) / dx;
        for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
          const double t = 0.5 * dx * (kGlNodes[q] + 1.0);
          acc += 0.5 * dx * kGlWeights[q] * (tabPdf_[i] + s * t) * std::exp(u * (x0 + t));
        }
      }
      return acc;
    }
    case Family::Constant: return std::exp(u * params_[0]);
  }
  return 1.0;
}

std::optional<double> solveAlpha(const DisorderModel& model) {
  const double m = model.mean();
  if (std::abs(m) <= 1e-12) return std::nullopt;

  // E[e^{uz}] - 1 is convex, zero at u = 0 with slope E[z]; the nonzero root
  // lies on the side opposite to the sign of the mean.
  const double dir = m < 0.0 ? 1.0 : -1.0;
  const double band = model.tailRateDelta();
  auto f = [&](double u) { return model.expMoment(dir * u) - 1.0; };

  double lo = 0.0;
  double hi = 1e-3;
  bool bracketed = false;
  for (int it = 0; it < 4000; ++it) {
    if (hi >= band) break;
    const double v = f(hi);
    if (v > 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    hi = std::isfinite(band) ? std::min(2.0 * hi, 0.5 * (hi + band)) : 2.0 * hi;
    if (!std::isfinite(hi) || hi > 1e6) break;
  }
  if (!bracketed) throw NumericalError("no nonzero root in moment band");

  // Bisect to full double resolution: near the band edge the moment is steep,
  // so a relative width of 1e-12 can still leave a residual above 1e-10.
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  // the endpoint with the smaller residual
  const double root = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
  return dir * root;
}

}  // namespace lyap
