#include "graphsurf/height_field.hpp"

#include <cmath>
#include <sstream>

#include "graphsurf/errors.hpp"

namespace graphsurf {

namespace {

// Orthonormalization factor for the real spherical harmonic basis built on
// std::assoc_legendre (which carries no Condon-Shortley phase).
double sph_norm(int l, int m) {
  const double ratio = std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0));
  double f = std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI) * ratio);
  if (m > 0) f *= std::sqrt(2.0);
  return f;
}

} // namespace

SpectralBasis::SpectralBasis(const BaseManifold& base, int band_limit) {
  if (band_limit < 0) throw Error(ErrorKind::InvalidField, "band limit must be >= 0");
  kind_ = base.kind;
  band_ = band_limit;
  if (kind_ == BaseKind::FlatTorus) {
    const int n = base.dim;
    // enumerate canonical representatives: k = 0, then k with first nonzero > 0
    std::vector<int> k(n, -band_limit);
    waves_.push_back(std::vector<int>(n, 0));
    if (band_limit > 0) {
      while (true) {
        int first_nonzero = 0;
        for (int a = 0; a < n; ++a) {
          if (k[a] != 0) {
            first_nonzero = k[a];
            break;
          }
        }
        if (first_nonzero > 0) waves_.push_back(k);
        int a = n - 1;
        for (; a >= 0; --a) {
          if (k[a] < band_limit) {
            ++k[a];
            break;
          }
          k[a] = -band_limit;
        }
        if (a < 0) break;
      }
    }
    for (std::size_t w = 0; w < waves_.size(); ++w) {
      double k2 = 0.0;
      bool is_const = true;
      for (int a = 0; a < n; ++a) {
        k2 += static_cast<double>(waves_[w][a]) * waves_[w][a];
        if (waves_[w][a] != 0) is_const = false;
      }
      element_wave_.push_back(static_cast<int>(w));
      element_trig_.push_back(0);
      decay_.push_back(1.0 / (1.0 + k2));
      if (!is_const) {
        element_wave_.push_back(static_cast<int>(w));
        element_trig_.push_back(1);
        decay_.push_back(1.0 / (1.0 + k2));
      }
    }
  } else {
    for (int l = 0; l <= band_limit; ++l) {
      for (int m = 0; m <= l; ++m) {
        sph_l_.push_back(l);
        sph_m_.push_back(m);
        sph_trig_.push_back(0);
        decay_.push_back(1.0 / (1.0 + static_cast<double>(l) * l));
        if (m > 0) {
          sph_l_.push_back(l);
          sph_m_.push_back(m);
          sph_trig_.push_back(1);
          decay_.push_back(1.0 / (1.0 + static_cast<double>(l) * l));
        }
      }
    }
  }
}

int SpectralBasis::torus_element(const std::vector<int>& k, int trig) const {
  for (std::size_t e = 0; e < element_wave_.size(); ++e)
    if (waves_[element_wave_[e]] == k && element_trig_[e] == trig) return static_cast<int>(e);
  return -1;
}

std::string SpectralBasis::describe(int e) const {
  std::ostringstream os;
  if (kind_ == BaseKind::FlatTorus) {
    os << (element_trig_[e] == 0 ? "cos" : "sin") << "<k,x>, k=(";
    const std::vector<int>& k = waves_[element_wave_[e]];
    for (std::size_t a = 0; a < k.size(); ++a) os << (a ? "," : "") << k[a];
    os << ")";
  } else {
    os << "Y(l=" << sph_l_[e] << ",m=" << sph_m_[e] << "," << (sph_trig_[e] == 0 ? "cos" : "sin")
       << ")";
  }
  return os.str();
}

std::vector<double> SpectralBasis::synthesize(const BaseManifold& base,
                                              std::span<const double> coeffs) const {
  if (static_cast<int>(coeffs.size()) != size())
    throw Error(ErrorKind::InvalidField, "coefficient count does not match basis size");
  const std::size_t np = base.npoints();
  std::vector<double> out(np, 0.0);

  if (kind_ == BaseKind::FlatTorus) {
    const int n = base.dim;
    // per-axis angle tables cos/sin(k * 2pi/P * x_j) for k = 0..band
    std::vector<std::vector<double>> ct(n), st(n);
    for (int a = 0; a < n; ++a) {
      const int na = base.grid.shape[a];
      ct[a].resize(static_cast<std::size_t>(band_ + 1) * na);
      st[a].resize(static_cast<std::size_t>(band_ + 1) * na);
      for (int k = 0; k <= band_; ++k) {
        const double kappa = 2.0 * M_PI * k / base.periods[a];
        for (int j = 0; j < na; ++j) {
          ct[a][static_cast<std::size_t>(k) * na + j] = std::cos(kappa * base.grid.coords[a][j]);
          st[a][static_cast<std::size_t>(k) * na + j] = std::sin(kappa * base.grid.coords[a][j]);
        }
      }
    }
    std::vector<int> idx(n);
    for (std::size_t w = 0; w < waves_.size(); ++w) {
      // gather the cos/sin coefficients of this wave
      double cc = 0.0, cs = 0.0;
      bool used = false;
      for (std::size_t e = 0; e < element_wave_.size(); ++e) {
        if (element_wave_[e] != static_cast<int>(w)) continue;
        if (coeffs[e] != 0.0) used = true;
        if (element_trig_[e] == 0)
          cc = coeffs[e];
        else
          cs = coeffs[e];
      }
      if (!used) continue;
      const std::vector<int>& k = waves_[w];
      for (std::size_t p = 0; p < np; ++p) {
        base.grid.unravel(p, idx.data());
        double c = 1.0, s = 0.0;
        for (int a = 0; a < n; ++a) {
          const int ka = std::abs(k[a]);
          const int na = base.grid.shape[a];
          double ca = ct[a][static_cast<std::size_t>(ka) * na + idx[a]];
          double sa = st[a][static_cast<std::size_t>(ka) * na + idx[a]];
          if (k[a] < 0) sa = -sa;
          const double cn = c * ca - s * sa;
          s = c * sa + s * ca;
          c = cn;
        }
        out[p] += cc * c + cs * s;
      }
    }
  } else {
    const int nt = base.grid.shape[0], npph = base.grid.shape[1];
    for (int e = 0; e < size(); ++e) {
      if (coeffs[e] == 0.0) continue;
      const int l = sph_l_[e], m = sph_m_[e];
      const double norm = sph_norm(l, m);
      std::vector<double> theta_part(nt);
      for (int j = 0; j < nt; ++j)
        theta_part[j] = norm * std::assoc_legendre(l, m, std::cos(base.grid.coords[0][j]));
      for (int j = 0; j < nt; ++j) {
        for (int kk = 0; kk < npph; ++kk) {
          const double phi = base.grid.coords[1][kk];
          const double trig = sph_trig_[e] == 0 ? std::cos(m * phi) : std::sin(m * phi);
          out[static_cast<std::size_t>(j) * npph + kk] += coeffs[e] * theta_part[j] * trig;
        }
      }
    }
  }
  return out;
}

HeightField HeightField::zero(BasePtr base) {
  HeightField f;
  f.base_ = std::move(base);
  f.values_.assign(f.base_->npoints(), 0.0);
  f.coeffs_ = {0.0};
  f.band_ = 0;
  return f;
}

HeightField HeightField::from_coeffs(BasePtr base, std::vector<double> coeffs, int band_limit) {
  for (double c : coeffs)
    if (!std::isfinite(c)) throw Error(ErrorKind::InvalidField, "non-finite coefficient");
  SpectralBasis basis(*base, band_limit);
  HeightField f;
  f.values_ = basis.synthesize(*base, coeffs);
  f.base_ = std::move(base);
  f.coeffs_ = std::move(coeffs);
  f.band_ = band_limit;
  return f;
}

HeightField HeightField::torus_mode(BasePtr base, std::vector<int> k, double c_cos, double c_sin) {
  if (base->kind != BaseKind::FlatTorus)
    throw Error(ErrorKind::UnsupportedBase, "torus_mode requires a flat torus base");
  int band = 0;
  for (int a = 0; a < base->dim; ++a) band = std::max(band, std::abs(k[a]));
  bool flip = false;
  for (int a = 0; a < base->dim; ++a) {
    if (k[a] != 0) {
      flip = k[a] < 0; // canonicalize: negate k, sin coefficient flips sign
      break;
    }
  }
  if (flip) {
    for (int& ka : k) ka = -ka;
    c_sin = -c_sin;
  }
  SpectralBasis basis(*base, band);
  std::vector<double> coeffs(basis.size(), 0.0);
  const int ec = basis.torus_element(k, 0);
  const int es = basis.torus_element(k, 1);
  if (ec >= 0) coeffs[ec] = c_cos;
  if (es >= 0) coeffs[es] = c_sin;
  if (es < 0 && c_sin != 0.0)
    throw Error(ErrorKind::InvalidField, "sin coefficient on the constant mode");
  return from_coeffs(std::move(base), std::move(coeffs), band);
}

double HeightField::c1_norm() const {
  const BaseManifold& b = *base_;
  const int n = b.dim;
  const std::size_t np = b.npoints();
  std::vector<std::vector<double>> grad(n, std::vector<double>(np));
  for (int a = 0; a < n; ++a)
    b.axis_derivative(values_.data(), grad[a].data(), a, 1, +1, DerivScheme::Spectral);
  double sup_val = 0.0, sup_grad = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    sup_val = std::max(sup_val, std::fabs(values_[p]));
    double g2 = 0.0;
    const double* ginv = &b.g0_inv[p * n * n];
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) g2 += ginv[a * n + c] * grad[a][p] * grad[c][p];
    sup_grad = std::max(sup_grad, std::sqrt(std::max(0.0, g2)));
  }
  return sup_val + sup_grad;
}

double HeightField::c1_alpha_norm(double alpha) const {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw Error(ErrorKind::InvalidExponent, "alpha must lie in (0,1]");
  const BaseManifold& b = *base_;
  const int n = b.dim, m = b.ambient_dim();
  const std::size_t np = b.npoints();
  std::vector<std::vector<double>> grad(n, std::vector<double>(np));
  for (int a = 0; a < n; ++a)
    b.axis_derivative(values_.data(), grad[a].data(), a, 1, +1, DerivScheme::Spectral);
  double semi = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t q = p + 1; q < np; ++q) {
      const double dist = b.ambient_distance(&b.embed[p * m], &b.embed[q * m]);
      if (dist <= 0.0) continue;
      double diff = 0.0;
      for (int a = 0; a < n; ++a) diff += std::fabs(grad[a][p] - grad[a][q]);
      semi = std::max(semi, diff / std::pow(dist, alpha));
    }
  }
  return c1_norm() + semi;
}

HeightField HeightField::scaled(double factor) const {
  HeightField f;
  f.base_ = base_;
  f.band_ = band_;
  f.coeffs_ = coeffs_;
  f.values_ = values_;
  for (double& c : f.coeffs_) c *= factor;
  for (double& v : f.values_) v *= factor;
  return f;
}

} // namespace graphsurf
