#include "fraccald/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace fraccald::spectral {

namespace {

using Complex = std::complex<double>;

// In-place transform over every axis; lines along the fast axis first.
void transform(const Grid& grid, std::vector<Complex>& data, bool inverse) {
  Eigen::FFT<double> fft;
  const Index n = grid.points_per_dim();
  std::vector<Complex> line(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  auto run = [&](Index start, Index stride) {
    for (Index k = 0; k < n; ++k) line[static_cast<std::size_t>(k)] = data[static_cast<std::size_t>(start + k * stride)];
    if (inverse) {
      fft.inv(out, line);
    } else {
      fft.fwd(out, line);
    }
    for (Index k = 0; k < n; ++k) data[static_cast<std::size_t>(start + k * stride)] = out[static_cast<std::size_t>(k)];
  };
  if (grid.dim() == 1) {
    run(0, 1);
    return;
  }
  for (Index r = 0; r < n; ++r) run(r * n, 1);
  for (Index c = 0; c < n; ++c) run(c, n);
}

WaveVector wave_vector(const Grid& grid, Index bin) {
  const MultiIndex mi = grid.multi_index(bin);
  WaveVector k(grid.wavenumber(mi[0]), 0.0);
  if (grid.dim() == 2) k[1] = grid.wavenumber(mi[1]);
  return k;
}

}  // namespace

ComplexVector forward(const Grid& grid, const Vector& values) {
  std::vector<Complex> data(values.data(), values.data() + values.size());
  transform(grid, data, false);
  return Eigen::Map<ComplexVector>(data.data(), static_cast<Index>(data.size()));
}

Vector inverse_real(const Grid& grid, const ComplexVector& coeffs) {
  std::vector<Complex> data(coeffs.data(), coeffs.data() + coeffs.size());
  transform(grid, data, true);
  Vector out(static_cast<Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) out[static_cast<Index>(i)] = data[i].real();
  return out;
}

Vector real_symbol(const Grid& grid, const std::function<double(const WaveVector&)>& sigma) {
  Vector out(grid.size());
  for (Index b = 0; b < grid.size(); ++b) out[b] = sigma(wave_vector(grid, b));
  return out;
}

ComplexVector complex_symbol(const Grid& grid,
                             const std::function<Complex(const WaveVector&)>& sigma) {
  ComplexVector out(grid.size());
  for (Index b = 0; b < grid.size(); ++b) out[b] = sigma(wave_vector(grid, b));
  return out;
}

Vector apply(const Grid& grid, const Vector& symbol, const Vector& values) {
  ComplexVector c = forward(grid, values);
  c.array() *= symbol.array().cast<Complex>();
  return inverse_real(grid, c);
}

Vector apply(const Grid& grid, const ComplexVector& symbol, const Vector& values) {
  ComplexVector c = forward(grid, values);
  c.array() *= symbol.array();
  return inverse_real(grid, c);
}

Vector power_symbol(const Grid& grid, double power) {
  return real_symbol(grid, [power](const WaveVector& k) {
    const double r = k.norm();
    if (power == 0.0) return 1.0;
    return r == 0.0 ? 0.0 : std::pow(r, power);
  });
}

Vector bessel_symbol(const Grid& grid, double power) {
  return real_symbol(grid, [power](const WaveVector& k) {
    return std::pow(1.0 + k.squaredNorm(), 0.5 * power);
  });
}

ComplexVector derivative_symbol(const Grid& grid, const std::array<int, 2>& alpha) {
  const Index n = grid.points_per_dim();
  ComplexVector out(grid.size());
  for (Index b = 0; b < grid.size(); ++b) {
    const MultiIndex mi = grid.multi_index(b);
    Complex value(1.0, 0.0);
    for (int d = 0; d < grid.dim(); ++d) {
      const int a = alpha[static_cast<std::size_t>(d)];
      if (a == 0) continue;
      const Index bin = mi[static_cast<std::size_t>(d)];
      if (grid.signed_mode(bin) == -n / 2 && a % 2 == 1) {
        value = 0.0;
        break;
      }
      value *= std::pow(Complex(0.0, grid.wavenumber(bin)), a);
    }
    out[b] = value;
  }
  return out;
}

Index periodic_offset(const Grid& grid, Index a, Index b) {
  const Index n = grid.points_per_dim();
  const MultiIndex ma = grid.multi_index(a);
  const MultiIndex mb = grid.multi_index(b);
  MultiIndex d{0, 0};
  for (int k = 0; k < grid.dim(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    d[kk] = ((ma[kk] - mb[kk]) % n + n) % n;
  }
  return grid.linear_index(d);
}

CirculantOperator::CirculantOperator(const Grid& grid, Vector generator)
    : grid_(grid), generator_(std::move(generator)) {}

CirculantOperator CirculantOperator::from_even_symbol(const Grid& grid, const Vector& symbol) {
  ComplexVector c = symbol.cast<Complex>();
  Vector g = inverse_real(grid, c);
  Vector sym(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    const Index mirror = periodic_offset(grid, 0, i);
    sym[i] = 0.5 * (g[i] + g[mirror]);
  }
  return CirculantOperator(grid, std::move(sym));
}

CirculantOperator CirculantOperator::from_symbol(const Grid& grid, const ComplexVector& symbol) {
  return CirculantOperator(grid, inverse_real(grid, symbol));
}

CirculantOperator CirculantOperator::identity(const Grid& grid) {
  Vector g = Vector::Zero(grid.size());
  g[0] = 1.0;
  return CirculantOperator(grid, std::move(g));
}

CirculantOperator CirculantOperator::from_generator(const Grid& grid, Vector generator) {
  if (generator.size() != grid.size()) throw DomainError("generator length does not match grid");
  return CirculantOperator(grid, std::move(generator));
}

double CirculantOperator::entry(Index row, Index col) const {
  return generator_[periodic_offset(grid_, row, col)];
}

Matrix CirculantOperator::block(const IndexList& rows, const IndexList& cols) const {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = entry(rows[i], cols[j]);
    }
  }
  return out;
}

}  // namespace fraccald::spectral
