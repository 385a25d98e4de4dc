#include "nslab/operators.hpp"

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdlib>

#include "nslab/errors.hpp"
#include "spectral.hpp"

namespace nslab {

std::string to_string(Backend b) { return b == Backend::Spectral ? "spectral" : "fd2"; }

Backend backend_from_string(const std::string& s) {
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "spectral" || lower == "fourier") return Backend::Spectral;
  if (lower == "fd2" || lower == "fd") return Backend::FD2;
  throw ConfigError("backend", "unknown derivative backend '" + s + "'");
}

namespace {

using detail::Spectrum;

bool is_nyquist(int k, int n) { return n % 2 == 0 && std::abs(k) == n / 2; }

// i k_axis multiplier; Nyquist modes are dropped for odd-order derivatives.
void multiply_ik(Spectrum& s, const detail::SpectralPlan& plan, int axis) {
  const int n = plan.grid().n();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int k = plan.wavenumber(i, axis);
    if (is_nyquist(k, n)) {
      s[i] = 0.0;
    } else {
      s[i] *= std::complex<double>(0.0, static_cast<double>(k));
    }
  }
}

Spectrum with_ik(const Spectrum& s, const detail::SpectralPlan& plan, int axis) {
  Spectrum out = s;
  multiply_ik(out, plan, axis);
  return out;
}

ScalarField fd_partial(const ScalarField& f, int axis) {
  const Grid& g = f.grid();
  ScalarField out(g);
  const double inv = 1.0 / (2.0 * g.h());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = (f[g.shifted(i, axis, 1)] - f[g.shifted(i, axis, -1)]) * inv;
  return out;
}

ScalarField fd_laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  const double inv = 1.0 / (g.h() * g.h());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double acc = 0.0;
    for (int a = 0; a < g.dim(); ++a)
      acc += f[g.shifted(i, a, 1)] - 2.0 * f[i] + f[g.shifted(i, a, -1)];
    out[i] = acc * inv;
  }
  return out;
}

void require_axis(const Grid& g, int axis) {
  if (axis < 0 || axis >= g.dim()) throw ArgumentError("partial: axis out of range");
}

}  // namespace

ScalarField partial(const ScalarField& f, int axis, Backend b) {
  require_axis(f.grid(), axis);
  if (b == Backend::FD2) return fd_partial(f, axis);
  const auto& plan = detail::plan_for(f.grid());
  Spectrum s = plan.forward(f.values());
  multiply_ik(s, plan, axis);
  return ScalarField(f.grid(), plan.backward(std::move(s)));
}

VectorField gradient(const ScalarField& f, Backend b) {
  const Grid& g = f.grid();
  std::vector<ScalarField> comps;
  comps.reserve(static_cast<std::size_t>(g.dim()));
  if (b == Backend::FD2) {
    for (int a = 0; a < g.dim(); ++a) comps.push_back(fd_partial(f, a));
    return VectorField(std::move(comps));
  }
  const auto& plan = detail::plan_for(g);
  const Spectrum s = plan.forward(f.values());
  for (int a = 0; a < g.dim(); ++a)
    comps.emplace_back(g, plan.backward(with_ik(s, plan, a)));
  return VectorField(std::move(comps));
}

ScalarField divergence(const VectorField& w, Backend b) {
  const Grid& g = w.grid();
  if (b == Backend::FD2) {
    ScalarField out(g);
    for (int a = 0; a < g.dim(); ++a) out += fd_partial(w[a], a);
    return out;
  }
  const auto& plan = detail::plan_for(g);
  Spectrum acc(plan.spectrum_size());
  for (int a = 0; a < g.dim(); ++a) {
    Spectrum s = plan.forward(w[a].values());
    multiply_ik(s, plan, a);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s[i];
  }
  return ScalarField(g, plan.backward(std::move(acc)));
}

ScalarField laplacian(const ScalarField& f, Backend b) {
  if (b == Backend::FD2) return fd_laplacian(f);
  const Grid& g = f.grid();
  const auto& plan = detail::plan_for(g);
  Spectrum s = plan.forward(f.values());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double k2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double k = plan.wavenumber(i, a);
      k2 += k * k;
    }
    s[i] *= -k2;
  }
  return ScalarField(g, plan.backward(std::move(s)));
}

VectorField vector_laplacian(const VectorField& w, Backend b) {
  std::vector<ScalarField> comps;
  for (int c = 0; c < w.components(); ++c) comps.push_back(laplacian(w[c], b));
  return VectorField(std::move(comps));
}

TensorField jacobian(const VectorField& w, Backend b) {
  const Grid& g = w.grid();
  TensorField out(g);
  for (int i = 0; i < g.dim(); ++i) {
    VectorField gi = gradient(w[i], b);
    for (int j = 0; j < g.dim(); ++j) out(i, j) = std::move(gi[j]);
  }
  return out;
}

VectorField tensor_divergence(const TensorField& t, Backend b) {
  const Grid& g = t.grid();
  std::vector<ScalarField> comps;
  for (int i = 0; i < g.dim(); ++i) {
    std::vector<ScalarField> row;
    for (int j = 0; j < g.dim(); ++j) row.push_back(t(i, j));
    comps.push_back(divergence(VectorField(std::move(row)), b));
  }
  return VectorField(std::move(comps));
}

ScalarField dealias(const ScalarField& f) {
  const Grid& g = f.grid();
  const auto& plan = detail::plan_for(g);
  Spectrum s = plan.forward(f.values());
  const int n = g.n();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int a = 0; a < g.dim(); ++a) {
      // Keep |k| <= n/3, i.e. 3|k| <= n.
      if (3 * std::abs(plan.wavenumber(i, a)) > n) {
        s[i] = 0.0;
        break;
      }
    }
  }
  return ScalarField(g, plan.backward(std::move(s)));
}

VectorField dealias(const VectorField& w) {
  std::vector<ScalarField> comps;
  for (int c = 0; c < w.components(); ++c) comps.push_back(dealias(w[c]));
  return VectorField(std::move(comps));
}

ScalarField convolve(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "convolve");
  const Grid& grid = f.grid();
  if (grid.n() % 2 != 0) throw ArgumentError("convolve: requires an even number of points per axis");
  const auto& plan = detail::plan_for(grid);
  Spectrum sf = plan.forward(f.values());
  const Spectrum sg = plan.forward(g.values());
  for (std::size_t i = 0; i < sf.size(); ++i) sf[i] *= sg[i];
  const std::vector<double> circ = plan.backward(std::move(sf));
  // The origin x = 0 sits at node n/2 on every axis, so the displacement
  // x_i - x_j maps to plain index i - j + n/2.
  ScalarField out(grid);
  const int half = grid.n() / 2;
  const double w = grid.cell_volume();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t src = i;
    for (int a = 0; a < grid.dim(); ++a) src = grid.shifted(src, a, half);
    out[i] = circ[src] * w;
  }
  return out;
}

}  // namespace nslab
