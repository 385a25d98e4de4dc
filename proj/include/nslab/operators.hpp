#ifndef NSLAB_OPERATORS_HPP_
#define NSLAB_OPERATORS_HPP_

#include <string>

#include "nslab/field.hpp"

namespace nslab {

// Spatial derivative discretization. Spectral is Fourier pseudo-spectral;
// FD2 is second-order centered differences (compact 3-point Laplacian).
enum class Backend { Spectral, FD2 };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

// Jacobian convention used throughout: (grad w)_ij = d w_i / d x_j.
ScalarField partial(const ScalarField& f, int axis, Backend b = Backend::Spectral);
VectorField gradient(const ScalarField& f, Backend b = Backend::Spectral);
ScalarField divergence(const VectorField& w, Backend b = Backend::Spectral);
ScalarField laplacian(const ScalarField& f, Backend b = Backend::Spectral);
VectorField vector_laplacian(const VectorField& w, Backend b = Backend::Spectral);
TensorField jacobian(const VectorField& w, Backend b = Backend::Spectral);
// (div T)_i = sum_j d_j T_ij
VectorField tensor_divergence(const TensorField& t, Backend b = Backend::Spectral);

// 2/3-rule low-pass: zero every Fourier mode with |k_a| > n/3 on some axis.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& w);

// Periodic convolution (f*g)(x_i) = sum_j f(x_i - x_j) g(x_j) h^d, via FFT.
ScalarField convolve(const ScalarField& f, const ScalarField& g);

}  // namespace nslab

#endif  // NSLAB_OPERATORS_HPP_
