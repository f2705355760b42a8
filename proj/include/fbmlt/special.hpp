#pragma once

namespace fbmlt {

double gamma_fn(double x);
double beta_fn(double a, double b);

/// Normalizing constant of the Mandelbrot-van Ness representation,
/// sqrt(2H) 2^H B(1-H, H+1/2)^{-1/2}. Equals 1 at H = 1/2.
double c_h_constant(double hurst);

}  // namespace fbmlt
