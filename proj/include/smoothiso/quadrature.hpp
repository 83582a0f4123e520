#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace smoothiso {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1,1]; exact for polynomials of degree 2n-1.
const QuadRule& gauss_legendre(std::size_t n);

// Gauss-Hermite rule for weight exp(-x^2) on the real line.
const QuadRule& gauss_hermite(std::size_t n);

// Integral of f over [a,b] with an n-point Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    std::size_t n);

// E[f(X)] for X ~ N(0,1), by n-point Gauss-Hermite (substitution x = sqrt(2) y).
double gauss_hermite_mean(const std::function<double(double)>& f, std::size_t n);

// Composite Simpson on an odd number of equally spaced nodes (n >= 3).
double simpson(const std::function<double(double)>& f, double a, double b,
               std::size_t nodes);

// Adaptive Simpson to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

// E|X|^p for X ~ N(0,1): 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
double normal_abs_moment(double p);

}  // namespace smoothiso
