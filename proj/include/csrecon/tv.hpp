#pragma once

// Discrete total variation machinery: forward-difference gradient and its
// negative adjoint (divergence), the isotropic TV functional, Chambolle's
// dual fixed-point solver for the TV proximal map, and the isotropic vector
// shrinkage used by splitting solvers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "csrecon/grid.hpp"

namespace csrecon {

enum class BoundaryRule { neumann, periodic };

/// Per-pixel pair of forward differences: dx along columns (horizontal),
/// dy along rows (vertical). Under Neumann boundaries the last column of dx
/// and the last row of dy are zero.
struct VectorField {
  Image dx;
  Image dy;

  VectorField(int width, int height) : dx(width, height), dy(width, height) {}

  int width() const { return dx.width(); }
  int height() const { return dx.height(); }
};

/// Forward differences of x: dx(r,c) = x(r,c+1) - x(r,c), dy(r,c) =
/// x(r+1,c) - x(r,c); out-of-range neighbors give 0 (neumann) or wrap
/// (periodic).
inline VectorField gradient(const Image& x, BoundaryRule b) {
  const int w = x.width();
  const int h = x.height();
  VectorField g(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) {
        g.dx.at(r, c) = x.at(r, c + 1) - x.at(r, c);
      } else {
        g.dx.at(r, c) = b == BoundaryRule::periodic ? x.at(r, 0) - x.at(r, c) : 0.0;
      }
      if (r + 1 < h) {
        g.dy.at(r, c) = x.at(r + 1, c) - x.at(r, c);
      } else {
        g.dy.at(r, c) = b == BoundaryRule::periodic ? x.at(0, c) - x.at(r, c) : 0.0;
      }
    }
  }
  return g;
}

/// Negative adjoint of gradient: <gradient(x,b), p> = -<x, divergence(p,b)>.
inline Image divergence(const VectorField& p, BoundaryRule b) {
  const int w = p.width();
  const int h = p.height();
  Image out(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double dxv;
      double dyv;
      if (b == BoundaryRule::periodic) {
        dxv = p.dx.at(r, c) - p.dx.at(r, (c - 1 + w) % w);
        dyv = p.dy.at(r, c) - p.dy.at((r - 1 + h) % h, c);
      } else {
        if (c == 0)
          dxv = p.dx.at(r, 0);
        else if (c == w - 1)
          dxv = -p.dx.at(r, c - 1);
        else
          dxv = p.dx.at(r, c) - p.dx.at(r, c - 1);
        if (r == 0)
          dyv = p.dy.at(0, c);
        else if (r == h - 1)
          dyv = -p.dy.at(r - 1, c);
        else
          dyv = p.dy.at(r, c) - p.dy.at(r - 1, c);
      }
      out.at(r, c) = dxv + dyv;
    }
  }
  return out;
}

/// Isotropic TV: sum over pixels of sqrt(dx^2 + dy^2).
inline double tv_value(const Image& x, BoundaryRule b) {
  const VectorField g = gradient(x, b);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += std::hypot(g.dx[i], g.dy[i]);
  }
  return s;
}

/// Chambolle's dual step size. Convergence is proven for tau <= 1/8; just
/// under 1/4 is the standard practical choice.
inline constexpr double kChambolleTau = 0.248;

/// Approximate prox of weight*TV: argmin_x weight*TV(x) + 0.5*||x - v||^2
/// via the dual fixed point p <- (p + tau*grad(div p - v/weight)) /
/// (1 + tau*|grad(div p - v/weight)|), returning v - weight*div p.
/// Neumann boundaries. Stops when the largest per-pixel dual change drops
/// below tol or after max_iter sweeps.
inline Image chambolle_prox(const Image& v, double weight, int max_iter = 1000,
                            double tol = 1e-4, double tau = kChambolleTau) {
  if (!(weight > 0.0)) {
    throw std::invalid_argument("chambolle_prox: weight must be positive");
  }
  const int w = v.width();
  const int h = v.height();
  VectorField p(w, h);

  Image scaled(w, h);
  for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = v[i] / weight;

  Image work(w, h);
  for (int it = 0; it < max_iter; ++it) {
    work = divergence(p, BoundaryRule::neumann);
    for (std::size_t i = 0; i < work.size(); ++i) work[i] -= scaled[i];
    const VectorField g = gradient(work, BoundaryRule::neumann);
    double max_change = 0.0;
    for (std::size_t i = 0; i < work.size(); ++i) {
      const double denom = 1.0 + tau * std::hypot(g.dx[i], g.dy[i]);
      const double nx = (p.dx[i] + tau * g.dx[i]) / denom;
      const double ny = (p.dy[i] + tau * g.dy[i]) / denom;
      max_change = std::max({max_change, std::abs(nx - p.dx[i]),
                             std::abs(ny - p.dy[i])});
      p.dx[i] = nx;
      p.dy[i] = ny;
    }
    if (max_change < tol) break;
  }

  Image out = divergence(p, BoundaryRule::neumann);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] - weight * out[i];
  return out;
}

/// Isotropic shrinkage: with m = sqrt(dx^2+dy^2) per pixel, scale the pair
/// to magnitude max(m - t, 0); pixels with m = 0 stay (0,0).
inline VectorField soft_threshold_field(const VectorField& g, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("soft_threshold_field: threshold must be non-negative");
  }
  VectorField out(g.width(), g.height());
  for (std::size_t i = 0; i < out.dx.size(); ++i) {
    const double m = std::hypot(g.dx[i], g.dy[i]);
    if (m > t) {
      const double scale = (m - t) / m;
      out.dx[i] = scale * g.dx[i];
      out.dy[i] = scale * g.dy[i];
    }
  }
  return out;
}

}  // namespace csrecon
