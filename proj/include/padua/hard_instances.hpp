#pragma once

#include <span>
#include <vector>

#include "padua/oracles.hpp"

namespace padua {

/// Standard mollifier exp(1/(||x||^2 - 1)) inside the unit ball, 0 outside.
/// Derivatives up to order 2 are analytic; higher orders use central finite
/// differences with h = 1e-4.
double mollifier_eval(std::span<const double> x, std::span<const int> alpha);
double mollifier_eval(double x, int alpha = 0);

/// Squeezed bump Psi(x / rho); the alpha derivative scales by rho^{-|alpha|}.
double squeezed(double rho, std::span<const double> x,
                std::span<const int> alpha);
double squeezed(double rho, double x, int alpha = 0);

/// Numerical C^nu norm of the mollifier: grid max of |D^alpha Psi| for
/// |alpha| <= ceil(nu)-1 plus a grid estimate of the Hoelder seed.
double mollifier_cnu_norm(double nu, int d = 1);

/// Two indistinguishable problem instances: f1 = 0 and a single squeezed
/// bump of amplitude psi0 * ||Psi||^{-1} * rho^nu in one of K^d cells.
/// The bump support is the ball inscribed in the cell, so both functions
/// vanish with all derivatives on every cell boundary.
struct HardPair {
  GroundTruth f1;
  GroundTruth f2;
  int cells_per_axis = 0;
  double rho = 0.0;       // cell side 2/K
  double psi0 = 0.0;
  double nu = 0.0;
  double amplitude = 0.0; // psi0 * psi_norm^{-1} * rho^nu
  double psi_norm = 0.0;  // numerically computed ||Psi||_{C^nu}
  std::vector<double> cell_center;
};

HardPair hard_pair(int K, double psi0, double nu, int d,
                   std::span<const int> cell);

/// Binary-digit family of up to 2^{K^d} bump combinations, pairwise
/// separated in sup norm by amplitude * Psi(0).
struct PackingFamily {
  int cells_per_axis = 0;
  int dim = 1;
  double nu = 0.0;
  double rho = 0.0;
  double amplitude = 0.0;
  double psi_norm = 0.0;
  double separation = 0.0;  // amplitude * Psi(0)
  std::vector<GroundTruth> members;
};

PackingFamily packing_family(int K, double nu, int d, int count);

struct KlBudget {
  double kl = 0.0;       // n psi0^2 rho^{2 nu} / (2 K^d psi_norm^2 sigma^2)
  double min_cells = 0;  // K >= (psi0^2 n / (4 sigma^2 psi_norm^2))^{1/(d+2nu)}
};

KlBudget kl_budget(long n, int K, double psi0, double sigma, double nu, int d,
                   double psi_norm);

}  // namespace padua
