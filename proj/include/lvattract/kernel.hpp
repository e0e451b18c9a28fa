#pragma once

#include <complex>
#include <variant>
#include <vector>

namespace lv {

// A delay kernel is a probability measure on [0, inf). Four computable
// families are supported; all of them are represented with unit total mass.

struct Atom {
  double delay = 0.0;
  double weight = 1.0;
};

/// Finite mixture of Dirac masses. Weights are expected to sum to one.
struct PointMass {
  std::vector<Atom> atoms;
};

/// Density rate * exp(-rate * s).
struct Exponential {
  double rate = 1.0;
};

/// Gamma density with integer shape: rate^k s^(k-1) exp(-rate s) / (k-1)!.
struct Erlang {
  double rate = 1.0;
  int order = 1;
};

/// Density sampled on the uniform grid s_k = k * step, k = 0..N-1, integrated
/// with the composite trapezoid rule. Zero beyond the last node.
struct Table {
  double step = 1.0;
  std::vector<double> densities;

  double horizon() const {
    return densities.empty() ? 0.0 : step * static_cast<double>(densities.size() - 1);
  }
};

using Kernel = std::variant<PointMass, Exponential, Erlang, Table>;

// Factories validate structural requirements (positive rates, order >= 1,
// non-negative densities and weights) and throw lv::Error otherwise.
Kernel point_mass(double delay);
Kernel point_mixture(std::vector<Atom> atoms);
Kernel exponential(double rate);
Kernel erlang(double rate, int order);
Kernel table(double step, std::vector<double> densities);
// Rescales the densities so the trapezoid mass is exactly one.
Kernel normalized_table(double step, std::vector<double> densities);

const char* kind_name(const Kernel& k);

double total_mass(const Kernel& k);
bool is_normalized(const Kernel& k, double tol = 1e-12);

bool has_atom_at_zero(const Kernel& k);
double max_atom_delay(const Kernel& k);
bool is_continuous(const Kernel& k);

/// Mass carried beyond horizon S.
double tail_mass(const Kernel& k, double S);

/// Smallest horizon with tail mass <= tol (atoms: largest delay; table: its
/// own horizon).
double truncation_horizon(const Kernel& k, double tol);

/// Density at s >= 0 for continuous kernels (0 for point masses).
double density(const Kernel& k, double s);

/// Laplace transform  int_0^inf e^{-z s} dK(s).
std::complex<double> laplace(const Kernel& k, std::complex<double> z);

/// Structural admissibility test for control kernels: an atom at zero, an
/// exponential/Erlang density, or a table that is positive at s = 0.
bool validate_control_kernel(const Kernel& g);

}  // namespace lv
