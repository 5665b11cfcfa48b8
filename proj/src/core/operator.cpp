#include "landlaw/operator.hpp"

#include <vector>

#include "landlaw/error.hpp"

namespace landlaw {

Hamiltonian::Hamiltonian(const Torus& t, PotentialField v) : potential_(std::move(v)) {
  if (!(potential_.torus() == t)) fail(ErrorCode::DimensionMismatch, "potential lives on a different torus");
  const auto n = static_cast<std::ptrdiff_t>(t.volume());
  const int d = t.dim();
  std::vector<Eigen::Triplet<double, std::ptrdiff_t>> entries;
  entries.reserve(t.volume() * (2 * static_cast<std::size_t>(d) + 1));
  for (std::size_t s = 0; s < t.volume(); ++s) {
    const auto row = static_cast<std::ptrdiff_t>(s);
    entries.emplace_back(row, row, 2.0 * d + potential_[s]);
    for (std::size_t m : t.neighbors(s)) entries.emplace_back(row, static_cast<std::ptrdiff_t>(m), -1.0);
  }
  matrix_.resize(n, n);
  matrix_.setFromTriplets(entries.begin(), entries.end());
  matrix_.makeCompressed();
}

Hamiltonian assemble(const Torus& t, const PotentialField& v) { return Hamiltonian(t, v); }

ScalarField Hamiltonian::apply(std::span<const double> phi) const {
  if (phi.size() != size()) fail(ErrorCode::DimensionMismatch, "vector size differs from operator size");
  const Torus& t = torus();
  const int d = t.dim();
  ScalarField out(size());
  for (std::size_t n = 0; n < size(); ++n) {
    double acc = (2.0 * d + potential_[n]) * phi[n];
    for (int i = 0; i < d; ++i) acc -= phi[t.step(n, i, 1)] + phi[t.step(n, i, -1)];
    out[n] = acc;
  }
  return out;
}

ScalarField Hamiltonian::apply_matrix(std::span<const double> phi) const {
  if (phi.size() != size()) fail(ErrorCode::DimensionMismatch, "vector size differs from operator size");
  Eigen::Map<const Eigen::VectorXd> x(phi.data(), static_cast<Eigen::Index>(phi.size()));
  Eigen::VectorXd y = matrix_ * x;
  return ScalarField(y.data(), y.data() + y.size());
}

double Hamiltonian::quadratic_form(std::span<const double> f) const {
  if (f.size() != size()) fail(ErrorCode::DimensionMismatch, "vector size differs from operator size");
  const Torus& t = torus();
  double grad = 0.0;
  double pot = 0.0;
  for (std::size_t n = 0; n < size(); ++n) {
    for (int i = 0; i < t.dim(); ++i) {
      const double g = f[t.step(n, i, 1)] - f[n];
      grad += g * g;
    }
    pot += potential_[n] * f[n] * f[n];
  }
  return grad + pot;
}

double Hamiltonian::spectral_top() const noexcept { return 4.0 * torus().dim() + potential_.reference_max(); }

ScalarField dual_vector(const Torus& t, std::span<const double> phi) {
  if (t.side() % 2 != 0) fail(ErrorCode::Parity, "dual transform needs an even torus side K");
  if (phi.size() != t.volume()) fail(ErrorCode::DimensionMismatch, "field size differs from torus volume");
  ScalarField out(phi.size());
  for (std::size_t n = 0; n < phi.size(); ++n) {
    // 1-based coordinate sum, so the sign pattern starts at -1 on site 1.
    int sum = t.dim();
    for (int i = 0; i < t.dim(); ++i) sum += t.coord(n, i);
    out[n] = (sum % 2 == 0) ? phi[n] : -phi[n];
  }
  return out;
}

Hamiltonian dual_hamiltonian(const Hamiltonian& h) { return Hamiltonian(h.torus(), dual_potential(h.potential())); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot product of unequal lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace landlaw
