#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "landlaw/boxcount.hpp"
#include "landlaw/ensemble.hpp"
#include "landlaw/lattice.hpp"
#include "landlaw/spectrum.hpp"

namespace landlaw {

/// %.17g, with "nan"/"inf" for non-finite values.
std::string format_real(double x);

struct FlatField {
  Torus torus;
  ScalarField values;
};

/// Header line "d K", then K^d values in site order, one per line.
void write_field(std::ostream& os, const Torus& t, std::span<const double> values);
FlatField read_field(std::istream& is);
void save_field(const std::filesystem::path& path, const Torus& t, std::span<const double> values);
FlatField load_field(const std::filesystem::path& path);

/// mu,value,kind
void write_curve(std::ostream& os, const CountingCurve& c);
CountingCurve read_curve(std::istream& is);
void save_curve(const std::filesystem::path& path, const CountingCurve& c);
CountingCurve load_curve(const std::filesystem::path& path);

/// mu,lhs,rhs,margin, then a '#'-prefixed summary line.
void write_report(std::ostream& os, const LawReport& r);

/// mu,mean_N,se_N,mean_Nu,se_Nu[,mean_Nu_dual,se_Nu_dual]
void write_ensemble(std::ostream& os, const EnsembleResult& r);

}  // namespace landlaw
