#include "pintconv/csv.hpp"

#include "pintconv/text.hpp"

namespace pintconv {

void Provenance::write(std::ostream& os) const {
  os << "# config:";
  for (const auto& [k, v] : config) os << ' ' << k << '=' << v;
  os << "\n# version: pintconv " << kVersion << '\n';
}

std::string format_phi(double phi) { return phi == kUnbounded ? "unbounded" : format_real(phi); }

void write_curve_csv(std::ostream& os, const CurveSummary& curve) {
  os << "w,phi\n";
  for (const auto& s : curve.samples) os << format_real(s.w) << ',' << format_phi(s.phi) << '\n';
  os << "# max_phi=" << format_phi(curve.max_phi) << '\n'
     << "# argmax_w=" << format_real(curve.argmax_w) << '\n'
     << "# threshold=" << format_real(curve.threshold) << '\n';
}

}  // namespace pintconv
