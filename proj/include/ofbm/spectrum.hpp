#pragma once
#include <vector>

#include "ofbm/covariance.hpp"
#include "ofbm/model.hpp"

namespace ofbm {

/// Continuous-time spectral density of the increment process at frequency x.
CMat ofgn_density_ct(const OfbmModel& model, double x);

struct DtDensity {
  CMat g;
  int K = 0;            // truncation: sum over |k| <= K
  double tail_bound = 0.0;
};

/// Discrete-time spectral density on [-pi, pi]; the alias sum is truncated at
/// a K whose analytic tail bound is below tol.
DtDensity ofgn_density_dt(const OfbmModel& model, double x, double tol = 1e-8);

/// Sampled density table (drives the CLI output).
struct SpectrumGrid {
  std::vector<double> frequencies;
  std::vector<CMat> values;
  std::vector<int> K;               // empty in continuous-time mode
  std::vector<double> tail_bounds;  // empty in continuous-time mode
};

SpectrumGrid sample_ofgn_ct(const OfbmModel& model, const std::vector<double>& xs);
SpectrumGrid sample_ofgn_dt(const OfbmModel& model, const std::vector<double>& xs, double tol);

/// int_{-pi}^{pi} g(x) dx, which must reproduce V(1) = E Y(0) Y(0)^T.
Mat integrate_dt_density(const OfbmModel& model, double tol = 1e-6);

enum class DichotomyLabel { Zero = 0, Diverges = 1, Bounded = 2 };

struct DichotomyOptions {
  int probes = 20;
  double x_lo = 1e-8;
  double x_hi = 1e-1;
  double zero_rel_tol = 1e-10;
  double growth_factor = 2.0;  // required low-frequency growth for DIVERGES
};

/// Entrywise classification {DIVERGES, ZERO} of the zero-frequency behaviour,
/// valid under 1/2 < Re(h_l) < 1 for every root (else LrdRangeError). Entries
/// that neither vanish nor grow raise AmbiguousEntryError.
Eigen::MatrixXi dichotomy_classify(const OfbmModel& model, const DichotomyOptions& opt = {});

struct DichotomyProbeReport {
  std::vector<double> xs;
  std::vector<CMat> h_values;   // x^{-D} AA* x^{-D*} along the probe grid
  Eigen::MatrixXi labels;       // DichotomyLabel values; Bounded only here
  bool in_theorem_range = true;
};

/// Diagnostic probe of the dominant low-frequency factor. Does not enforce
/// the LRD range; callers must surface in_theorem_range = false prominently.
DichotomyProbeReport dichotomy_probe(const OfbmModel& model, const DichotomyOptions& opt = {});

}  // namespace ofbm
