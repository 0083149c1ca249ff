#pragma once

namespace satsim::security {

// Collective-attack key rate for GMCS homodyne reverse reconciliation with a
// trusted noisy detector. The exact formula set is pinned here so alternate
// implementations can reproduce it:
//   V = V_A + 1, chi_line = 1/T - 1 + xi, chi_hom = (1 - eta + v_ele)/eta,
//   chi_tot = chi_line + chi_hom/T
//   I_AB = 1/2 log2((V + chi_tot)/(1 + chi_tot))
//   A  = V^2 (1 - 2T) + 2T + T^2 (V + chi_line)^2
//   B  = T^2 (V chi_line + 1)^2
//   lambda_{1,2}^2 = (A +- sqrt(A^2 - 4B))/2
//   C  = (V sqrt(B) + T (V + chi_line) + A chi_hom) / (T (V + chi_tot))
//   D  = sqrt(B) (V + sqrt(B) chi_hom) / (T (V + chi_tot))
//   lambda_{3,4}^2 = (C +- sqrt(C^2 - 4D))/2
//   chi_BE = g((l1-1)/2) + g((l2-1)/2) - g((l3-1)/2) - g((l4-1)/2)
//   K = beta I_AB - chi_BE
// with g(x) = (x+1) log2(x+1) - x log2(x), g(0) = 0.
//
// eta and v_ele are trusted calibration constants, not attributed to Eve.
struct SecurityParams {
  double v_a;           // modulation variance (N0)
  double t;             // transmittance
  double xi;            // excess noise (N0, channel input referred)
  double eta = 0.55;    // detection efficiency
  double v_ele = 0.01;  // electronic noise (N0)
  double beta = 0.95;   // reconciliation efficiency
  void validate() const;
};

// Bosonic entropy term; g(x) = 0 for x <= 0.
double g_entropy(double x);

double mutual_information(const SecurityParams& s);
double holevo_bound(const SecurityParams& s);

// K = beta I_AB - chi_BE; may be negative and is reported raw.
double key_rate(const SecurityParams& s);

// Unique xi > 0 with K(xi) = 0, by bisection to 1e-6 N0. Throws when no
// positive-key regime exists at xi = 0.
double null_key_threshold(double t, double v_a, double eta, double v_ele, double beta);

// V_A maximizing K at the nominal channel noise, golden-section search on
// [0.1, 100] N0. Throws when the key rate is non-positive everywhere.
double optimal_v_a(double t, double eta, double v_ele, double beta,
                   double xi_nominal = 0.01, double tol = 1e-3);

}  // namespace satsim::security
