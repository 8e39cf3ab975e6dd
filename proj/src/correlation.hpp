#pragma once

#include <utility>

namespace gtours {

// Correlation structure of the n step vectors of an open tour through n+1
// independent Gaussian points.  Consecutive steps share one endpoint, so
// their correlation is -1/2; non-adjacent steps are uncorrelated.  Step
// indices are 1-based throughout, matching the way the tour is described.
class StepCorrelations {
 public:
  explicit StepCorrelations(int steps);

  int steps() const { return steps_; }

  // Correlation between (any one coordinate of) steps i and j.
  double rho(int i, int j) const;

  // Partial correlation of steps i and j given step k.
  double partial_given_one(int i, int j, int k) const;

  // Partial correlation of steps i and j given steps k and l.  The result
  // does not depend on the order of k and l.
  double partial_given_two(int i, int j, int k, int l) const;

  // Determinant of the full n x n correlation matrix, computed by dense LU
  // elimination.  Equals (n+1) / 2^n for this tridiagonal structure, which
  // tridiagonal_determinant reproduces through the three-term recurrence.
  double gram_determinant() const;

 private:
  void require_index(int i, const char* where) const;

  int steps_;
};

// Determinant of the n x n step correlation matrix via the recurrence
// D_n = D_{n-1} - (1/4) D_{n-2}, D_0 = D_1 = 1.
double tridiagonal_determinant(int steps);

// For four consecutive steps in one coordinate: the probability that all
// four components are positive, and the expectation gamma of the product of
// their four signs.  The two are linked by the quadrant identity
//   P = 1/16 + (1/(8 pi)) sum_{i<j} arcsin(rho_ij) + gamma/16,
// and P = 1/120 is the known orthant probability for this tridiagonal
// structure, so gamma follows from the identity.  Returns {P, gamma}.
std::pair<double, double> orthant_probability_and_sign_gamma();

// Expected absolute step product E|s_1 ... s_n| for an open tour in
// dimension 1, evaluated through the arcsin formulas in terms of partial
// correlations.  Implemented for 1 <= steps <= 4; higher orders would need
// moments of more than four correlated signs and raise unsupported_error.
double mu1_open(int steps);

}  // namespace gtours
