#pragma once

namespace qwts::closed_form {

// Analytic expressions for the two-state walk with coin
// [[cos t, sin t], [sin t, -cos t]] and initial state [cos xi, i sin xi].

/// Coin angle theta and initial-state angle xi, both in [0, pi/2].
struct AngleParams {
    double theta;
    double xi;

    AngleParams(double theta, double xi);
};

/// V_1 = x1^2 + 2 cos(2 theta) cos(2 xi) x1 + 1.
double v1(double x1, const AngleParams& p);

/// E(X_2) = -2 cos^2(theta) cos(2 theta) cos(2 xi).
double e2(const AngleParams& p);

/// E(X_3) = -{(3 cos^4 + sin^4) cos(2 theta) + sin^2 sin^2(2 theta)} cos(2 xi).
double e3(const AngleParams& p);

/// General E(X_n) for n >= 2 as a finite triple sum in tan^2(theta).
/// Requires theta < pi/2; the alternating series is only trusted for n <= 50.
double en_series(const AngleParams& p, int n);

/// Binomial coefficient: exact integer arithmetic up to n = 30, log-gamma above.
double binomial(int n, int k);

} // namespace qwts::closed_form
