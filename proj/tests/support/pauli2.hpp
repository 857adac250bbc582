#pragma once

// Test-only 2x2 density-matrix arithmetic, the independent oracle for the
// Bloch-form increments. Kept deliberately naive.

#include <array>
#include <complex>

namespace qd::test {

using C = std::complex<double>;
using Mat2 = std::array<C, 4>;  // row-major [m00 m01; m10 m11]

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline Mat2 operator*(C s, const Mat2& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }
inline Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline const Mat2 kSigmaX{C(0), C(1), C(1), C(0)};

inline Mat2 density_from_bloch(double x, double y, double z) {
    return {C(0.5 * (1 + z)), C(0.5 * x, -0.5 * y), C(0.5 * x, 0.5 * y),
            C(0.5 * (1 - z))};
}

struct Bloch3 {
    double x, y, z;
};

inline Bloch3 bloch_from_density(const Mat2& m) {
    return {(m[1] + m[2]).real(), (C(0, 1) * (m[1] - m[2])).real(),
            (m[0] - m[3]).real()};
}

// Increment of the measurement master equation in matrix form:
// -2g (rho - sx rho sx) dt + sqrt(2g) (sx rho + rho sx - 2<sx> rho) dW
inline Bloch3 sme_increment_matrix(double x, double y, double z, double dW, double dt,
                                   double gamma) {
    const Mat2 rho = density_from_bloch(x, y, z);
    const Mat2 sxr = mul(kSigmaX, rho);
    const Mat2 rsx = mul(rho, kSigmaX);
    const double mean_x = (sxr[0] + sxr[3]).real();
    const Mat2 det = C(-2.0 * gamma * dt) * (rho - mul(sxr, kSigmaX));
    const Mat2 sto = C(std::sqrt(2.0 * gamma) * dW) * (sxr + rsx - C(2.0 * mean_x) * rho);
    return bloch_from_density(det + sto);
}

}  // namespace qd::test
