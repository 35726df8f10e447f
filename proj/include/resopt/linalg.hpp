#pragma once

#include <array>
#include <cmath>

namespace resopt {

using Vec3 = std::array<double, 3>;

/// Dense 3x3 matrix, row-major. Just enough linear algebra for the
/// three-state system and its adjoint; nothing general-purpose.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    Mat3 transposed() const {
        Mat3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                t(i, j) = (*this)(j, i);
        return t;
    }
};

inline Vec3 operator*(const Mat3& m, const Vec3& x) {
    Vec3 y;
    for (int i = 0; i < 3; ++i)
        y[i] = m(i, 0) * x[0] + m(i, 1) * x[1] + m(i, 2) * x[2];
    return y;
}

/// I + c*A
inline Mat3 identity_plus(const Mat3& m, double c) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = c * m.a[i];
    r(0, 0) += 1.0;
    r(1, 1) += 1.0;
    r(2, 2) += 1.0;
    return r;
}

/// Solve m*x = b by Gaussian elimination with partial pivoting.
/// Returns false when the matrix is numerically singular.
inline bool solve3(const Mat3& m, const Vec3& b, Vec3& x) {
    double a[3][4] = {
        {m(0, 0), m(0, 1), m(0, 2), b[0]},
        {m(1, 0), m(1, 1), m(1, 2), b[1]},
        {m(2, 0), m(2, 1), m(2, 2), b[2]},
    };
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (std::fabs(a[piv][c]) < 1e-300) return false;
        if (piv != c)
            for (int j = c; j < 4; ++j) std::swap(a[c][j], a[piv][j]);
        for (int r = c + 1; r < 3; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int j = c; j < 4; ++j) a[r][j] -= f * a[c][j];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = a[r][3];
        for (int j = r + 1; j < 3; ++j) s -= a[r][j] * x[j];
        x[r] = s / a[r][r];
    }
    return true;
}

}  // namespace resopt
