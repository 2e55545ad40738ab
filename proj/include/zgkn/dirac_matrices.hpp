#pragma once

#include <Eigen/Dense>
#include <complex>

namespace zgkn {

using cplx = std::complex<double>;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;
using Mat2c = Eigen::Matrix2cd;

/// Weyl-representation Dirac matrices with upper indices:
/// gamma^0 = offdiag(I,I), gamma^k = [[0, -sigma_k], [sigma_k, 0]], so that
/// gamma^mu gamma^nu + gamma^nu gamma^mu = 2 eta^{mu nu}.
namespace dirac {

inline const Mat2c& sigma(int k) {
    static const Mat2c s1 = (Mat2c() << 0, 1, 1, 0).finished();
    static const Mat2c s2 = (Mat2c() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    static const Mat2c s3 = (Mat2c() << 1, 0, 0, -1).finished();
    static const Mat2c* ss[3] = {&s1, &s2, &s3};
    return *ss[k - 1];
}

inline const Mat4c& gamma(int mu) {
    static const auto make = [] {
        std::array<Mat4c, 4> g;
        g[0].setZero();
        g[0].block<2, 2>(0, 2) = Mat2c::Identity();
        g[0].block<2, 2>(2, 0) = Mat2c::Identity();
        for (int k = 1; k <= 3; ++k) {
            g[k].setZero();
            g[k].block<2, 2>(0, 2) = -sigma(k);
            g[k].block<2, 2>(2, 0) = sigma(k);
        }
        return g;
    };
    static const std::array<Mat4c, 4> g = make();
    return g[mu];
}

/// alpha^k = gamma^0 gamma^k = diag(sigma_k, -sigma_k).
inline const Mat4c& alpha(int k) {
    static const auto make = [] {
        std::array<Mat4c, 3> a;
        for (int i = 1; i <= 3; ++i) a[i - 1] = gamma(0) * gamma(i);
        return a;
    };
    static const std::array<Mat4c, 3> a = make();
    return a[k - 1];
}

/// Doubled spin matrices S_k = diag(sigma_k, sigma_k).
inline const Mat4c& spin(int k) {
    static const auto make = [] {
        std::array<Mat4c, 3> s;
        for (int i = 1; i <= 3; ++i) {
            s[i - 1].setZero();
            s[i - 1].block<2, 2>(0, 0) = sigma(i);
            s[i - 1].block<2, 2>(2, 2) = sigma(i);
        }
        return s;
    };
    static const std::array<Mat4c, 3> s = make();
    return s[k - 1];
}

} // namespace dirac
} // namespace zgkn
