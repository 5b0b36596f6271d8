// Normalized DFT used for mismatch sequences and spectrum measurement.
//
//   u~_k = (1/N) sum_n exp(-2 pi j k n / N) u_n
//
// The 1/N sits on the forward transform so that |u~_k|^2 is an average power
// independent of N. The inverse carries no scale factor.
#ifndef TIADC_DFT_HPP
#define TIADC_DFT_HPP

#include "tiadc/core.hpp"

#include <unsupported/Eigen/FFT>

#include <numbers>
#include <type_traits>

namespace tiadc {

using ComplexSequence = Eigen::VectorXcd;

template <typename Derived>
using dft_result_t = ComplexVector<typename Eigen::NumTraits<typename Derived::Scalar>::Real>;

/// Forward transform with 1/N normalization. Real input yields an exactly
/// Hermitian result (u~_{N-k} = conj(u~_k)).
template <typename Derived> dft_result_t<Derived> dft(const Eigen::MatrixBase<Derived>& x) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (x.size() == 0)
        throw ValidationError("dft: empty input");

    const Index n = x.size();
    dft_result_t<Derived> out(n);
    if (n == 1) {  // kissfft does not handle a length-1 plan
        out(0) = x(0);
        return out;
    }
    Eigen::FFT<Real> fft;
    if constexpr (Eigen::NumTraits<typename Derived::Scalar>::IsComplex) {
        const ComplexVector<Real> in = x;
        fft.fwd(out, in);
    } else {
        const Vector<Real> in = x;
        fft.fwd(out, in);
    }
    out /= static_cast<Real>(n);
    return out;
}

/// Inverse of dft(): sum_k exp(+2 pi j k n / N) u~_k, no scale factor.
template <typename Derived> dft_result_t<Derived> idft(const Eigen::MatrixBase<Derived>& u) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (u.size() == 0)
        throw ValidationError("idft: empty input");

    const ComplexVector<Real> in = u.template cast<std::complex<Real>>();
    dft_result_t<Derived> out(u.size());
    if (u.size() == 1) {
        out(0) = in(0);
        return out;
    }
    Eigen::FFT<Real> fft;
    fft.SetFlag(Eigen::FFT<Real>::Unscaled);
    fft.inv(out, in);
    return out;
}

/// Rows [first, first + count) of the normalized DFT matrix F, with
/// F(k, n) = exp(-2 pi j k n / N) / N. Row N-k is stored as the exact
/// conjugate of row k.
template <typename Real = double>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> dft_matrix(Index n, Index first = 0,
                                                                               Index count = -1) {
    if (n < 1)
        throw ValidationError("dft_matrix: N must be positive");
    if (count < 0)
        count = n - first;
    if (first < 0 || first + count > n)
        throw ValidationError("dft_matrix: row range out of bounds");

    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> f(count, n);
    const Real inv_n = Real(1) / static_cast<Real>(n);
    for (Index r = 0; r < count; ++r) {
        const Index k = first + r;
        // Evaluate on the canonical half so that mirrored rows conjugate exactly.
        const bool mirrored = k > n / 2;
        const Index kk = mirrored ? n - k : k;
        for (Index col = 0; col < n; ++col) {
            const Index m = (kk * col) % n;
            const Real angle = -Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(m) / static_cast<Real>(n);
            std::complex<Real> w = std::polar(inv_n, angle);
            if (2 * m == n)
                w = {-inv_n, Real(0)};
            f(r, col) = mirrored ? std::conj(w) : w;
        }
    }
    return f;
}

} // namespace tiadc

#endif // TIADC_DFT_HPP
