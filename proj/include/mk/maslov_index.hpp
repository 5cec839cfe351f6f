#pragma once

// Winding numbers of sampled circle-valued loops and the Maslov index of
// loops of totally real frames, mu = deg det(A)^2 / det(A^* A).

#include "mk/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mk {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

inline constexpr int default_loop_samples = 256;

/// Largest accepted phase increment between consecutive samples. A loop
/// whose true increment exceeds pi is indistinguishable from one that winds
/// the other way, so the guard sits well below that.
inline constexpr double max_phase_step = std::numbers::pi / 2.0;

/// Ordered unit-modulus samples of a closed loop; the last sample connects
/// back to the first.
class CircleSamples {
public:
    explicit CircleSamples(std::vector<cplx> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("CircleSamples: empty loop");
        for (const auto& v : values_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(std::abs(v) - 1.0) > 1e-9)
                throw std::invalid_argument("CircleSamples: value is not of unit modulus");
    }
    const std::vector<cplx>& values() const { return values_; }

private:
    std::vector<cplx> values_;
};

inline int winding_number(const CircleSamples& s) {
    const auto& v = s.values();
    const std::size_t n = v.size();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double step = std::arg(v[(j + 1) % n] / v[j]);
        if (std::abs(step) > max_phase_step) throw NumericalError("winding_number: loop is undersampled");
        total += step;
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6) throw NumericalError("winding_number: phase sum is not an integer multiple of 2 pi");
    return static_cast<int>(rounded);
}

/// Samples A(e^{i phi_j}) of a loop of complex frames, phi_j strictly
/// increasing in [0, 2 pi).
class FrameLoop {
public:
    FrameLoop(std::vector<double> angles, std::vector<CMat> frames)
        : angles_(std::move(angles)), frames_(std::move(frames)) {
        if (angles_.empty() || angles_.size() != frames_.size())
            throw std::invalid_argument("FrameLoop: angle and frame counts differ or are zero");
        n_ = static_cast<int>(frames_.front().rows());
        for (std::size_t j = 0; j < frames_.size(); ++j) {
            if (frames_[j].rows() != n_ || frames_[j].cols() != n_)
                throw std::invalid_argument("FrameLoop: frames must be square of equal size");
            if (angles_[j] < 0.0 || angles_[j] >= 2.0 * std::numbers::pi)
                throw std::invalid_argument("FrameLoop: angle outside [0, 2 pi)");
            if (j > 0 && !(angles_[j] > angles_[j - 1]))
                throw std::invalid_argument("FrameLoop: angles must be strictly increasing");
        }
    }

    /// Uniformly sampled loop phi -> frame(phi).
    template <class Fn>
    static FrameLoop sample(Fn&& frame, int samples = default_loop_samples) {
        if (samples < 2) throw std::invalid_argument("FrameLoop::sample: need at least two samples");
        std::vector<double> angles;
        std::vector<CMat> frames;
        for (int j = 0; j < samples; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / samples;
            angles.push_back(phi);
            frames.push_back(frame(phi));
        }
        return FrameLoop(std::move(angles), std::move(frames));
    }

    int n() const { return n_; }
    const std::vector<double>& angles() const { return angles_; }
    const std::vector<CMat>& frames() const { return frames_; }

private:
    std::vector<double> angles_;
    std::vector<CMat> frames_;
    int n_ = 0;
};

inline constexpr double min_frame_det = 1e-12;

/// det(A)^2 / det(A^* A) = det(A)^2 / |det A|^2 for each sample, renormalized
/// to exact unit modulus.
inline CircleSamples maslov_phase_loop(const FrameLoop& loop) {
    std::vector<cplx> phases;
    phases.reserve(loop.frames().size());
    for (const auto& a : loop.frames()) {
        const cplx det = Eigen::PartialPivLU<CMat>(a).determinant();
        if (!(std::abs(det) > min_frame_det)) throw NumericalError("maslov: frame is (nearly) singular");
        const cplx ratio = det * det / std::norm(det);
        phases.push_back(ratio / std::abs(ratio));
    }
    return CircleSamples(std::move(phases));
}

inline int maslov(const FrameLoop& loop) { return winding_number(maslov_phase_loop(loop)); }

/// Frame of u^*TN along the boundary of the Bishop disk u_s in
/// C^2 x C^{n-2}: columns (i e^{i phi}, 0; 0), (-(s/C_s) e^{i phi}, 1; 0)
/// and the real unit vectors of the T^*L directions.
inline CMat bishop_boundary_frame(int n, double s, double phi) {
    if (n < 2) throw std::invalid_argument("bishop_boundary_frame: n must be >= 2");
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("bishop_boundary_frame: s must lie in [0, 1)");
    const double cs = std::sqrt(1.0 - s * s);
    const cplx e = std::polar(1.0, phi);
    CMat a = CMat::Zero(n, n);
    a(0, 0) = cplx(0.0, 1.0) * e;
    a(0, 1) = -(s / cs) * e;
    a(1, 1) = 1.0;
    for (int j = 2; j < n; ++j) a(j, j) = 1.0;
    return a;
}

inline FrameLoop bishop_boundary_loop(int n, double s, int samples = default_loop_samples) {
    return FrameLoop::sample([n, s](double phi) { return bishop_boundary_frame(n, s, phi); }, samples);
}

}  // namespace mk
