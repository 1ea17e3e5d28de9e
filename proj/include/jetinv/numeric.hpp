#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "jetinv/jet.hpp"

namespace jetinv {

/// Numeric rank: singular values above tol times the largest one.
inline int svd_rank(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;
    return rank;
}

constexpr double kDefaultRankTolerance = 1e-8;

/// Deterministic per-sample random stream: the generator is seeded from a
/// splitmix64 hash of (seed, stream), and doubles are drawn from raw bits so
/// results do not depend on the standard library's distribution internals.
class SampleRng {
  public:
    SampleRng(std::uint64_t seed, std::uint64_t stream) : gen_(mix(seed, stream)) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform over [-2,-0.5] U [0.5,2]; keeps samples away from the
    /// singular hyperplanes.
    double coordinate() {
        double magnitude = 0.5 + 1.5 * uniform01();
        return (gen_() & 1) ? magnitude : -magnitude;
    }

  private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        return x;
    }

    std::mt19937_64 gen_;
};

/// Random chart point with every coordinate in [-2,-0.5] U [0.5,2]. Generic
/// points sampled this way are regular; the guard below resamples in the
/// (unreachable by construction) event of a near-singular draw.
inline JetPoint sample_jet_point(const JetContext& ctx, std::uint64_t seed, std::uint64_t stream) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        SampleRng rng(seed, stream + 0x51700000ull * attempt);
        std::map<std::string, double> values;
        for (const auto& name : ctx.coordinates()) values[name] = rng.coordinate();
        bool near_singular = false;
        for (const char* guard : {"z", "z_y", "z_u"}) {
            auto it = values.find(guard);
            if (it != values.end() && std::abs(it->second) < 0.1) near_singular = true;
        }
        if (!near_singular) return JetPoint(ctx, std::move(values));
    }
}

/// Stratum point: y = u = 0, fiber coordinates generic.
inline JetPoint sample_stratum_point(const JetContext& ctx, std::uint64_t seed,
                                     std::uint64_t stream) {
    SampleRng rng(seed, stream);
    std::map<std::string, double> values;
    for (const auto& name : ctx.fiber_coordinates()) values[name] = rng.coordinate();
    values["y"] = 0.0;
    values["u"] = 0.0;
    return JetPoint(ctx, std::move(values));
}

}  // namespace jetinv
