#pragma once

#include <Eigen/Geometry>

#include <random>
#include <vector>

// Hand-rolled generators over a fixed-seed mt19937.
namespace gen {

class Source {
public:
    explicit Source(std::uint32_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

    Eigen::Vector3d vec3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

    // Uniform over SO(3) via a normalized Gaussian quaternion.
    Eigen::Matrix3d rotation() {
        Eigen::Quaterniond q(normal(), normal(), normal(), normal());
        q.normalize();
        return q.toRotationMatrix();
    }

    // Small integer-valued samples so ties are common.
    std::vector<double> small_sample(int max_n, int max_value) {
        std::vector<double> out(static_cast<std::size_t>(integer(2, max_n)));
        for (auto& v : out) v = integer(0, max_value);
        return out;
    }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

}  // namespace gen
