// SPDX-License-Identifier: Apache-2.0
//
// metaprism -- design and simulation toolkit for frequency-selective
// reflecting metasurfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "metaprism/multipath.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace mtp {

namespace {

// Composite Simpson over [-pi/2, pi/2] on an odd grid.
double simpson(const std::function<double(double)>& f, int points) {
    if (points < 3) throw validation_error("quadrature grid too small");
    if (points % 2 == 0) ++points;
    double a = -kPi / 2.0, b = kPi / 2.0;
    double h = (b - a) / (points - 1);
    double acc = f(a) + f(b);
    for (int i = 1; i < points - 1; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

std::vector<double> simpson_weights(int points) {
    if (points % 2 == 0) ++points;
    double h = kPi / (points - 1);
    std::vector<double> w(points, 0.0);
    w.front() = w.back() = h / 3.0;
    for (int i = 1; i < points - 1; ++i) w[i] = (i % 2 ? 4.0 : 2.0) * h / 3.0;
    return w;
}

// Ideal reflection coefficients of the band sample f_k (phi = 0 analysis plane).
Eigen::VectorXcd ideal_gamma(const MtpGeometry& geom, const AngleFrequencyMap& map,
                             const Direction& incidence, double f_k) {
    Eigen::VectorXcd g(geom.element_count());
    for (int n = 0; n < geom.element_count(); ++n)
        g[n] = std::polar(1.0, ideal_phase(geom, map, incidence, 0.0, f_k, n));
    return g;
}

void check_spec(const MultipathSpec& spec) {
    if (!spec.gain) throw validation_error("multipath spec has no angular gain function");
    if (spec.kappa < 0.0) throw validation_error("Rician factor must be non-negative");
    double norm = spec.normalization();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6)
        throw numerical_error("angular scattering distribution is not normalized (int s^2 = " +
                              std::to_string(norm) + ")");
}

} // namespace

MultipathSpec MultipathSpec::isotropic(double kappa) {
    MultipathSpec spec;
    spec.kappa = kappa;
    spec.gain = [](double) { return 1.0 / std::sqrt(kPi); };
    return spec;
}

MultipathSpec MultipathSpec::von_mises(double kappa, double theta0, double concentration) {
    auto mass = [theta0, concentration](double theta) {
        return std::exp(concentration * std::cos(theta - theta0));
    };
    double z = simpson(mass, 20001);
    MultipathSpec spec;
    spec.kappa = kappa;
    spec.gain = [mass, z](double theta) { return std::sqrt(mass(theta) / z); };
    return spec;
}

MultipathSpec MultipathSpec::concentrated(double kappa, double theta0, double sigma_rad) {
    if (sigma_rad <= 0.0) throw validation_error("angular width must be positive");
    auto mass = [theta0, sigma_rad](double theta) {
        double t = (theta - theta0) / sigma_rad;
        return std::exp(-0.5 * t * t);
    };
    double z = simpson(mass, 20001);
    MultipathSpec spec;
    spec.kappa = kappa;
    spec.gain = [mass, z](double theta) { return std::sqrt(mass(theta) / z); };
    return spec;
}

double MultipathSpec::normalization() const {
    if (!gain) throw validation_error("multipath spec has no angular gain function");
    auto s2 = [this](double theta) { double s = gain(theta); return s * s; };
    return simpson(s2, grid_points);
}

double diffuse_power(const MultipathSpec& spec, const MtpGeometry& geom,
                     const AngleFrequencyMap& map, const Direction& incidence,
                     double f_k) {
    check_spec(spec);
    Eigen::VectorXcd gamma = ideal_gamma(geom, map, incidence, f_k);
    double f0 = map.band().f0;
    auto integrand = [&](double theta) {
        double s = spec.gain(theta);
        cplx h = ideal_channel_gain(geom, gamma, incidence, {theta, 0.0}, f0);
        return s * s * std::norm(h);
    };
    return simpson(integrand, spec.grid_points);
}

double effective_rician_factor(const MultipathSpec& spec, const MtpGeometry& geom,
                               const AngleFrequencyMap& map, const Direction& incidence,
                               double f_k) {
    check_spec(spec);
    if (spec.kappa == 0.0) return 0.0;
    double theta_k = map.angle_at(f_k);
    Eigen::VectorXcd gamma = ideal_gamma(geom, map, incidence, f_k);
    double peak = std::norm(ideal_channel_gain(geom, gamma, incidence, {theta_k, 0.0},
                                               map.band().f0));
    if (peak <= 0.0) throw numerical_error("beam peak gain vanished");
    double denom = diffuse_power(spec, geom, map, incidence, f_k) / peak;
    if (denom <= 0.0)
        throw numerical_error("multipath quadrature did not converge (zero diffuse power)");
    return spec.kappa / denom;
}

MultipathSampler::MultipathSampler(const MultipathSpec& spec, const MtpGeometry& geom,
                                   const AngleFrequencyMap& map, const Direction& incidence,
                                   double f_k)
    : kappa_(spec.kappa) {
    check_spec(spec);
    double theta_k = map.angle_at(f_k);
    Eigen::VectorXcd gamma = ideal_gamma(geom, map, incidence, f_k);
    double f0 = map.band().f0;
    los_ = ideal_channel_gain(geom, gamma, incidence, {theta_k, 0.0}, f0);

    int points = spec.grid_points % 2 ? spec.grid_points : spec.grid_points + 1;
    std::vector<double> w = simpson_weights(points);
    double h_step = kPi / (points - 1);
    coef_.resize(points);
    for (int i = 0; i < points; ++i) {
        double theta = -kPi / 2.0 + i * h_step;
        cplx h = ideal_channel_gain(geom, gamma, incidence, {theta, 0.0}, f0);
        // sqrt(weight) scaling keeps the white-process variance of the
        // discretized integral equal to the continuous one
        coef_[i] = std::sqrt(w[i]) * spec.gain(theta) * h;
    }
}

cplx MultipathSampler::draw(std::uint64_t seed) const {
    if (std::isinf(kappa_)) return los_;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
    cplx diffuse = 0.0;
    for (const cplx& c : coef_) {
        cplx z{gauss(rng), gauss(rng)};
        diffuse += c * z;
    }
    return std::sqrt(kappa_ / (kappa_ + 1.0)) * los_ +
           std::sqrt(1.0 / (kappa_ + 1.0)) * diffuse;
}

double MultipathSampler::diffuse_power() const {
    double p = 0.0;
    for (const cplx& c : coef_) p += std::norm(c);
    return p;
}

cplx multipath_channel_draw(const MultipathSpec& spec, const MtpGeometry& geom,
                            const AngleFrequencyMap& map, const Direction& incidence,
                            double f_k, std::uint64_t seed) {
    return MultipathSampler(spec, geom, map, incidence, f_k).draw(seed);
}

} // namespace mtp
