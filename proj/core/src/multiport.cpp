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

#include "metaprism/multiport.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "metaprism/parallel.hpp"

namespace mtp {

Eigen::Vector3d unit_vector(const Direction& dir) {
    dir.validate();
    double st = std::sin(dir.theta);
    return {std::cos(dir.theta), st * std::cos(dir.phi), st * std::sin(dir.phi)};
}

Eigen::Vector3d radial_position(const Direction& dir, double distance_m) {
    if (distance_m <= 0.0) throw validation_error("link distance must be positive");
    return distance_m * unit_vector(dir);
}

ImpedanceMatrix build_impedance_matrix(const MtpGeometry& geom, const DipoleSpec& spec,
                                       const Eigen::Vector3d& tx_pos,
                                       const Eigen::Vector3d& rx_pos,
                                       double frequency_hz) {
    spec.validate();
    int n = geom.element_count();
    int ports = n + 2;
    std::vector<Eigen::Vector3d> pos(ports);
    pos[0] = tx_pos;
    for (int i = 0; i < n; ++i) pos[i + 1] = geom.position(i);
    pos[ports - 1] = rx_pos;

    ImpedanceMatrix zm;
    zm.element_count = n;
    zm.frequency_hz = frequency_hz;
    zm.z.resize(ports, ports);
    cplx self = self_impedance(spec, frequency_hz);
    parallel_for(ports, [&](int a) {
        zm.z(a, a) = self;
        for (int b = a + 1; b < ports; ++b)
            zm.z(a, b) = mutual_impedance(spec, pos[a], pos[b], frequency_hz);
    });
    for (int a = 0; a < ports; ++a)
        for (int b = 0; b < a; ++b) zm.z(a, b) = zm.z(b, a);
    return zm;
}

Eigen::MatrixXcd z_to_s(const Eigen::MatrixXcd& z, double z0) {
    if (z0 <= 0.0) throw validation_error("reference impedance must be positive");
    if (z.rows() != z.cols()) throw validation_error("impedance matrix must be square");
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(z.rows(), z.cols());
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(z + z0 * eye);
    if (!lu.isInvertible())
        throw numerical_error("Z + Z0 I is singular, rcond = " + std::to_string(lu.rcond()));
    return lu.solve(z - z0 * eye);
}

Eigen::MatrixXcd s_to_z(const Eigen::MatrixXcd& s, double z0) {
    if (z0 <= 0.0) throw validation_error("reference impedance must be positive");
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(eye - s);
    if (!lu.isInvertible())
        throw numerical_error("I - S is singular, rcond = " + std::to_string(lu.rcond()));
    return z0 * lu.solve(Eigen::MatrixXcd(eye + s));
}

MultiportNetwork z_to_s_partition(const ImpedanceMatrix& zm, double z0) {
    int n = zm.element_count;
    if (zm.z.rows() != n + 2)
        throw validation_error("impedance matrix does not have N + 2 ports");
    Eigen::MatrixXcd s = z_to_s(zm.z, z0);
    MultiportNetwork net;
    net.z0 = z0;
    net.frequency_hz = zm.frequency_hz;
    net.s_rt = s(n + 1, 0);
    net.s_mt = s.block(1, 0, n, 1);
    net.s_rm = s.block(n + 1, 1, 1, n);
    net.s_ss = s.block(1, 1, n, n);
    return net;
}

MultiportNetwork MultiportNetwork::without_coupling() const {
    MultiportNetwork net = *this;
    net.s_ss.setZero();
    return net;
}

MultiportNetwork MultiportNetwork::without_structural() const {
    MultiportNetwork net = *this;
    net.s_rt = 0.0;
    return net;
}

cplx realistic_channel(const MultiportNetwork& net, const Eigen::VectorXcd& gamma) {
    int n = net.element_count();
    if (gamma.size() != n) throw validation_error("reflection vector size mismatch");
    Eigen::MatrixXcd m = -net.s_ss;
    for (int i = 0; i < n; ++i) {
        if (std::abs(std::abs(gamma[i]) - 1.0) > 1e-9)
            throw validation_error("reflection coefficients must have unit modulus");
        m(i, i) += 1.0 / gamma[i];
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    Eigen::VectorXcd x = lu.solve(net.s_mt);
    double residual = (m * x - net.s_mt).norm();
    if (!(residual <= 1e-8 * net.s_mt.norm() + 1e-300))
        throw numerical_error("loaded network solve failed at f = " +
                              std::to_string(net.frequency_hz));
    return net.s_rt + (net.s_rm * x).value();
}

} // namespace mtp
