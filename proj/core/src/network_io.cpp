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

#include "metaprism/network_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace mtp {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open for reading: " + path);
    return in;
}

void emit(std::ostream& out, const char* block, int row, int col, cplx v) {
    out << block << ',' << row << ',' << col << ',' << v.real() << ',' << v.imag()
        << '\n';
}

} // namespace

void write_network_csv(std::ostream& out, const MultiportNetwork& net) {
    int n = net.element_count();
    out << std::setprecision(17);
    out << "# metaprism network,z0=" << net.z0 << ",f_hz=" << net.frequency_hz
        << ",elements=" << n << '\n';
    out << "block,row,col,re,im\n";
    emit(out, "s_rt", 0, 0, net.s_rt);
    for (int i = 0; i < n; ++i) emit(out, "s_mt", i, 0, net.s_mt[i]);
    for (int i = 0; i < n; ++i) emit(out, "s_rm", 0, i, net.s_rm[i]);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) emit(out, "s_ss", r, c, net.s_ss(r, c));
}

void write_network_csv(const std::string& path, const MultiportNetwork& net) {
    std::ofstream out = open_out(path);
    write_network_csv(out, net);
}

MultiportNetwork read_network_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# metaprism network", 0) != 0)
        throw validation_error("not a metaprism network CSV");
    MultiportNetwork net;
    int n = -1;
    std::stringstream header(line);
    std::string field;
    while (std::getline(header, field, ',')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "z0") net.z0 = std::stod(value);
        else if (key == "f_hz") net.frequency_hz = std::stod(value);
        else if (key == "elements") n = std::stoi(value);
    }
    if (n < 1) throw validation_error("network CSV missing element count");
    net.s_mt.setZero(n);
    net.s_rm.setZero(n);
    net.s_ss.setZero(n, n);
    std::getline(in, line); // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string block, tok;
        int r, c;
        double re, im;
        std::getline(row, block, ',');
        std::getline(row, tok, ','); r = std::stoi(tok);
        std::getline(row, tok, ','); c = std::stoi(tok);
        std::getline(row, tok, ','); re = std::stod(tok);
        if (!std::getline(row, tok, ',')) throw validation_error("short network CSV row");
        im = std::stod(tok);
        cplx v{re, im};
        if (block == "s_rt") net.s_rt = v;
        else if (block == "s_mt") net.s_mt[r] = v;
        else if (block == "s_rm") net.s_rm[c] = v;
        else if (block == "s_ss") net.s_ss(r, c) = v;
        else throw validation_error("unknown network block: " + block);
    }
    return net;
}

MultiportNetwork read_network_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    return read_network_csv(in);
}

void write_touchstone(std::ostream& out, const Eigen::MatrixXcd& s, double frequency_hz,
                      double z0) {
    if (s.rows() != s.cols()) throw validation_error("scattering matrix must be square");
    out << std::setprecision(17);
    out << "! metaprism scattering export, " << s.rows() << " ports\n";
    out << "# Hz S RI R " << z0 << '\n';
    out << frequency_hz;
    for (int r = 0; r < s.rows(); ++r) {
        for (int c = 0; c < s.cols(); ++c)
            out << ' ' << s(r, c).real() << ' ' << s(r, c).imag();
        out << '\n';
    }
}

void write_touchstone(const std::string& path, const Eigen::MatrixXcd& s,
                      double frequency_hz, double z0) {
    std::ofstream out = open_out(path);
    write_touchstone(out, s, frequency_hz, z0);
}

TouchstoneData read_touchstone(std::istream& in) {
    TouchstoneData data;
    std::string line;
    std::vector<double> numbers;
    bool have_options = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '!') continue;
        if (line[0] == '#') {
            std::stringstream opts(line);
            std::string tok;
            opts >> tok; // '#'
            std::string unit, param, fmt, rtok;
            opts >> unit >> param >> fmt >> rtok >> data.z0;
            if (unit != "Hz" || param != "S" || fmt != "RI")
                throw validation_error("unsupported Touchstone options: " + line);
            have_options = true;
            continue;
        }
        std::stringstream row(line);
        double v;
        while (row >> v) numbers.push_back(v);
    }
    if (!have_options) throw validation_error("Touchstone options line missing");
    if (numbers.size() < 3) throw validation_error("Touchstone data missing");
    data.frequency_hz = numbers.front();
    std::size_t values = numbers.size() - 1;
    auto ports = static_cast<int>(std::lround(std::sqrt(values / 2.0)));
    if (static_cast<std::size_t>(ports) * ports * 2 != values)
        throw validation_error("Touchstone data is not a square real/imag matrix");
    data.s.resize(ports, ports);
    std::size_t i = 1;
    for (int r = 0; r < ports; ++r)
        for (int c = 0; c < ports; ++c, i += 2)
            data.s(r, c) = {numbers[i], numbers[i + 1]};
    return data;
}

TouchstoneData read_touchstone(const std::string& path) {
    std::ifstream in = open_in(path);
    return read_touchstone(in);
}

MultiportNetwork partition_scattering(const Eigen::MatrixXcd& s, double z0,
                                      double frequency_hz) {
    int ports = static_cast<int>(s.rows());
    if (s.cols() != ports || ports < 3)
        throw validation_error("partition requires a square matrix with at least 3 ports");
    int n = ports - 2;
    MultiportNetwork net;
    net.z0 = z0;
    net.frequency_hz = frequency_hz;
    net.s_rt = s(ports - 1, 0);
    net.s_mt = s.block(1, 0, n, 1);
    net.s_rm = s.block(ports - 1, 1, 1, n);
    net.s_ss = s.block(1, 1, n, n);
    return net;
}

} // namespace mtp
