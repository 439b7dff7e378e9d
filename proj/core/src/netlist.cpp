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

#include "metaprism/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace mtp {

namespace {

struct Suffix {
    const char* text;
    double scale;
};

// SPICE engineering suffixes, largest scale first for formatting.
const Suffix kSuffixes[] = {
    {"t", 1e12}, {"g", 1e9}, {"meg", 1e6}, {"k", 1e3}, {"", 1.0},
    {"m", 1e-3}, {"u", 1e-6}, {"n", 1e-9}, {"p", 1e-12}, {"f", 1e-15},
};

std::string format_mantissa(double m) {
    std::ostringstream out;
    out << std::setprecision(6) << m;
    return out.str();
}

} // namespace

std::string spice_value(double value) {
    if (!std::isfinite(value)) throw validation_error("non-finite component value");
    if (value == 0.0) return "0";
    double mag = std::abs(value);
    for (const Suffix& s : kSuffixes) {
        double mant = mag / s.scale;
        if (mant >= 1.0 && mant < 1000.0)
            return (value < 0.0 ? "-" : "") + format_mantissa(mant) + s.text;
    }
    // out of suffix range, plain scientific
    std::ostringstream out;
    out << std::setprecision(6) << value;
    return out.str();
}

double parse_spice_value(const std::string& token) {
    if (token.empty()) throw validation_error("empty component value");
    std::size_t pos = 0;
    double mant;
    try {
        mant = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw validation_error("bad component value: " + token);
    }
    std::string suffix = token.substr(pos);
    std::transform(suffix.begin(), suffix.end(), suffix.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    for (const Suffix& s : kSuffixes)
        if (suffix == s.text) return mant * s.scale;
    throw validation_error("unknown value suffix: " + token);
}

std::string netlist_subcircuit(const FosterCircuit& circuit, const std::string& name) {
    circuit.require_realizable();
    std::ostringstream out;
    out << "* element " << circuit.element << " load, " << circuit.sections.size()
        << " section(s)\n";
    out << ".SUBCKT " << name << " port gnd\n";
    if (circuit.sections.empty()) {
        out << "R1 port gnd 0\n"; // short-circuit load
    } else {
        for (std::size_t p = 0; p < circuit.sections.size(); ++p) {
            std::string a = p == 0 ? "port" : "n" + std::to_string(p);
            std::string b = p + 1 == circuit.sections.size() ? "gnd"
                                                             : "n" + std::to_string(p + 1);
            out << 'L' << p + 1 << ' ' << a << ' ' << b << ' '
                << spice_value(circuit.sections[p].l_henry) << '\n';
            out << 'C' << p + 1 << ' ' << a << ' ' << b << ' '
                << spice_value(circuit.sections[p].c_farad) << '\n';
        }
    }
    out << ".ENDS " << name << '\n';
    return out.str();
}

void write_netlist(const std::string& path, const FosterCircuit& circuit,
                   const std::string& name) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out << netlist_subcircuit(circuit, name);
}

FosterCircuit parse_netlist(std::istream& in) {
    FosterCircuit circ;
    std::map<int, FosterSection> sections;
    std::string line;
    bool in_subckt = false, ended = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        std::stringstream row(line);
        std::string head;
        row >> head;
        if (head == ".SUBCKT") { in_subckt = true; continue; }
        if (head == ".ENDS") { ended = true; break; }
        if (!in_subckt) throw validation_error("component line outside .SUBCKT");
        char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(head[0])));
        if (kind == 'R') continue; // short-circuit stub
        if (kind != 'L' && kind != 'C')
            throw validation_error("unsupported netlist element: " + head);
        int index = std::stoi(head.substr(1));
        std::string node_a, node_b, value;
        row >> node_a >> node_b >> value;
        if (value.empty()) throw validation_error("short component line: " + line);
        double v = parse_spice_value(value);
        if (kind == 'L') sections[index].l_henry = v;
        else sections[index].c_farad = v;
    }
    if (!in_subckt || !ended) throw validation_error("netlist has no complete .SUBCKT");
    int expected = 1;
    for (const auto& [index, section] : sections) {
        if (index != expected++)
            throw validation_error("non-contiguous section numbering in netlist");
        if (section.l_henry <= 0.0 || section.c_farad <= 0.0)
            throw validation_error("netlist section " + std::to_string(index) +
                                   " is incomplete");
        circ.sections.push_back(section);
    }
    return circ;
}

FosterCircuit parse_netlist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open for reading: " + path);
    return parse_netlist(in);
}

} // namespace mtp
