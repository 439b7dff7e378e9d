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

#pragma once

#include <iosfwd>
#include <string>

#include "metaprism/foster.hpp"

namespace mtp {

/// SPICE value with engineering suffix, 6 significant digits (1.59155p).
std::string spice_value(double value);
double parse_spice_value(const std::string& token);

/// One .SUBCKT per element load: a series chain of parallel-LC sections
/// between the port node and ground. Refuses non-realizable circuits.
std::string netlist_subcircuit(const FosterCircuit& circuit, const std::string& name);
void write_netlist(const std::string& path, const FosterCircuit& circuit,
                   const std::string& name);

/// Parses a subcircuit produced by netlist_subcircuit back into L/C pairs.
FosterCircuit parse_netlist(std::istream& in);
FosterCircuit parse_netlist_file(const std::string& path);

} // namespace mtp
