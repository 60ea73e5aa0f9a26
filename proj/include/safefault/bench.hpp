#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "safefault/netlist.hpp"

namespace safefault {

// Reads the ISCAS-89 bench dialect:
//
//   INPUT(name)  OUTPUT(name)  name = KIND(name, name, ...)
//
// with '#' comments. Statements may share a line. Net ids are assigned in
// order of first appearance; INPUT/OUTPUT declaration order fixes the port
// lists. Throws ParseError (syntax, duplicate name, undriven or multiply
// driven net, unknown gate kind, bad fan-in, combinational cycle).
Netlist parse_bench(std::string_view text);
Netlist read_bench_file(const std::filesystem::path& path);

std::string write_bench(const Netlist& netlist);

}  // namespace safefault
