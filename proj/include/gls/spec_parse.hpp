#pragma once

#include <string>
#include <vector>

#include "gls/linalg.hpp"
#include "gls/psi.hpp"
#include "gls/test_function.hpp"

namespace gls {

/// "1,2.5,inf" -> {1, 2.5, inf}.
Vec parse_list(const std::string& text);
/// Rows separated by ';', entries by ',': "1,1;0,1".
Matrix parse_matrix(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// kind:args with ';' between arguments, e.g.
///   constant:2;1;inf   power:2;1.5;8   tilde:1;1;2
/// The interval arguments are optional (default (1, inf)).
PsiFunction parse_psi(const std::string& spec);

/// kind:args with ';' between arguments and ',' inside vectors, e.g.
///   gaussian:0,0;1,2        box:0,0;1,1        ellipsoid:0,0;1,2;1
///   ball:3;1                simplex:0,0;1,1    power:2;0.5;1
/// or a JSON object {"kind": "box", "origin": [0, 0], "sides": [1, 1]}.
TestFunction parse_function(const std::string& spec);

}  // namespace gls
