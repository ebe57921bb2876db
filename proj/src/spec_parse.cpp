#include "gls/spec_parse.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "gls/error.hpp"

namespace gls {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || std::isnan(v)) {
    throw ConfigError("not a number: '" + raw + "'");
  }
  return v;
}

std::pair<std::string, std::vector<std::string>> kind_and_args(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = trim(spec.substr(0, colon));
  std::vector<std::string> args;
  if (colon != std::string::npos) args = split(spec.substr(colon + 1), ';');
  return {kind, args};
}

void expect_args(const std::string& kind, const std::vector<std::string>& args, std::size_t lo,
                 std::size_t hi) {
  if (args.size() < lo || args.size() > hi) {
    std::ostringstream s;
    s << kind << ": expected " << lo;
    if (hi != lo) s << " to " << hi;
    s << " arguments, got " << args.size();
    throw ConfigError(s.str());
  }
}

int as_dim(double v) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 16.0) throw ConfigError("dimension must be an integer in 1..16");
  return static_cast<int>(v);
}

TestFunction function_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  auto vec = [&](const char* key) { return j.contains(key) ? j.at(key).get<Vec>() : Vec{}; };
  auto num = [&](const char* key, double dflt) { return j.contains(key) ? j.at(key).get<double>() : dflt; };
  if (kind == "gaussian") return TestFunction::gaussian(vec("center"), vec("scales"), num("amplitude", 1.0));
  if (kind == "box") return TestFunction::box(vec("origin"), vec("sides"));
  if (kind == "ellipsoid") return TestFunction::ellipsoid(vec("center"), vec("semi_axes"), num("radius", 1.0));
  if (kind == "ball") return TestFunction::ball(as_dim(num("dim", 0.0)), num("radius", 1.0));
  if (kind == "simplex") return TestFunction::simplex(vec("origin"), vec("scales"));
  if (kind == "power") {
    return TestFunction::power_decay(as_dim(num("dim", 0.0)), num("gamma", 0.0), num("radius", 1.0), vec("center"));
  }
  throw ConfigError("unknown function kind: " + kind);
}

}  // namespace

Vec parse_list(const std::string& text) {
  Vec out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(text)) out.push_back(as_dim(v));
  return out;
}

Matrix parse_matrix(const std::string& text) {
  std::vector<Vec> rows;
  for (const std::string& r : split(text, ';')) rows.push_back(parse_list(r));
  if (rows.empty()) throw ConfigError("empty matrix");
  Matrix a(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ConfigError("matrix rows differ in length");
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
  }
  return a;
}

PsiFunction parse_psi(const std::string& spec) {
  const auto [kind, args] = kind_and_args(spec);
  auto interval = [&](std::size_t first, double& a, double& b) {
    a = args.size() > first ? parse_number(args[first]) : 1.0;
    b = args.size() > first + 1 ? parse_number(args[first + 1]) : kInf;
  };
  double a = 1.0, b = kInf;
  if (kind == "constant") {
    expect_args(kind, args, 1, 3);
    interval(1, a, b);
    return psi_constant(parse_number(args[0]), a, b);
  }
  if (kind == "power") {
    expect_args(kind, args, 1, 3);
    interval(1, a, b);
    return psi_power(parse_number(args[0]), a, b);
  }
  if (kind == "tilde") {
    expect_args(kind, args, 3, 3);
    return psi_tilde(parse_number(args[0]), parse_number(args[1]), parse_number(args[2])).function();
  }
  throw ConfigError("unknown psi kind: " + kind + " (constant, power, tilde)");
}

TestFunction parse_function(const std::string& spec) {
  const std::string s = trim(spec);
  if (!s.empty() && s.front() == '{') {
    try {
      return function_from_json(nlohmann::json::parse(s));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad function JSON: ") + e.what());
    }
  }
  const auto [kind, args] = kind_and_args(s);
  if (kind == "gaussian") {
    expect_args(kind, args, 2, 2);
    return TestFunction::gaussian(parse_list(args[0]), parse_list(args[1]));
  }
  if (kind == "box") {
    expect_args(kind, args, 2, 2);
    return TestFunction::box(parse_list(args[0]), parse_list(args[1]));
  }
  if (kind == "ellipsoid") {
    expect_args(kind, args, 2, 3);
    return TestFunction::ellipsoid(parse_list(args[0]), parse_list(args[1]),
                                   args.size() > 2 ? parse_number(args[2]) : 1.0);
  }
  if (kind == "ball") {
    expect_args(kind, args, 1, 2);
    return TestFunction::ball(as_dim(parse_number(args[0])), args.size() > 1 ? parse_number(args[1]) : 1.0);
  }
  if (kind == "simplex") {
    expect_args(kind, args, 2, 2);
    return TestFunction::simplex(parse_list(args[0]), parse_list(args[1]));
  }
  if (kind == "power") {
    expect_args(kind, args, 2, 4);
    return TestFunction::power_decay(as_dim(parse_number(args[0])), parse_number(args[1]),
                                     args.size() > 2 ? parse_number(args[2]) : 1.0,
                                     args.size() > 3 ? parse_list(args[3]) : Vec{});
  }
  throw ConfigError("unknown function kind: " + kind +
                    " (gaussian, box, ellipsoid, ball, simplex, power)");
}

}  // namespace gls
