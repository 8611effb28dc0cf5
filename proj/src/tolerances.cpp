#include "filippov/tolerances.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

#include "filippov/errors.hpp"

namespace filippov {

namespace {

// name -> member; max_order is handled separately because it is an integer
double* slot(Tolerances& t, const std::string& name) {
  if (name == "on_sigma") return &t.on_sigma;
  if (name == "tan") return &t.tan;
  if (name == "root") return &t.root;
  if (name == "event") return &t.event;
  if (name == "flow") return &t.flow;
  if (name == "speed") return &t.speed;
  if (name == "cycle") return &t.cycle;
  if (name == "dedup") return &t.dedup;
  if (name == "graze") return &t.graze;
  return nullptr;
}

const char* const kNames[] = {"on_sigma", "tan",   "root",  "event", "flow",
                              "speed",    "cycle", "dedup", "graze"};

}  // namespace

Tolerances Tolerances::scaled(double k) const {
  Tolerances t = *this;
  for (const char* n : kNames) *slot(t, n) *= k;
  return t;
}

void Tolerances::set(const std::string& name, double value) {
  if (name == "max_order") {
    if (value < 1 || value > 12 || value != static_cast<int>(value))
      throw ConfigError("max_order must be an integer in [1, 12]");
    max_order = static_cast<int>(value);
    return;
  }
  double* p = slot(*this, name);
  if (!p) throw ConfigError("unknown tolerance '" + name + "'");
  if (!(value >= 1e-14 && value <= 1e-2))
    throw ConfigError("tolerance " + name + " = " + std::to_string(value) +
                      " outside [1e-14, 1e-2]");
  *p = value;
}

Tolerances Tolerances::with_env_overrides() const {
  Tolerances t = *this;
  auto read = [&](std::string name) {
    std::string env = "FILIPPOV_TOL_";
    for (char c : name) env += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const char* v = std::getenv(env.c_str());
    if (!v) return;
    char* end = nullptr;
    const double d = std::strtod(v, &end);
    if (end == v || *end != '\0') throw ConfigError(env + " is not a number: " + v);
    t.set(name, d);
  };
  for (const char* n : kNames) read(n);
  read("max_order");
  return t;
}

}  // namespace filippov
