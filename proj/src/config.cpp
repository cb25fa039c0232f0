#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bo4/cli_io.hpp"
#include "bo4/errors.hpp"
#include "bo4/format.hpp"

namespace bo4 {

namespace {

const std::vector<std::pair<Command, std::string>>& command_table() {
  static const std::vector<std::pair<Command, std::string>> t = {
      {Command::Evolve, "evolve"},           {Command::Identities, "identities"},
      {Command::Commutators, "commutators"}, {Command::Symbols, "symbols"},
      {Command::Gn, "gn"},                   {Command::Mollifier, "mollifier"},
      {Command::Loss, "loss"},               {Command::TwoSolution, "two-solution"},
      {Command::BonaSmith, "bona-smith"},    {Command::Conserve, "conserve"}};
  return t;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

std::vector<std::string> split_list(const std::string& key, const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) bad(key, "empty list element in '" + v + "'");
    out.push_back(item);
  }
  if (out.empty()) bad(key, "empty list");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  const char* b = v.c_str();
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(b, &end);
  if (end == b || *end != '\0' || errno == ERANGE) bad(key, "expected a number, got '" + v + "'");
  if (std::isnan(x)) bad(key, "NaN is not allowed");
  return x;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  return x;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(key, v)) out.push_back(to_double(key, s));
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& s : split_list(key, v)) out.push_back(to_int<int>(key, s));
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += fmt_exact(xs[i]);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += xs[i];
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

double* coeff_slot(CoefficientSet& c, int i) {
  double* slots[] = {&c.c1, &c.c2, &c.c3, &c.c4, &c.c5, &c.c6, &c.c7, &c.c8};
  return slots[i];
}

struct Key {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define BO4_NUM(field, help_text)                                                        \
  Key {                                                                                  \
    #field, help_text, [](RunConfig& c, const std::string& v) { c.field = to_double(#field, v); }, \
        [](const RunConfig& c) { return fmt_exact(c.field); }                              \
  }
#define BO4_INT(field, help_text)                                                             \
  Key {                                                                                       \
    #field, help_text, [](RunConfig& c, const std::string& v) { c.field = to_int<int>(#field, v); }, \
        [](const RunConfig& c) { return std::to_string(c.field); }                            \
  }
#define BO4_NUMS(field, help_text)                                                          \
  Key {                                                                                     \
    #field, help_text, [](RunConfig& c, const std::string& v) { c.field = to_doubles(#field, v); }, \
        [](const RunConfig& c) { return join(c.field); }                                    \
  }
#define BO4_INTS(field, help_text)                                                        \
  Key {                                                                                   \
    #field, help_text, [](RunConfig& c, const std::string& v) { c.field = to_ints(#field, v); }, \
        [](const RunConfig& c) { return join(c.field); }                                  \
  }
#define BO4_STR(field, help_text)                                                         \
  Key {                                                                                   \
    #field, help_text, [](RunConfig& c, const std::string& v) { c.field = v; },           \
        [](const RunConfig& c) { return c.field; }                                        \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = [] {
    std::vector<Key> v = {
        BO4_INT(n, "grid points; even, 8..2^20 (mollifier doubles it up to >= 4098)"),
        BO4_STR(preset, "coefficient preset: integrable | linear (c1..c8 override it)"),
    };
    for (int i = 0; i < 8; ++i) {
      const std::string name = "c" + std::to_string(i + 1);
      v.push_back(Key{name, "coefficient " + name + "; finite",
                      [i, name](RunConfig& c, const std::string& val) {
                        *coeff_slot(c.coeffs, i) = to_double(name, val);
                      },
                      [i](const RunConfig& c) {
                        RunConfig tmp = c;
                        return fmt_exact(*coeff_slot(tmp.coeffs, i));
                      }});
    }
    const std::vector<Key> rest = {
        BO4_NUM(s, "Sobolev index of norms and energies; >= 1"),
        BO4_NUM(s0, "threshold index; > 3.5"),
        BO4_NUM(s_prime, "index of the two-solution energy; 1 <= s_prime <= s"),
        BO4_NUMS(epsilon, "viscosity list; each in [0, 1). two-solution uses the first two"),
        BO4_INT(time_direction, "+1 forward, -1 backward"),
        BO4_NUM(dt, "time step; 0 = automatic (two-solution: 1e-4)"),
        BO4_NUM(t_end, "run length / experiment horizon; > 0"),
        BO4_INT(sample_every, "steps per sample; >= 1"),
        BO4_STR(scheme, "etdrk4 | ifrk4"),
        BO4_NUM(cfl, "automatic step factor; > 0"),
        BO4_NUM(Cs, "energy constant; 0 = smallest admissible power of two"),
        Key{"seed", "random seed; unsigned 64-bit",
            [](RunConfig& c, const std::string& v) { c.seed = to_int<std::uint64_t>("seed", v); },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
        BO4_STR(output, "output directory (overridden by --out)"),
        BO4_STR(data, "initial data: random | cos"),
        BO4_NUM(amplitude, "H^s norm of the initial data (two-solution: H^s_prime); > 0"),
        BO4_NUM(decay, "spectral decay exponent of random data / algebraic fields; > 0"),
        BO4_INT(max_mode, "highest mode of random data; -1 = all"),
        BO4_INT(samples, "random samples per check; >= 1"),
        BO4_INT(n_coarse, "coarse grid of refinement checks"),
        BO4_INT(n_fine, "fine grid of refinement checks; > n_coarse"),
        BO4_INTS(kinds, "commutator kinds; each 1..9"),
        BO4_NUMS(s_list, "s values of identity/commutator/symbol checks; each >= 0"),
        Key{"inequalities", "symbol inequalities: taylor2, leibniz, taylor1",
            [](RunConfig& c, const std::string& v) { c.inequalities = split_list("inequalities", v); },
            [](const RunConfig& c) { return join(c.inequalities); }},
        BO4_INT(box, "symbol scan radius R; >= 4 fit_radius"),
        BO4_INT(fit_radius, "symbol fit radius r; >= 16"),
        BO4_INTS(l_list, "Gagliardo-Nirenberg derivative orders; 0 <= l <= s - 1"),
        BO4_NUMS(p_list, "Gagliardo-Nirenberg exponents; each >= 2 (inf allowed)"),
        BO4_NUMS(alpha, "mollifier smoothness gaps; each in [0, s]"),
        BO4_INTS(k0, "packet wavenumbers of the loss experiment; each >= 2"),
        BO4_NUM(seed_amplitude, "low-mode seed of the loss experiment; >= 0"),
        BO4_NUM(loss_epsilon, "viscosity of the loss experiment; in [0, 1)"),
        BO4_NUM(perturbation, "cos x perturbation of the two-solution data"),
        BO4_NUMS(eps_list, "Bona-Smith viscosities; decreasing, each in (0, 1), >= 3 values"),
        BO4_NUM(delta, "Bona-Smith data spectrum <xi>^(-s-1/2-delta); > 0"),
    };
    v.insert(v.end(), rest.begin(), rest.end());
    return v;
  }();
  return k;
}

#undef BO4_NUM
#undef BO4_INT
#undef BO4_NUMS
#undef BO4_INTS
#undef BO4_STR

void validate_grid(const std::string& key, int n) {
  try {
    TorusGrid g(n);
  } catch (const ConfigError& e) {
    bad(key, e.what());
  }
}

void validate(const RunConfig& c) {
  validate_grid("n", c.n);
  if (!c.coeffs.all_finite()) bad("c1..c8", "coefficients must be finite");
  if (!(c.s >= 1.0) || !std::isfinite(c.s)) bad("s", "s must be >= 1");
  if (!(c.s0 > 3.5) || !std::isfinite(c.s0)) bad("s0", "s0 must exceed 3.5");
  if (!(c.s_prime >= 1.0 && c.s_prime <= c.s)) bad("s_prime", "s_prime must lie in [1, s]");
  if (c.epsilon.empty()) bad("epsilon", "need at least one value");
  for (double e : c.epsilon) {
    if (!(e >= 0.0 && e < 1.0)) bad("epsilon", "each epsilon must lie in [0, 1)");
  }
  if (c.time_direction != 1 && c.time_direction != -1) bad("time_direction", "must be +1 or -1");
  if (!(c.dt >= 0.0) || !std::isfinite(c.dt)) bad("dt", "must be >= 0");
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) bad("t_end", "must be positive");
  if (c.sample_every < 1) bad("sample_every", "must be >= 1");
  try {
    scheme_from_string(c.scheme);
  } catch (const std::exception&) {
    bad("scheme", "unknown scheme '" + c.scheme + "'");
  }
  if (!(c.cfl > 0.0) || !std::isfinite(c.cfl)) bad("cfl", "must be positive");
  if (!(c.Cs >= 0.0) || !std::isfinite(c.Cs)) bad("Cs", "must be >= 0");
  if (c.output.empty()) bad("output", "must not be empty");
  if (c.data != "random" && c.data != "cos") bad("data", "unknown data '" + c.data + "'");
  if (!(c.amplitude > 0.0) || !std::isfinite(c.amplitude)) bad("amplitude", "must be positive");
  if (!(c.decay > 0.0) || !std::isfinite(c.decay)) bad("decay", "must be positive");
  if (c.max_mode < -1 || c.max_mode == 0) bad("max_mode", "must be -1 or >= 1");
  if (c.samples < 1) bad("samples", "must be >= 1");
  validate_grid("n_coarse", c.n_coarse);
  validate_grid("n_fine", c.n_fine);
  if (c.n_fine <= c.n_coarse) bad("n_fine", "must exceed n_coarse");
  for (int k : c.kinds) {
    if (k < 1 || k > 9) bad("kinds", "each kind must be 1..9");
  }
  for (double s : c.s_list) {
    if (!(s >= 0.0) || !std::isfinite(s)) bad("s_list", "each value must be >= 0");
  }
  for (const auto& name : c.inequalities) {
    try {
      inequality_from_string(name);
    } catch (const ConfigError&) {
      bad("inequalities", "unknown inequality '" + name + "'");
    }
  }
  if (c.fit_radius < 16) bad("fit_radius", "must be >= 16");
  if (c.box < 4 * c.fit_radius) bad("box", "must be >= 4 fit_radius");
  for (int l : c.l_list) {
    if (l < 0 || l > c.s - 1.0) bad("l_list", "each l must satisfy 0 <= l <= s - 1");
  }
  for (double p : c.p_list) {
    if (!(p >= 2.0)) bad("p_list", "each p must be >= 2");
  }
  for (double a : c.alpha) {
    if (!(a >= 0.0 && a <= c.s)) bad("alpha", "each alpha must lie in [0, s]");
  }
  for (int k : c.k0) {
    if (k < 2) bad("k0", "each k0 must be >= 2");
  }
  if (!(c.seed_amplitude >= 0.0) || !std::isfinite(c.seed_amplitude)) bad("seed_amplitude", "must be >= 0");
  if (!(c.loss_epsilon >= 0.0 && c.loss_epsilon < 1.0)) bad("loss_epsilon", "must lie in [0, 1)");
  if (!std::isfinite(c.perturbation)) bad("perturbation", "must be finite");
  if (c.eps_list.size() < 3) bad("eps_list", "need at least 3 values");
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    if (!(c.eps_list[i] > 0.0 && c.eps_list[i] < 1.0)) bad("eps_list", "each value must lie in (0, 1)");
    if (i && !(c.eps_list[i] < c.eps_list[i - 1])) bad("eps_list", "values must decrease");
  }
  if (!(c.delta > 0.0) || !std::isfinite(c.delta)) bad("delta", "must be positive");
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : command_table()) {
    if (cmd == c) return name;
  }
  return "?";
}

Command command_from_string(const std::string& name) {
  for (const auto& [cmd, n] : command_table()) {
    if (n == name) return cmd;
  }
  throw ConfigError("unknown command '" + name + "'");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [cmd, n] : command_table()) v.push_back(n);
    return v;
  }();
  return names;
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> values;
  std::vector<std::string> order;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool known = false;
    for (const auto& k : keys()) known = known || k.name == key;
    if (!known) throw ConfigError("unknown key '" + key + "'");
    if (values.count(key)) throw ConfigError(key + ": duplicate key");
    if (value.empty()) bad(key, "missing value");
    values[key] = value;
    order.push_back(key);
  }

  RunConfig c;
  // the preset first, so explicit coefficients override it
  if (auto it = values.find("preset"); it != values.end()) {
    try {
      c.coeffs = CoefficientSet::preset(it->second);
    } catch (const ConfigError&) {
      bad("preset", "unknown preset '" + it->second + "'");
    }
    c.preset = it->second;
  }
  for (const auto& k : keys()) {
    if (k.name == "preset") continue;
    if (auto it = values.find(k.name); it != values.end()) k.set(c, it->second);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_text(const RunConfig& c) {
  std::string out;
  for (const auto& k : keys()) out += k.name + " = " + k.get(c) + "\n";
  return out;
}

std::string config_help() {
  const RunConfig defaults;
  std::string out = "Config keys (key = value, '#' comments, lists comma separated):\n";
  for (const auto& k : keys()) {
    std::string name = k.name;
    name.resize(std::max<std::size_t>(name.size(), 16), ' ');
    out += "  " + name + k.help + " [default " + k.get(defaults) + "]\n";
  }
  return out;
}

}  // namespace bo4
