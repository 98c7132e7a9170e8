#include "ancient/config.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace ancient {
namespace {

namespace pt = boost::property_tree;

template <class T>
void read(const pt::ptree& tree, const std::string& key, T& into) {
  if (auto v = tree.get_optional<std::string>(key)) {
    std::istringstream is(*v);
    T value{};
    is >> value;
    if (is.fail() || !(is >> std::ws).eof())
      throw ConfigError("bad value for " + key + ": '" + *v + "'");
    into = value;
  }
}

void read_bool(const pt::ptree& tree, const std::string& key, bool& into) {
  if (auto v = tree.get_optional<std::string>(key)) {
    if (*v == "true" || *v == "1") into = true;
    else if (*v == "false" || *v == "0") into = false;
    else throw ConfigError("bad boolean for " + key + ": '" + *v + "'");
  }
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "surface.kind", "surface.n",
      "grid.S", "grid.Ns", "grid.K",
      "weights.beta", "weights.alpha", "weights.delta0",
      "time.T", "time.M",
      "fixed_point.tol", "fixed_point.max_iter", "fixed_point.epsilon0", "fixed_point.a",
      "fixed_point.agrid",
      "output.dir", "output.seed", "output.dump",
      "verify.orthonormality", "verify.eigen_residual", "verify.semigroup", "verify.projector",
      "verify.quadratic_drift", "verify.mu_spread", "verify.contraction", "verify.decay_slope",
      "verify.uniqueness", "verify.random_fields", "verify.kernel_samples",
      "verify.lipschitz_pairs"};
  return keys;
}

}  // namespace

void RunConfig::validate() const {
  if (surface != "plane" && surface != "catenoid" && surface != "ncatenoid")
    throw ConfigError("surface must be plane, catenoid or ncatenoid");
  if (n < 2) throw ConfigError("n must be >= 2");
  if (surface == "catenoid" && n != 2) throw ConfigError("catenoid needs n = 2");
  if (!(S > 0.0)) throw ConfigError("S must be positive");
  if (Ns < 16) throw ConfigError("Ns must be >= 16");
  if (surface == "plane" && Ns % 2 == 0) throw ConfigError("the plane needs an odd Ns");
  if (K < 0) throw ConfigError("K must be >= 0");
  if (!std::isnan(beta) && !(beta > n)) throw ConfigError("beta must exceed n");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!std::isnan(delta0) && !(delta0 > 0.0)) throw ConfigError("delta0 must be positive");
  if (!std::isnan(T) && !(T > 0.0)) throw ConfigError("T must be positive");
  if (M < 64) throw ConfigError("M must be >= 64");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(epsilon0 > 0.0)) throw ConfigError("epsilon0 must be positive");
  if (out.empty()) throw ConfigError("output directory is empty");
}

std::vector<double> parse_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    double v;
    is >> v;
    if (is.fail() || !(is >> std::ws).eof()) throw ConfigError("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::vector<double>> parse_agrid(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_csv(item));
  }
  return out;
}

RunConfig load_config(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      (void)value;
      if (!known_keys().count(section + "." + key))
        throw ConfigError("unknown key " + section + "." + key);
    }
  }
  RunConfig c;
  read(tree, "surface.kind", c.surface);
  read(tree, "surface.n", c.n);
  read(tree, "grid.S", c.S);
  read(tree, "grid.Ns", c.Ns);
  read(tree, "grid.K", c.K);
  read(tree, "weights.beta", c.beta);
  read(tree, "weights.alpha", c.alpha);
  read(tree, "weights.delta0", c.delta0);
  read(tree, "time.T", c.T);
  read(tree, "time.M", c.M);
  read(tree, "fixed_point.tol", c.tol);
  read(tree, "fixed_point.max_iter", c.max_iter);
  read(tree, "fixed_point.epsilon0", c.epsilon0);
  if (auto a = tree.get_optional<std::string>("fixed_point.a")) c.a = parse_csv(*a);
  if (auto g = tree.get_optional<std::string>("fixed_point.agrid")) c.agrid = *g;
  read(tree, "output.dir", c.out);
  read(tree, "output.seed", c.seed);
  read_bool(tree, "output.dump", c.dump);
  VerifyTolerances& v = c.verify;
  read(tree, "verify.orthonormality", v.orthonormality);
  read(tree, "verify.eigen_residual", v.eigen_residual);
  read(tree, "verify.semigroup", v.semigroup);
  read(tree, "verify.projector", v.projector);
  read(tree, "verify.quadratic_drift", v.quadratic_drift);
  read(tree, "verify.mu_spread", v.mu_spread);
  read(tree, "verify.contraction", v.contraction);
  read(tree, "verify.decay_slope", v.decay_slope);
  read(tree, "verify.uniqueness", v.uniqueness);
  read(tree, "verify.random_fields", v.random_fields);
  read(tree, "verify.kernel_samples", v.kernel_samples);
  read(tree, "verify.lipschitz_pairs", v.lipschitz_pairs);
  return c;
}

std::string config_text(const RunConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  // Unresolved defaults are echoed as comments so the text reloads as is.
  auto num = [&](const char* key, double v) {
    if (std::isnan(v)) os << "; " << key << " = auto\n";
    else os << key << " = " << v << "\n";
  };
  os << "[surface]\nkind = " << c.surface << "\nn = " << c.n << "\n\n";
  os << "[grid]\nS = " << c.S << "\nNs = " << c.Ns << "\nK = " << c.K << "\n\n";
  os << "[weights]\n";
  num("beta", c.beta);
  os << "alpha = " << c.alpha << "\n";
  num("delta0", c.delta0);
  os << "\n[time]\n";
  num("T", c.T);
  os << "M = " << c.M << "\n\n";
  os << "[fixed_point]\ntol = " << c.tol << "\nmax_iter = " << c.max_iter
     << "\nepsilon0 = " << c.epsilon0 << "\n";
  if (!c.a.empty()) {
    os << "a = ";
    for (std::size_t i = 0; i < c.a.size(); ++i) os << (i ? "," : "") << c.a[i];
    os << "\n";
  }
  if (!c.agrid.empty()) os << "agrid = " << c.agrid << "\n";
  os << "\n[output]\ndir = " << c.out << "\nseed = " << c.seed
     << "\ndump = " << (c.dump ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace ancient
