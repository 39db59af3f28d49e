#include "dpg2d/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpg2d {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

Real parse_omega(const std::string& s) {
  std::string t = trim(s);
  const auto pos = t.find("pi");
  if (pos != std::string::npos) {
    std::string mult = trim(t.substr(0, pos));
    if (mult.empty()) return kPi;
    return std::stod(mult) * kPi;
  }
  return std::stod(t);
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("Config: cannot open " + path);
  Config cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("Config: expected key=value, got '" + line + "'");
    cfg.kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

std::string Config::get(const std::string& key, const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

int Config::get_int(const std::string& key, int dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : std::stoi(it->second);
}

Real Config::get_real(const std::string& key, Real dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : std::stod(it->second);
}

Real Config::get_omega(const std::string& key, Real dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : parse_omega(it->second);
}

std::vector<int> Config::get_denoms(const std::string& key, std::vector<int> dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  std::vector<int> out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    const auto slash = tok.find('/');
    if (slash != std::string::npos)
      out.push_back(std::stoi(tok.substr(slash + 1)));
    else
      out.push_back(static_cast<int>(std::lround(1.0 / std::stod(tok))));
  }
  return out;
}

std::vector<Real> Config::get_omegas(const std::string& key, std::vector<Real> dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  std::vector<Real> out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_omega(tok));
  return out;
}

StudyConfig Config::study() const {
  StudyConfig s;
  s.p = get_int("p", s.p);
  s.delta_p = get_int("delta_p", s.delta_p);
  s.uhat_order = get_int("uhat_order", s.uhat_order);
  s.h_denoms = get_denoms("h_list", s.h_denoms);
  s.omegas = get_omegas("omega_list", s.omegas);
  if (has("omega")) s.omegas = {get_omega("omega", 2 * kPi)};
  s.H = get_real("H", s.H);
  s.theta = get_real("theta", s.theta);
  s.nu = get_int("nu", s.nu);
  s.mg_theta = get_real("mg_theta", s.mg_theta);
  s.tol = get_real("tol", s.tol);
  s.tol_absolute = get_int("tol_absolute", s.tol_absolute ? 1 : 0) != 0;
  s.max_iter = get_int("max_iter", s.max_iter);
  s.dx = get_real("dx", s.dx);
  s.dy = get_real("dy", s.dy);
  s.theta_mark = get_real("theta_mark", s.theta_mark);
  s.max_generations = get_int("max_generations", s.max_generations);
  s.output_dir = get("output_dir", s.output_dir);
  return s;
}

}  // namespace dpg2d
