#ifndef DPG2D_CONFIG_HPP
#define DPG2D_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "dpg2d/studies.hpp"

namespace dpg2d {

// key=value configuration files; '#' starts a comment. Frequencies accept
// "npi" multiples ("2pi") or plain numbers; h lists accept "1/2,1/4,...".
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get(const std::string& key, const std::string& dflt) const;
  int get_int(const std::string& key, int dflt) const;
  Real get_real(const std::string& key, Real dflt) const;
  Real get_omega(const std::string& key, Real dflt) const;
  std::vector<int> get_denoms(const std::string& key, std::vector<int> dflt) const;
  std::vector<Real> get_omegas(const std::string& key, std::vector<Real> dflt) const;

  StudyConfig study() const;

 private:
  std::map<std::string, std::string> kv_;
};

Real parse_omega(const std::string& s);

}  // namespace dpg2d

#endif
