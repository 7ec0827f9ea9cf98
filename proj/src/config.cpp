#include "ionwell/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ionwell/errors.hpp"

namespace ionwell {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"species",
       {"atom_name", "ion_name", "atom_mass_u", "ion_mass_u", "c4_au",
        "polarizability_au", "r_star_nm"}},
      {"traps",
       {"omega_a_khz", "omega_i_khz", "omega_perp_khz", "drive_khz", "q",
        "a"}},
      {"phases", {"phi_even_rad", "phi_odd_rad", "phi_3d_rad"}},
      {"grid",
       {"dominance_factor", "points_per_wavelength", "x_max_margin_omega"}},
      {"basis",
       {"tier", "n_states", "n_rel", "n_com", "l_max", "n_per_l",
        "e_floor_estar", "floquet_levels", "j_max"}},
      {"sweep",
       {"d_min_nm", "d_max_nm", "n_d", "n_keep", "n_branches", "e_cut_estar"}},
      {"control",
       {"t_total_ms", "t_ramp_ms", "d_start_nm", "d_hold_nm", "d_floor_rstar",
        "n_modes", "budget", "restarts", "protocol", "n_fine", "n_rungs",
        "n_anchors", "anchor_levels", "n_steps_exact", "theta", "n_cut"}},
      {"output", {"dir", "seed", "cache"}},
  };
  return s;
}

double to_double(const std::string& sec, const std::string& key,
                 const std::string& val) {
  char* end = nullptr;
  const double v = std::strtod(val.c_str(), &end);
  if (end == val.c_str() || *end != '\0')
    throw ConfigError("[" + sec + "] " + key + ": cannot parse '" + val +
                      "' as a number");
  return v;
}

int to_int(const std::string& sec, const std::string& key,
           const std::string& val) {
  const double v = to_double(sec, key, val);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("[" + sec + "] " + key + ": expected an integer, got '" +
                      val + "'");
  return i;
}

bool to_bool(const std::string& sec, const std::string& key,
             const std::string& val) {
  if (val == "true" || val == "yes" || val == "1") return true;
  if (val == "false" || val == "no" || val == "0") return false;
  throw ConfigError("[" + sec + "] " + key + ": expected true/false, got '" +
                    val + "'");
}

std::string suffix_hint(const std::string& sec, const std::string& key) {
  // Suggest the unit-suffixed spelling when a bare physical name is used.
  for (const auto& good : schema().at(sec)) {
    if (good.size() > key.size() && good.compare(0, key.size(), key) == 0 &&
        good[key.size()] == '_')
      return "; physical keys carry a unit suffix (did you mean '" + good +
             "'?)";
  }
  return "";
}

}  // namespace

int RunConfig::tier_n_states() const {
  if (n_states > 0) return n_states;
  return tier == "paper" ? 120 : 90;
}
int RunConfig::tier_n_rel() const {
  if (n_rel > 0) return n_rel;
  return tier == "paper" ? 93 : 40;
}
int RunConfig::tier_n_com() const {
  if (n_com > 0) return n_com;
  return tier == "paper" ? 69 : 30;
}
int RunConfig::tier_n_d() const {
  if (n_d > 0) return n_d;
  return tier == "paper" ? 200 : 40;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  std::set<std::string> seen;
  bool have_c4 = false, have_alpha = false, have_rstar = false;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      if (!schema().count(section))
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + t + "'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": key outside any [section]");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (!schema().at(section).count(key))
      throw ConfigError("unknown key '" + key + "' in [" + section + "]" +
                        suffix_hint(section, key));
    const std::string qual = section + "." + key;
    if (!seen.insert(qual).second)
      throw ConfigError("duplicate key '" + key + "' in [" + section + "]");

    if (section == "species") {
      if (key == "atom_name")
        cfg.species.atom_name = val;
      else if (key == "ion_name")
        cfg.species.ion_name = val;
      else if (key == "atom_mass_u")
        cfg.species.atom_mass_u = to_double(section, key, val);
      else if (key == "ion_mass_u")
        cfg.species.ion_mass_u = to_double(section, key, val);
      else if (key == "c4_au") {
        cfg.species.c4_au = to_double(section, key, val);
        have_c4 = true;
      } else if (key == "polarizability_au") {
        cfg.species.polarizability_au = to_double(section, key, val);
        have_alpha = true;
      } else {  // r_star_nm
        cfg.species.r_star_nm = to_double(section, key, val);
        have_rstar = true;
      }
    } else if (section == "traps") {
      const double v = to_double(section, key, val);
      if (key == "omega_a_khz")
        cfg.omega_atom_khz = v;
      else if (key == "omega_i_khz")
        cfg.omega_ion_khz = v;
      else if (key == "omega_perp_khz")
        cfg.omega_perp_khz = v;
      else if (key == "drive_khz")
        cfg.drive_khz = v;
      else if (key == "q")
        cfg.trap_q = v;
      else
        cfg.trap_a = v;
    } else if (section == "phases") {
      const double v = to_double(section, key, val);
      if (key == "phi_even_rad")
        cfg.phi_even_rad = v;
      else if (key == "phi_odd_rad")
        cfg.phi_odd_rad = v;
      else
        cfg.phi_3d_rad = v;
    } else if (section == "grid") {
      const double v = to_double(section, key, val);
      if (key == "dominance_factor")
        cfg.dominance_factor = v;
      else if (key == "points_per_wavelength")
        cfg.points_per_wavelength = v;
      else
        cfg.x_max_margin_omega = v;
    } else if (section == "basis") {
      if (key == "tier") {
        if (val != "acceptance" && val != "paper")
          throw ConfigError("[basis] tier: expected 'acceptance' or 'paper'");
        cfg.tier = val;
      } else if (key == "e_floor_estar")
        cfg.e_floor_estar = to_double(section, key, val);
      else {
        const int v = to_int(section, key, val);
        if (key == "n_states")
          cfg.n_states = v;
        else if (key == "n_rel")
          cfg.n_rel = v;
        else if (key == "n_com")
          cfg.n_com = v;
        else if (key == "l_max")
          cfg.l_max = v;
        else if (key == "n_per_l")
          cfg.n_per_l = v;
        else if (key == "floquet_levels")
          cfg.floquet_levels = v;
        else
          cfg.j_max = v;
      }
    } else if (section == "sweep") {
      if (key == "d_min_nm")
        cfg.d_min_nm = to_double(section, key, val);
      else if (key == "d_max_nm")
        cfg.d_max_nm = to_double(section, key, val);
      else if (key == "e_cut_estar")
        cfg.e_cut_estar = to_double(section, key, val);
      else {
        const int v = to_int(section, key, val);
        if (key == "n_d")
          cfg.n_d = v;
        else if (key == "n_keep")
          cfg.n_keep = v;
        else
          cfg.n_branches = v;
      }
    } else if (section == "control") {
      if (key == "protocol") {
        if (val != "tunnelling" && val != "entanglement")
          throw ConfigError(
              "[control] protocol: expected 'tunnelling' or 'entanglement'");
        cfg.protocol = val;
      } else if (key == "t_total_ms")
        cfg.t_total_ms = to_double(section, key, val);
      else if (key == "t_ramp_ms")
        cfg.t_ramp_ms = to_double(section, key, val);
      else if (key == "d_start_nm")
        cfg.d_start_nm = to_double(section, key, val);
      else if (key == "d_hold_nm")
        cfg.d_hold_nm = to_double(section, key, val);
      else if (key == "d_floor_rstar")
        cfg.d_floor_rstar = to_double(section, key, val);
      else if (key == "theta")
        cfg.theta = to_double(section, key, val);
      else {
        const int v = to_int(section, key, val);
        if (key == "n_modes")
          cfg.n_modes = v;
        else if (key == "budget")
          cfg.budget = v;
        else if (key == "restarts")
          cfg.restarts = v;
        else if (key == "n_fine")
          cfg.n_fine = v;
        else if (key == "n_rungs")
          cfg.n_rungs = v;
        else if (key == "n_anchors")
          cfg.n_anchors = v;
        else if (key == "anchor_levels")
          cfg.anchor_levels = v;
        else if (key == "n_steps_exact")
          cfg.n_steps_exact = v;
        else
          cfg.n_cut = v;
      }
    } else {  // output
      if (key == "dir")
        cfg.out_dir = val;
      else if (key == "seed") {
        char* end = nullptr;
        cfg.seed = std::strtoull(val.c_str(), &end, 10);
        if (end == val.c_str() || *end != '\0')
          throw ConfigError("[output] seed: cannot parse '" + val +
                            "' as an unsigned integer");
      } else
        cfg.cache = to_bool(section, key, val);
    }
  }

  // cross-key validation
  const int n_len = have_c4 + have_alpha + have_rstar;
  if (seen.count("species.atom_mass_u") || seen.count("species.ion_mass_u") ||
      n_len > 0) {
    if (n_len != 1)
      throw ConfigError(
          "[species]: exactly one of c4_au, polarizability_au, r_star_nm must "
          "be given");
    if (!seen.count("species.atom_mass_u") ||
        !seen.count("species.ion_mass_u"))
      throw ConfigError("[species]: atom_mass_u and ion_mass_u are required");
  }
  if (cfg.trap_q >= 0.91)
    throw ConfigError("[traps] q = " + std::to_string(cfg.trap_q) +
                      ": outside the stability region (requires q < 0.91)");
  if (cfg.trap_q < 0.0 || cfg.trap_a < 0.0)
    throw ConfigError("[traps]: q and a must be non-negative");
  if (cfg.trap_q > 0.0 && cfg.trap_a > 0.1 * cfg.trap_q)
    cfg.warnings.push_back(
        "traps: a = " + std::to_string(cfg.trap_a) +
        " is not small against q; secular approximation degrades");
  if (cfg.drive_khz < 0.0)
    throw ConfigError("[traps] drive_khz must be non-negative");
  if (cfg.omega_atom_khz < 0 || cfg.omega_ion_khz < 0 || cfg.omega_perp_khz < 0)
    throw ConfigError("[traps]: trap frequencies must be non-negative");
  if (cfg.d_min_nm < 0 || cfg.d_max_nm < 0 ||
      (cfg.d_max_nm > 0 && cfg.d_min_nm > cfg.d_max_nm))
    throw ConfigError("[sweep]: need 0 <= d_min_nm <= d_max_nm");
  if (cfg.j_max < 2)
    throw ConfigError("[basis] j_max must be at least 2");
  if (cfg.n_cut < 0) throw ConfigError("[control] n_cut must be >= 0");
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  char buf[64];
  std::ostringstream o;
  auto num = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    o << key << " = " << buf << "\n";
  };
  o << "[species]\n";
  o << "atom_name = " << cfg.species.atom_name << "\n";
  o << "ion_name = " << cfg.species.ion_name << "\n";
  num("atom_mass_u", cfg.species.atom_mass_u);
  num("ion_mass_u", cfg.species.ion_mass_u);
  if (cfg.species.c4_au) num("c4_au", *cfg.species.c4_au);
  if (cfg.species.polarizability_au)
    num("polarizability_au", *cfg.species.polarizability_au);
  if (cfg.species.r_star_nm) num("r_star_nm", *cfg.species.r_star_nm);
  o << "[traps]\n";
  num("omega_a_khz", cfg.omega_atom_khz);
  num("omega_i_khz", cfg.omega_ion_khz);
  num("omega_perp_khz", cfg.omega_perp_khz);
  num("drive_khz", cfg.drive_khz);
  num("q", cfg.trap_q);
  num("a", cfg.trap_a);
  o << "[phases]\n";
  num("phi_even_rad", cfg.phi_even_rad);
  num("phi_odd_rad", cfg.phi_odd_rad);
  num("phi_3d_rad", cfg.phi_3d_rad);
  o << "[grid]\n";
  num("dominance_factor", cfg.dominance_factor);
  num("points_per_wavelength", cfg.points_per_wavelength);
  num("x_max_margin_omega", cfg.x_max_margin_omega);
  o << "[basis]\n";
  o << "tier = " << cfg.tier << "\n";
  num("n_states", cfg.tier_n_states());
  num("n_rel", cfg.tier_n_rel());
  num("n_com", cfg.tier_n_com());
  num("l_max", cfg.l_max);
  num("n_per_l", cfg.n_per_l);
  num("e_floor_estar", cfg.e_floor_estar);
  num("floquet_levels", cfg.floquet_levels);
  num("j_max", cfg.j_max);
  o << "[sweep]\n";
  num("d_min_nm", cfg.d_min_nm);
  num("d_max_nm", cfg.d_max_nm);
  num("n_d", cfg.tier_n_d());
  num("n_keep", cfg.n_keep);
  num("n_branches", cfg.n_branches);
  num("e_cut_estar", cfg.e_cut_estar);
  o << "[control]\n";
  num("t_total_ms", cfg.t_total_ms);
  num("t_ramp_ms", cfg.t_ramp_ms);
  num("d_start_nm", cfg.d_start_nm);
  num("d_hold_nm", cfg.d_hold_nm);
  num("d_floor_rstar", cfg.d_floor_rstar);
  num("n_modes", cfg.n_modes);
  num("budget", cfg.budget);
  num("restarts", cfg.restarts);
  o << "protocol = " << cfg.protocol << "\n";
  num("n_fine", cfg.n_fine);
  num("n_rungs", cfg.n_rungs);
  num("n_anchors", cfg.n_anchors);
  num("anchor_levels", cfg.anchor_levels);
  num("n_steps_exact", cfg.n_steps_exact);
  num("theta", cfg.theta);
  num("n_cut", cfg.n_cut);
  o << "[output]\n";
  o << "dir = " << cfg.out_dir << "\n";
  o << "seed = " << cfg.seed << "\n";
  o << "cache = " << (cfg.cache ? "true" : "false") << "\n";
  return o.str();
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace ionwell
