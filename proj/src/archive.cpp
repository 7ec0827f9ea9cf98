#include "ionwell/archive.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ionwell/errors.hpp"

namespace fs = std::filesystem;

namespace ionwell {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
  return fnv1a(s.data(), s.size(), h);
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw NumericalError("cannot write '" + tmp + "'");
    out << content;
  }
  fs::rename(tmp, path);
}

}  // namespace

ResultArchive::ResultArchive(const std::string& root, const std::string& run_id)
    : id_(run_id) {
  dir_ = (fs::path(root) / run_id).string();
  fs::create_directories(dir_);
}

std::string ResultArchive::make_run_id(const std::string& config_text) {
  std::uint64_t h = fnv1a(config_text);
  h = fnv1a(std::string(code_version), h);
  return hash_hex(h);
}

std::string ResultArchive::path(const std::string& name) const {
  return (fs::path(dir_) / name).string();
}

void ResultArchive::write_csv(const std::string& name,
                              const std::vector<std::string>& columns,
                              const std::vector<std::vector<double>>& rows) const {
  std::string out;
  out.reserve(64 + rows.size() * columns.size() * 16);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) out += ',';
    out += columns[j];
  }
  out += '\n';
  for (const auto& r : rows) {
    if (r.size() != columns.size())
      throw NumericalError("csv '" + name + "': row width " +
                           std::to_string(r.size()) + " != " +
                           std::to_string(columns.size()) + " columns");
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out += ',';
      out += fmt_num(r[j]);
    }
    out += '\n';
  }
  write_file_atomic(path(name), out);
}

void ResultArchive::meta(const std::string& key, const std::string& value) {
  meta_json_ += "  \"" + json_escape(key) + "\": \"" + json_escape(value) +
                "\",\n";
}
void ResultArchive::meta(const std::string& key, double value) {
  meta_json_ += "  \"" + json_escape(key) + "\": " + fmt_num(value) + ",\n";
}
void ResultArchive::meta(const std::string& key, int value) {
  meta_json_ +=
      "  \"" + json_escape(key) + "\": " + std::to_string(value) + ",\n";
}
void ResultArchive::meta(const std::string& key, bool value) {
  meta_json_ += "  \"" + json_escape(key) +
                "\": " + (value ? "true" : "false") + ",\n";
}
void ResultArchive::meta_list(const std::string& key,
                              const std::vector<double>& values) {
  meta_json_ += "  \"" + json_escape(key) + "\": [";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) meta_json_ += ", ";
    meta_json_ += fmt_num(values[i]);
  }
  meta_json_ += "],\n";
}
void ResultArchive::meta_timing(const std::string& phase, double seconds) {
  meta("time_s." + phase, seconds);
}

void ResultArchive::write_meta() const {
  std::string body = meta_json_;
  body += "  \"code_version\": \"" + std::string(code_version) + "\",\n";
  body += "  \"run_id\": \"" + id_ + "\"\n";
  write_file_atomic(path("meta.json"), "{\n" + body + "}\n");
}

void ResultArchive::mark_failure(const std::string& what) const {
  write_file_atomic(path("FAILED"), what + "\n");
}

void ResultArchive::clear_failure() const {
  std::error_code ec;
  std::filesystem::remove(path("FAILED"), ec);
}

// ---------------------------------------------------------------------------
// radial-basis cache

namespace {

constexpr std::uint32_t kCacheMagic = 0x49574231;  // "IWB1"

void put_u32(std::string& s, std::uint32_t v) {
  s.append(reinterpret_cast<const char*>(&v), 4);
}
void put_f64(std::string& s, double v) {
  s.append(reinterpret_cast<const char*>(&v), 8);
}
void put_vec(std::string& s, const double* p, std::size_t n) {
  put_u32(s, static_cast<std::uint32_t>(n));
  s.append(reinterpret_cast<const char*>(p), 8 * n);
}

struct CacheReader {
  const std::string& s;
  std::size_t pos = 0;
  bool ok = true;
  std::uint32_t u32() {
    if (pos + 4 > s.size()) { ok = false; return 0; }
    std::uint32_t v;
    std::memcpy(&v, s.data() + pos, 4);
    pos += 4;
    return v;
  }
  double f64() {
    if (pos + 8 > s.size()) { ok = false; return 0; }
    double v;
    std::memcpy(&v, s.data() + pos, 8);
    pos += 8;
    return v;
  }
  bool vec(std::vector<double>* out) {
    const std::uint32_t n = u32();
    if (!ok || pos + 8ull * n > s.size()) { ok = false; return false; }
    out->resize(n);
    std::memcpy(out->data(), s.data() + pos, 8ull * n);
    pos += 8ull * n;
    return true;
  }
};

}  // namespace

std::string basis_cache_key(const QdtProblem& p, int n_states, double e_floor,
                            const GridSpec& gs) {
  // Physics inputs only: the problem, the requested window, and the grid
  // controls that change the discretization.
  const double vals[] = {p.mt,
                         p.omega_t,
                         p.beta,
                         p.phi,
                         p.with_c4 ? 1.0 : 0.0,
                         double(p.l),
                         double(p.parity),
                         double(n_states),
                         e_floor,
                         gs.dominance_factor,
                         gs.points_per_wavelength,
                         gs.x_max_margin_omega,
                         gs.x_min_override,
                         gs.x_max_override};
  return "basis-" + hash_hex(fnv1a(vals, sizeof vals));
}

void save_basis_cache(const std::string& cache_dir, const std::string& key,
                      const RadialBasis& b) {
  fs::create_directories(cache_dir);
  std::string s;
  put_u32(s, kCacheMagic);
  const auto& g = *b.grid;
  put_f64(s, g.b);
  put_f64(s, g.c);
  put_f64(s, g.s0);
  put_f64(s, g.h);
  put_vec(s, g.x.data(), g.x.size());
  put_vec(s, g.gp.data(), g.gp.size());
  put_vec(s, g.corr.data(), g.corr.size());
  put_vec(s, g.w.data(), g.w.size());
  put_f64(s, b.mass_factor);
  put_u32(s, static_cast<std::uint32_t>(b.size()));
  put_u32(s, static_cast<std::uint32_t>(b.psi.cols()));
  put_vec(s, b.energy.data(), b.energy.size());
  put_vec(s, b.psi.data(), static_cast<std::size_t>(b.psi.size()));
  put_u32(s, static_cast<std::uint32_t>(b.tag.size()));
  for (int t : b.tag) put_u32(s, static_cast<std::uint32_t>(t + 1024));
  write_file_atomic((fs::path(cache_dir) / (key + ".bin")).string(), s);
}

bool load_basis_cache(const std::string& cache_dir, const std::string& key,
                      RadialBasis* out) {
  std::ifstream in((fs::path(cache_dir) / (key + ".bin")).string(),
                   std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string s = ss.str();
  CacheReader r{s};
  if (r.u32() != kCacheMagic) return false;
  auto grid = std::make_shared<MappedGrid>();
  grid->b = r.f64();
  grid->c = r.f64();
  grid->s0 = r.f64();
  grid->h = r.f64();
  if (!r.vec(&grid->x) || !r.vec(&grid->gp) || !r.vec(&grid->corr) ||
      !r.vec(&grid->w))
    return false;
  out->mass_factor = r.f64();
  const std::uint32_t ns = r.u32();
  const std::uint32_t nn = r.u32();
  std::vector<double> e, psi;
  if (!r.vec(&e) || !r.vec(&psi)) return false;
  if (e.size() != ns || psi.size() != std::size_t(ns) * nn) return false;
  const std::uint32_t nt = r.u32();
  if (!r.ok || nt != ns) return false;
  out->tag.resize(nt);
  for (auto& t : out->tag) t = static_cast<int>(r.u32()) - 1024;
  if (!r.ok) return false;
  out->grid = grid;
  out->energy = Eigen::Map<const Eigen::VectorXd>(e.data(), ns);
  out->psi = Eigen::Map<const Eigen::MatrixXd>(psi.data(), ns, nn);
  return true;
}

RadialBasis solve_sector_cached(const QdtProblem& p, int n_states,
                                double e_floor, const GridSpec& gs,
                                std::shared_ptr<const MappedGrid> grid,
                                const std::string& cache_dir) {
  if (cache_dir.empty()) return solve_sector(p, n_states, e_floor, grid);
  const std::string key = basis_cache_key(p, n_states, e_floor, gs);
  RadialBasis b;
  if (load_basis_cache(cache_dir, key, &b) && b.grid->n() == grid->n() &&
      b.grid->x_min() == grid->x_min() && b.grid->x_max() == grid->x_max()) {
    b.grid = std::move(grid);
    return b;
  }
  b = solve_sector(p, n_states, e_floor, grid);
  save_basis_cache(cache_dir, key, b);
  return b;
}

// ---------------------------------------------------------------------------
// pulse files

void write_pulse_file(const std::string& path, const Pulse& p,
                      std::uint64_t seed) {
  char buf[40];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string s = "# separation schedule (lengths R*, times hbar/E*)\n";
  s += "t_total = " + num(p.t_total) + "\n";
  s += "d_start = " + num(p.d_start) + "\n";
  s += "d_hold = " + num(p.d_hold) + "\n";
  s += "t_ramp = " + num(p.t_ramp) + "\n";
  s += "seed = " + std::to_string(seed) + "\n";
  s += "n_modes = " + std::to_string(p.omega.size()) + "\n";
  for (const char* nm : {"a", "b", "w"}) {
    const Eigen::VectorXd& v =
        nm[0] == 'a' ? p.amp_sin : (nm[0] == 'b' ? p.amp_cos : p.omega);
    s += std::string(nm) + " =";
    for (int k = 0; k < v.size(); ++k) s += " " + num(v[k]);
    s += "\n";
  }
  write_file_atomic(path, s);
}

Pulse read_pulse_file(const std::string& path, std::uint64_t* seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pulse file '" + path + "'");
  Pulse p;
  int n_modes = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key, eq;
    if (!(ls >> key >> eq) || eq != "=")
      throw ConfigError("pulse file: malformed line '" + line + "'");
    if (key == "t_total") ls >> p.t_total;
    else if (key == "d_start") ls >> p.d_start;
    else if (key == "d_hold") ls >> p.d_hold;
    else if (key == "t_ramp") ls >> p.t_ramp;
    else if (key == "seed") {
      std::uint64_t sd = 0;
      ls >> sd;
      if (seed) *seed = sd;
    } else if (key == "n_modes") {
      ls >> n_modes;
      if (n_modes < 0 || n_modes > 1024)
        throw ConfigError("pulse file: bad n_modes");
      p.amp_sin.setZero(n_modes);
      p.amp_cos.setZero(n_modes);
      p.omega.setZero(n_modes);
    } else if (key == "a" || key == "b" || key == "w") {
      if (n_modes < 0)
        throw ConfigError("pulse file: n_modes must precede coefficients");
      Eigen::VectorXd& v = key == "a" ? p.amp_sin
                                      : (key == "b" ? p.amp_cos : p.omega);
      for (int k = 0; k < n_modes; ++k)
        if (!(ls >> v[k]))
          throw ConfigError("pulse file: expected " +
                            std::to_string(n_modes) + " values for '" + key +
                            "'");
    } else {
      throw ConfigError("pulse file: unknown key '" + key + "'");
    }
  }
  if (p.t_total <= 0.0)
    throw ConfigError("pulse file: missing or non-positive t_total");
  return p;
}

// ---------------------------------------------------------------------------
// plot scripts

namespace {

struct FigureDef {
  const char* description;
  const char* body;
  // csv name -> columns the script reads
  std::vector<std::pair<const char*, std::vector<const char*>>> needs;
};

std::string script_header(const std::string& fig) {
  return
      "#!/usr/bin/env python3\n"
      "# Plot script for " + fig + "; reads CSVs from this directory,\n"
      "# no recomputation.  Requires numpy + matplotlib.\n"
      "import os\n"
      "import numpy as np\n"
      "import matplotlib\n"
      "matplotlib.use('Agg')\n"
      "import matplotlib.pyplot as plt\n\n"
      "here = os.path.dirname(os.path.abspath(__file__))\n"
      "def load(name):\n"
      "    path = os.path.join(here, name)\n"
      "    data = np.genfromtxt(path, delimiter=',', names=True)\n"
      "    return data\n\n";
}

const char* kFigSpectrumJ =
    "sw = load('static_sweep.csv')\n"
    "tj = load('static_tunnelling.csv')\n"
    "fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 7), sharex=True)\n"
    "for t in np.unique(sw['track'].astype(int)):\n"
    "    m = sw['track'].astype(int) == t\n"
    "    ax1.plot(sw['d_nm'][m], sw['E_over_h_Hz'][m], lw=0.8)\n"
    "ax1.set_ylabel('E/h (Hz)')\n"
    "ax2.semilogy(tj['d_nm'], np.abs(tj['J_hz']))\n"
    "ax2.set_xlabel('d (nm)')\n"
    "ax2.set_ylabel('J (Hz)')\n"
    "fig.tight_layout()\n"
    "fig.savefig(os.path.join(here, 'FIG.png'), dpi=160)\n";

const char* kFig3d =
    "sw = load('static3d_sweep.csv')\n"
    "fig, ax = plt.subplots(figsize=(6, 4.5))\n"
    "for t in np.unique(sw['track'].astype(int)):\n"
    "    m = sw['track'].astype(int) == t\n"
    "    ax.plot(sw['d_nm'][m], sw['E_over_h_Hz'][m], lw=0.8)\n"
    "ax.set_xlabel('d (nm)')\n"
    "ax.set_ylabel('E/h (Hz)')\n"
    "fig.tight_layout()\n"
    "fig.savefig(os.path.join(here, 'FIG.png'), dpi=160)\n";

const char* kFig2Body =
    "sw = load('twobody_sweep.csv')\n"
    "tj = load('twobody_j.csv')\n"
    "fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 7), sharex=True)\n"
    "for t in np.unique(sw['track'].astype(int)):\n"
    "    m = sw['track'].astype(int) == t\n"
    "    ax1.plot(sw['d_nm'][m], sw['E_over_h_Hz'][m], lw=0.8)\n"
    "cr = sw['crossing_flag'] > 0\n"
    "ax1.plot(sw['d_nm'][cr], sw['E_over_h_Hz'][cr], 'rx', ms=4)\n"
    "ax1.set_ylabel('E/h (Hz)')\n"
    "for b in np.unique(tj['branch'].astype(int)):\n"
    "    m = tj['branch'].astype(int) == b\n"
    "    ax2.semilogy(tj['d_nm'][m], np.abs(tj['J_hz'][m]),"
    " label=f'branch {b}')\n"
    "ax2.set_xlabel('d (nm)')\n"
    "ax2.set_ylabel('J (Hz)')\n"
    "ax2.legend()\n"
    "fig.tight_layout()\n"
    "fig.savefig(os.path.join(here, 'FIG.png'), dpi=160)\n";

const char* kFigCouplings =
    "cp = load('couplings.csv')\n"
    "fig, ax = plt.subplots(figsize=(6, 4.5))\n"
    "ax.plot(cp['delta_e_khz'], 100 * cp['v_rr_over_omega_a'], 'o-',"
    " label='v_rr')\n"
    "ax.plot(cp['delta_e_khz'], 100 * cp['v_rR_over_omega_a'], 's-',"
    " label='v_rR')\n"
    "ax.plot(cp['delta_e_khz'], 100 * cp['v_RR_over_omega_a'], '^-',"
    " label='v_RR')\n"
    "ax.set_xlabel('level spacing (kHz)')\n"
    "ax.set_ylabel('coupling (% of atom trap quantum)')\n"
    "ax.legend()\n"
    "fig.tight_layout()\n"
    "fig.savefig(os.path.join(here, 'FIG.png'), dpi=160)\n";

const char* kFigFloquet =
    "fl = load('floquet_sweep.csv')\n"
    "fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 7), sharex=True)\n"
    "ax1.plot(fl['d_nm'], fl['e_g_hz'], label='pair lower')\n"
    "ax1.plot(fl['d_nm'], fl['e_e_hz'], label='pair upper')\n"
    "ax1.set_ylabel('E/h (Hz)')\n"
    "ax1.legend()\n"
    "ax2.plot(fl['d_nm'], fl['eps_g_hz'], label='quasi lower')\n"
    "ax2.plot(fl['d_nm'], fl['eps_e_hz'], label='quasi upper')\n"
    "ax2.set_xlabel('d (nm)')\n"
    "ax2.set_ylabel('quasi-energy/h (Hz)')\n"
    "ax2.legend()\n"
    "fig.tight_layout()\n"
    "fig.savefig(os.path.join(here, 'FIG.png'), dpi=160)\n";

const char* kFigGaps =
    "fl = load('floquet_sweep.csv')\n"
    "gp = load('floquet_gaps.csv')\n"
    "fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 7), sharex=True)\n"
    "ax1.plot(fl['d_nm'], fl['gap_g_hz'], label='lower state')\n"
    "ax1.plot(fl['d_nm'], fl['gap_e_hz'], label='upper state')\n"
    "ax1.set_ylabel('zone gap (Hz)')\n"
    "ax1.legend()\n"
    "ax2.semilogy(gp['d_nm'], gp['gap_hz'], 'o')\n"
    "ax2.set_xlabel('d (nm)')\n"
    "ax2.set_ylabel('avoided-crossing gap (Hz)')\n"
    "fig.tight_layout()\n"
    "fig.savefig(os.path.join(here, 'FIG.png'), dpi=160)\n";

const char* kFigThermal =
    "th = load('thermal.csv')\n"
    "fig, ax = plt.subplots(figsize=(6, 4.5))\n"
    "ax.plot(th['theta'], th['fidelity'], 'o-')\n"
    "ax.set_xlabel('k_B T / (hbar omega_i)')\n"
    "ax.set_ylabel('thermally averaged fidelity')\n"
    "fig.tight_layout()\n"
    "fig.savefig(os.path.join(here, 'FIG.png'), dpi=160)\n";

const char* kFigControl =
    "pu = load('optimize_pulse.csv')\n"
    "ev = load('evolve.csv')\n"
    "fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 7), sharex=True)\n"
    "ax1.plot(pu['t_ms'], pu['d_nm'])\n"
    "ax1.set_ylabel('d (nm)')\n"
    "ax2.plot(ev['t_ms'], ev['O0'], label='O0')\n"
    "ax2.plot(ev['t_ms'], ev['O1'], label='O1')\n"
    "ax2.set_xlabel('t (ms)')\n"
    "ax2.set_ylabel('target overlap')\n"
    "ax2.legend()\n"
    "fig.tight_layout()\n"
    "fig.savefig(os.path.join(here, 'FIG.png'), dpi=160)\n";

const std::map<std::string, FigureDef>& figures() {
  static const std::map<std::string, FigureDef> f = {
      {"fig2",
       {"1D static spectrum and tunnelling rate vs separation", kFigSpectrumJ,
        {{"static_sweep.csv", {"d_nm", "track", "E_over_h_Hz"}},
         {"static_tunnelling.csv", {"d_nm", "J_hz"}}}}},
      {"fig3",
       {"3D static spectrum vs separation", kFig3d,
        {{"static3d_sweep.csv", {"d_nm", "track", "E_over_h_Hz"}}}}},
      {"fig4",
       {"two-body spectrum with crossings and branch tunnelling rates",
        kFig2Body,
        {{"twobody_sweep.csv",
          {"d_nm", "track", "E_over_h_Hz", "crossing_flag"}},
         {"twobody_j.csv", {"d_nm", "branch", "J_hz"}}}}},
      {"fig6",
       {"micromotion coupling strengths vs level spacing", kFigCouplings,
        {{"couplings.csv",
          {"delta_e_khz", "v_rr_over_omega_a", "v_rR_over_omega_a",
           "v_RR_over_omega_a"}}}}},
      {"fig7",
       {"Floquet quasi-energies vs separation", kFigFloquet,
        {{"floquet_sweep.csv",
          {"d_nm", "e_g_hz", "e_e_hz", "eps_g_hz", "eps_e_hz"}}}}},
      {"fig8",
       {"thermally averaged fidelity vs temperature", kFigThermal,
        {{"thermal.csv", {"theta", "fidelity"}}}}},
      {"fig9",
       {"quasi-energy zone gaps and avoided-crossing gaps", kFigGaps,
        {{"floquet_sweep.csv", {"d_nm", "gap_g_hz", "gap_e_hz"}},
         {"floquet_gaps.csv", {"d_nm", "gap_hz"}}}}},
      {"fig10",
       {"optimized pulse and target populations", kFigControl,
        {{"optimize_pulse.csv", {"t_ms", "d_nm"}},
         {"evolve.csv", {"t_ms", "O0", "O1"}}}}},
  };
  return f;
}

// Verifies every CSV the script reads exists and has the columns.
void check_figure_inputs(const ResultArchive& ar, const std::string& id,
                         const FigureDef& def) {
  std::string missing;
  for (const auto& [csv, cols] : def.needs) {
    std::ifstream in(ar.path(csv));
    std::string header;
    if (!in || !std::getline(in, header)) {
      missing += std::string("\n  ") + csv + " (missing)";
      continue;
    }
    std::string bad;
    for (const char* c : cols) {
      // column names contain no commas, so substring match on the
      // comma-delimited header is exact enough
      const std::string token = c;
      const std::string padded = "," + header + ",";
      if (padded.find("," + token + ",") == std::string::npos)
        bad += (bad.empty() ? "" : ", ") + token;
    }
    if (!bad.empty())
      missing += std::string("\n  ") + csv + " (columns: " + bad + ")";
  }
  if (!missing.empty())
    throw ConfigError("figure '" + id + "' requires:" + missing);
}

}  // namespace

std::vector<std::string> available_figures() {
  std::vector<std::string> out;
  for (const auto& [k, v] : figures()) out.push_back(k);
  return out;
}

std::string emit_plot_script(const ResultArchive& ar,
                             const std::string& figure_id) {
  const auto& f = figures();
  const auto it = f.find(figure_id);
  if (it == f.end()) {
    std::string msg = "unknown figure id '" + figure_id + "'; available:";
    for (const auto& [k, v] : f) msg += " " + k;
    throw ConfigError(msg);
  }
  check_figure_inputs(ar, figure_id, it->second);
  std::string body = it->second.body;
  // Personalize the output name.
  const std::string tag = "FIG.png";
  const auto pos = body.find(tag);
  if (pos != std::string::npos) body.replace(pos, tag.size(),
                                             figure_id + ".png");
  const std::string script = script_header(figure_id) + body;
  const std::string path = ar.path("plot_" + figure_id + ".py");
  write_file_atomic(path, script);
  return path;
}

}  // namespace ionwell
