#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ionwell/dynamics.hpp"
#include "ionwell/qdt.hpp"

namespace ionwell {

inline constexpr const char* code_version = "ionwell 0.1.0";

// 64-bit FNV-1a over raw bytes; chainable.
std::uint64_t fnv1a(const void* data, std::size_t n,
                    std::uint64_t h = 14695981039346656037ull);
std::uint64_t fnv1a(const std::string& s,
                    std::uint64_t h = 14695981039346656037ull);
std::string hash_hex(std::uint64_t h);

// One run's output directory: <root>/<run_id>/ holding numeric CSVs plus
// a meta.json with everything non-numeric (timings, basis sizes,
// convergence flags).  The run id is the content hash of the effective
// configuration text and the code version, so a repeated run with the
// same inputs lands in the same place and rewrites byte-identical files.
class ResultArchive {
 public:
  ResultArchive(const std::string& root, const std::string& run_id);

  static std::string make_run_id(const std::string& config_text);

  const std::string& dir() const { return dir_; }
  const std::string& run_id() const { return id_; }
  std::string path(const std::string& name) const;

  // Numeric-only CSV: header of column names, then %.12g-formatted rows.
  void write_csv(const std::string& name,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) const;

  // meta.json accumulator (string/number/bool/flat lists are enough here)
  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  void meta(const std::string& key, int value);
  void meta(const std::string& key, bool value);
  void meta_list(const std::string& key, const std::vector<double>& values);
  void meta_timing(const std::string& phase, double seconds);
  void write_meta() const;

  // Partial results stay on disk; FAILED marker records what went wrong.
  // A later successful run into the same archive clears the marker.
  void mark_failure(const std::string& what) const;
  void clear_failure() const;

 private:
  std::string dir_, id_;
  std::string meta_json_;  // serialized incrementally, closed by write_meta
};

// Binary cache for solved radial bases keyed on the physics inputs only
// (problem + grid parameters, not output paths or cosmetic settings).
// A cache hit reproduces the freshly computed basis bit for bit.
std::string basis_cache_key(const QdtProblem& p, int n_states, double e_floor,
                            const GridSpec& gs);
bool load_basis_cache(const std::string& cache_dir, const std::string& key,
                      RadialBasis* out);
void save_basis_cache(const std::string& cache_dir, const std::string& key,
                      const RadialBasis& b);

// solve_sector with the cache in front.  `grid` is the freshly built
// (deterministic) grid for this problem; a hit is rebound to it so all
// sectors of a merged basis keep sharing one grid object.  Empty
// cache_dir solves directly.
RadialBasis solve_sector_cached(const QdtProblem& p, int n_states,
                                double e_floor, const GridSpec& gs,
                                std::shared_ptr<const MappedGrid> grid,
                                const std::string& cache_dir);

// Separation-schedule files: structured text holding the baseline, the
// correction coefficients/frequencies and the seed that produced them.
// All values dimensionless (lengths R*, times hbar/E*); doubles are
// written with 17 significant digits so a round trip is exact.
void write_pulse_file(const std::string& path, const Pulse& p,
                      std::uint64_t seed);
Pulse read_pulse_file(const std::string& path, std::uint64_t* seed = nullptr);

// Writes a self-contained matplotlib script (CSV reading + plotting only,
// no recomputation) for one of the known figure ids; returns the script
// path.  Unknown ids raise ConfigError listing the available ones.
std::string emit_plot_script(const ResultArchive& ar,
                             const std::string& figure_id);
std::vector<std::string> available_figures();

}  // namespace ionwell
