#pragma once

#include "pencilres/document.hpp"
#include "pencilres/pipeline.hpp"

namespace pencilres {

struct RunOptions {
  std::string command;  // analyze | chains | project | solve | laurent | validate | reproduce
  std::optional<Region> region;
  Index probe_limit = 10;  // ascent/descent probes
  Index depth = 24;        // chain probe depth
  Index k_max = 20;
  Index l_max = 20;
  Index nodes = 512;       // contour oracle nodes
  std::string out_path;    // CSV destination for `laurent`
};

struct CheckLine {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Everything a command reports: a human rendering, a machine rendering, and
/// pass/fail lines whose conjunction decides the exit status.
struct Report {
  std::string command;
  std::string pencil_summary;
  std::vector<std::string> notes;  // defaults echoed for reproducibility
  std::vector<CheckLine> checks;
  std::string payload_json;

  bool all_pass() const;
  int exit_code() const { return all_pass() ? 0 : 1; }
  std::string render_text() const;
  std::string render_json() const;
};

Report run_command(const PencilDocument& doc, const RunOptions& opt);

/// Deterministic CSV with columns j, |R_j|_F, |R_j|^(1/|j|) (the plain norm
/// at j = 0), 17 significant digits, '.' decimal separator, LF endings.
void emit_growth_csv(const LaurentExpansion& exp, const std::string& path);

/// Exit code a CLI should use for a thrown Error (documented in the README).
int exit_code_for(Errc code);

}  // namespace pencilres
