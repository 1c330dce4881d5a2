#pragma once

#include <map>

#include "stabeq/counterfactual.hpp"

namespace stabeq {

// ---- bins CSV ---------------------------------------------------------------
// Header row: covariate columns, phi_<profile> columns in canonical profile
// order, then "n". Lines starting with '#' carry run metadata and are skipped.

BinnedData read_bins_csv(const std::string& path);
void write_bins_csv(const std::string& path, const BinnedData& data,
                    const std::vector<std::string>& header_comments);

// ---- scan artifacts -----------------------------------------------------------

// one JSON object per evaluated point: theta, criterion, accepted, chain, step
void write_scan_ndjson(const std::string& path, const ScanResult& res);
std::vector<ScanRecord> read_scan_ndjson(const std::string& path);

std::string scan_summary_json(const ScanResult& res, const std::vector<std::string>& coord_names,
                              const std::map<std::string, std::string>& config);
std::string empty_set_summary_json(double min_value, const VecD& argmin,
                                   const std::vector<std::string>& coord_names,
                                   const std::map<std::string, std::string>& config);

// ---- counterfactual / coverage CSV ----------------------------------------------

void write_policy_csv(const std::string& path, const std::vector<PolicyRow>& rows,
                      const std::vector<std::string>& header_comments);

// wide layout: one row per (alpha, num_bins), one column per sample size
void write_coverage_csv(const std::string& path, const VecD& alphas, const VecI& bins_list,
                        const VecI& n_list, const VecD& coverage /* alpha-major, then bins, then n */,
                        const std::vector<std::string>& header_comments);

// ---- run configuration -----------------------------------------------------------
// key = value lines; '#' comments; repeated `bin = x1,x2,... : count` lines
// define the covariate bins.

struct RunConfig {
    std::map<std::string, std::string> kv;
    std::vector<CovariateBin> bins;

    static RunConfig from_file(const std::string& path);

    bool has(const std::string& key) const { return kv.count(key) > 0; }
    std::string get(const std::string& key, const std::string& def) const;
    double get_num(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_flag(const std::string& key, bool def) const;
    VecD get_vec(const std::string& key, const VecD& def) const;

    // "lo:hi:count" or a comma list
    VecD get_grid(const std::string& key, const VecD& def) const;

    std::vector<std::string> header_lines(const std::string& tool) const;
};

VecD parse_vecd(const std::string& s);
CovariateBin parse_bin_spec(const std::string& s);  // "x1,x2,... : count"

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace stabeq
