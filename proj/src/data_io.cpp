#include "stabeq/data_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace stabeq {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double to_num(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(trim(s), &pos);
        if (pos != trim(s).size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad number '" + s + "' in " + what);
    }
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

VecD parse_vecd(const std::string& s) {
    VecD out;
    for (const auto& part : split(s, ',')) {
        std::string p = trim(part);
        if (p.empty()) continue;
        out.push_back(to_num(p, "vector"));
    }
    return out;
}

CovariateBin parse_bin_spec(const std::string& s) {
    CovariateBin bin;
    bin.count = 1.0;
    std::string xs = s;
    size_t colon = s.find(':');
    if (colon != std::string::npos) {
        xs = s.substr(0, colon);
        bin.count = to_num(s.substr(colon + 1), "bin count");
        if (bin.count <= 0) throw std::runtime_error("bin count must be positive");
    }
    bin.x = parse_vecd(xs);
    if (bin.x.empty()) throw std::runtime_error("empty bin spec '" + s + "'");
    return bin;
}

// ---- bins CSV ---------------------------------------------------------------

BinnedData read_bins_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    BinnedData data;
    std::vector<int> phi_cols, x_cols;
    int n_col = -1;
    bool have_header = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(t, ',');
        if (!have_header) {
            for (int j = 0; j < (int)fields.size(); ++j) {
                std::string name = trim(fields[j]);
                if (name == "n") {
                    n_col = j;
                } else if (name.rfind("phi_", 0) == 0) {
                    phi_cols.push_back(j);
                    data.profile_names.push_back(name.substr(4));
                } else {
                    x_cols.push_back(j);
                    data.covariate_names.push_back(name);
                }
            }
            if (phi_cols.empty()) throw std::runtime_error(path + ": no phi_ columns in header");
            if (n_col < 0) throw std::runtime_error(path + ": no n column in header");
            have_header = true;
            continue;
        }
        if ((int)fields.size() != (int)(x_cols.size() + phi_cols.size() + 1))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong field count");
        BinnedRow row;
        for (int j : x_cols) row.x.push_back(to_num(fields[j], path));
        for (int j : phi_cols) row.phi.push_back(to_num(fields[j], path));
        row.n = to_num(fields[n_col], path);
        data.rows.push_back(std::move(row));
    }
    if (!have_header) throw std::runtime_error(path + ": empty file");
    if (data.rows.empty()) throw std::runtime_error(path + ": no data rows");
    return data;
}

void write_bins_csv(const std::string& path, const BinnedData& data,
                    const std::vector<std::string>& header_comments) {
    std::ostringstream out;
    for (const auto& c : header_comments) out << "# " << c << "\n";
    for (size_t k = 0; k < data.covariate_names.size(); ++k)
        out << data.covariate_names[k] << ",";
    for (const auto& p : data.profile_names) out << "phi_" << p << ",";
    out << "n\n";
    for (const auto& row : data.rows) {
        for (double v : row.x) out << fmt_short(v) << ",";
        for (double v : row.phi) out << fmt_short(v) << ",";
        out << fmt_short(row.n) << "\n";
    }
    write_text_file(path, out.str());
}

// ---- scan artifacts -----------------------------------------------------------

void write_scan_ndjson(const std::string& path, const ScanResult& res) {
    std::ostringstream out;
    for (const auto& rec : res.records) {
        json j;
        j["accepted"] = rec.accepted;
        j["chain"] = rec.chain;
        j["criterion"] = rec.crit;
        j["step"] = rec.step;
        json th = json::array();
        for (double v : rec.theta) th.push_back(v);
        j["theta"] = th;
        out << j.dump() << "\n";
    }
    write_text_file(path, out.str());
}

std::vector<ScanRecord> read_scan_ndjson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<ScanRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        json j;
        try {
            j = json::parse(t);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        ScanRecord rec;
        rec.theta = j.at("theta").get<VecD>();
        rec.crit = j.at("criterion").get<double>();
        rec.accepted = j.at("accepted").get<bool>();
        rec.chain = j.at("chain").get<int>();
        rec.step = j.at("step").get<int>();
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

json config_json(const std::map<std::string, std::string>& config) {
    json c = json::object();
    for (const auto& [k, v] : config) c[k] = v;
    return c;
}

}  // namespace

std::string scan_summary_json(const ScanResult& res, const std::vector<std::string>& coord_names,
                              const std::map<std::string, std::string>& config) {
    json j;
    j["empty"] = false;
    j["num_evaluated"] = res.records.size();
    j["num_accepted"] = res.num_accepted;
    j["min_criterion"] = res.min_criterion;
    j["volume"] = res.volume;
    json proj = json::array();
    for (size_t k = 0; k < res.proj_lo.size(); ++k) {
        json p;
        p["coord"] = k;
        p["name"] = k < coord_names.size() ? coord_names[k] : ("theta" + std::to_string(k));
        p["lo"] = res.proj_lo[k];
        p["hi"] = res.proj_hi[k];
        p["scanned"] = (bool)res.scanned[k];
        proj.push_back(p);
    }
    j["projections"] = proj;
    j["config"] = config_json(config);
    return j.dump(2) + "\n";
}

std::string empty_set_summary_json(double min_value, const VecD& argmin,
                                   const std::vector<std::string>& coord_names,
                                   const std::map<std::string, std::string>& config) {
    json j;
    j["empty"] = true;
    j["min_criterion"] = min_value;
    json am = json::object();
    for (size_t k = 0; k < argmin.size(); ++k) {
        std::string name = k < coord_names.size() ? coord_names[k] : ("theta" + std::to_string(k));
        am[name] = argmin[k];
    }
    j["argmin"] = am;
    j["config"] = config_json(config);
    return j.dump(2) + "\n";
}

// ---- counterfactual / coverage CSV ----------------------------------------------

void write_policy_csv(const std::string& path, const std::vector<PolicyRow>& rows,
                      const std::vector<std::string>& header_comments) {
    std::ostringstream out;
    for (const auto& c : header_comments) out << "# " << c << "\n";
    out << "objective,data,pre_lo,pre_hi,post_lo,post_hi\n";
    for (const auto& r : rows) {
        out << r.objective << ",";
        if (r.has_data)
            out << fmt_short(r.data);
        out << "," << fmt_short(r.pre_lo) << "," << fmt_short(r.pre_hi) << ","
            << fmt_short(r.post_lo) << "," << fmt_short(r.post_hi) << "\n";
    }
    write_text_file(path, out.str());
}

void write_coverage_csv(const std::string& path, const VecD& alphas, const VecI& bins_list,
                        const VecI& n_list, const VecD& coverage,
                        const std::vector<std::string>& header_comments) {
    if (coverage.size() != alphas.size() * bins_list.size() * n_list.size())
        throw std::invalid_argument("coverage table size mismatch");
    std::ostringstream out;
    for (const auto& c : header_comments) out << "# " << c << "\n";
    out << "alpha,num_bins";
    for (int n : n_list) out << ",n" << n;
    out << "\n";
    size_t idx = 0;
    for (double a : alphas) {
        for (size_t b = 0; b < bins_list.size(); ++b) {
            out << fmt_short(a) << "," << bins_list[b];
            for (size_t k = 0; k < n_list.size(); ++k) out << "," << fmt_short(coverage[idx++]);
            out << "\n";
        }
    }
    write_text_file(path, out.str());
}

// ---- run configuration -----------------------------------------------------------

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
        if (key == "bin") {
            try {
                cfg.bins.push_back(parse_bin_spec(val));
            } catch (const std::exception& e) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
            }
        } else {
            cfg.kv[key] = val;
        }
    }
    return cfg;
}

std::string RunConfig::get(const std::string& key, const std::string& def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : it->second;
}

double RunConfig::get_num(const std::string& key, double def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : to_num(it->second, "config key " + key);
}

int RunConfig::get_int(const std::string& key, int def) const {
    double v = get_num(key, (double)def);
    int iv = (int)std::llround(v);
    if (std::abs(v - iv) > 1e-9) throw std::runtime_error("config key " + key + " is not an integer");
    return iv;
}

bool RunConfig::get_flag(const std::string& key, bool def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    std::string v = it->second;
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::runtime_error("config key " + key + ": expected a boolean, got '" + v + "'");
}

VecD RunConfig::get_vec(const std::string& key, const VecD& def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : parse_vecd(it->second);
}

VecD RunConfig::get_grid(const std::string& key, const VecD& def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    const std::string& v = it->second;
    auto parts = split(v, ':');
    if (parts.size() == 3) {
        double lo = to_num(parts[0], key);
        double hi = to_num(parts[1], key);
        int count = (int)std::llround(to_num(parts[2], key));
        if (count < 1) throw std::runtime_error("config key " + key + ": grid count must be >= 1");
        VecD out(count);
        for (int i = 0; i < count; ++i)
            out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        return out;
    }
    return parse_vecd(v);
}

std::vector<std::string> RunConfig::header_lines(const std::string& tool) const {
    std::vector<std::string> out;
    out.push_back("tool=" + tool);
    for (const auto& [k, v] : kv) out.push_back(k + "=" + v);
    return out;
}

}  // namespace stabeq
