#include "plsec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "plsec/montecarlo.hpp"

namespace plsec {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// ---------------------------------------------------------------------------
// Config file parsing

struct IniEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct IniSection {
  int line = 0;
  std::map<std::string, IniEntry> entries;
};

struct IniFile {
  std::string path;
  std::map<std::string, IniSection> sections;

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ConfigError(path + ":" + std::to_string(line) + ": " + what);
  }
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

IniFile parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  IniFile ini;
  ini.path = path;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') ini.fail(lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) ini.fail(lineno, "empty section name");
      if (!ini.sections.count(section)) ini.sections[section].line = lineno;
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      ini.fail(lineno, "expected 'key = value', got '" + t + "'");
    if (section.empty()) ini.fail(lineno, "key outside of any [section]");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) ini.fail(lineno, "empty key");
    auto& sec = ini.sections[section];
    if (sec.entries.count(key))
      ini.fail(lineno, "duplicate key '" + key + "' in [" + section + "]");
    sec.entries[key] = IniEntry{value, lineno, false};
  }
  return ini;
}

double parse_double(const IniFile& ini, const IniEntry& e,
                    const std::string& key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    ini.fail(e.line, "value of '" + key + "' is not a number: '" + e.value +
                         "'");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_double_list(const IniFile& ini, const IniEntry& e,
                                      const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) {
    try {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("trailing text");
      out.push_back(v);
    } catch (const std::exception&) {
      ini.fail(e.line, "list entry of '" + key + "' is not a number: '" +
                           item + "'");
    }
  }
  if (out.empty()) ini.fail(e.line, "'" + key + "' is an empty list");
  return out;
}

class SectionReader {
 public:
  SectionReader(const IniFile& ini, const std::string& name)
      : ini_(ini), name_(name), section_(nullptr) {
    auto it = ini.sections.find(name);
    if (it != ini.sections.end())
      section_ = const_cast<IniSection*>(&it->second);
  }

  bool exists() const { return section_ != nullptr; }
  int line() const { return section_ ? section_->line : 0; }

  const IniEntry* find(const std::string& key) {
    if (!section_) return nullptr;
    auto it = section_->entries.find(key);
    if (it == section_->entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const IniEntry& require(const std::string& key) {
    const IniEntry* e = find(key);
    if (!e)
      ini_.fail(line() ? line() : 1,
                "missing key '" + key + "' in [" + name_ + "]");
    return *e;
  }

  void finish() {
    if (!section_) return;
    for (const auto& [key, entry] : section_->entries) {
      if (!entry.used)
        ini_.fail(entry.line, "unknown key '" + key + "' in [" + name_ + "]");
    }
  }

 private:
  const IniFile& ini_;
  std::string name_;
  IniSection* section_;
};

enum class SnrKey { Required, Optional, SkipList };

FadingSpec parse_fading(const IniFile& ini, const std::string& section_name,
                        SnrKey snr_mode) {
  SectionReader sec(ini, section_name);
  if (!sec.exists())
    throw ConfigError(ini.path + ":1: missing [" + section_name +
                      "] section");
  FadingSpec spec;
  const IniEntry& fam = sec.require("family");
  if (fam.value == "nakagami") {
    spec.family = FadingFamily::Nakagami;
    spec.m = parse_double(ini, sec.require("m"), "m");
  } else if (fam.value == "hoyt") {
    spec.family = FadingFamily::Hoyt;
    spec.q = parse_double(ini, sec.require("q"), "q");
  } else if (fam.value == "generalized_k") {
    spec.family = FadingFamily::GeneralizedK;
    spec.k = parse_double(ini, sec.require("k"), "k");
    spec.m = parse_double(ini, sec.require("m"), "m");
  } else if (fam.value == "kappa_mu") {
    spec.family = FadingFamily::KappaMu;
    spec.kappa = parse_double(ini, sec.require("kappa"), "kappa");
    spec.mu = parse_double(ini, sec.require("mu"), "mu");
  } else if (fam.value == "custom") {
    spec.family = FadingFamily::Custom;
    spec.custom_path = sec.require("file").value;
  } else {
    ini.fail(fam.line, "unknown fading family '" + fam.value +
                           "' (expected nakagami, hoyt, generalized_k, "
                           "kappa_mu, or custom)");
  }
  switch (snr_mode) {
    case SnrKey::Required:
      spec.avg_snr_db =
          parse_double(ini, sec.require("avg_snr_db"), "avg_snr_db");
      break;
    case SnrKey::Optional:
      if (const IniEntry* e = sec.find("avg_snr_db"))
        spec.avg_snr_db = parse_double(ini, *e, "avg_snr_db");
      break;
    case SnrKey::SkipList:
      sec.require("avg_snr_db");  // parsed as a list by the caller
      break;
  }
  sec.finish();
  return spec;
}

std::string fading_label(const FadingSpec& f, bool with_snr = true) {
  std::ostringstream os;
  switch (f.family) {
    case FadingFamily::Nakagami: os << "nakagami(m=" << f.m << ")"; break;
    case FadingFamily::Hoyt: os << "hoyt(q=" << f.q << ")"; break;
    case FadingFamily::GeneralizedK:
      os << "generalized_k(k=" << f.k << ";m=" << f.m << ")";
      break;
    case FadingFamily::KappaMu:
      os << "kappa_mu(kappa=" << f.kappa << ";mu=" << f.mu << ")";
      break;
    case FadingFamily::Custom: os << "custom(" << f.custom_path << ")"; break;
  }
  if (with_snr) os << "@" << f.avg_snr_db << "dB";
  return os.str();
}

SweepOutput parse_output(const IniFile& ini, int line,
                         const std::string& name) {
  if (name == "asr") return SweepOutput::Asr;
  if (name == "i_lim") return SweepOutput::ILim;
  if (name == "i_con") return SweepOutput::ICon;
  if (name == "sop") return SweepOutput::Sop;
  if (name == "limit_sop") return SweepOutput::LimitSop;
  if (name == "p_con") return SweepOutput::PCon;
  if (name == "asymptote") return SweepOutput::Asymptote;
  if (name == "mc") return SweepOutput::Mc;
  if (name == "gaussian_baseline") return SweepOutput::GaussianBaseline;
  ini.fail(line, "unknown output '" + name + "'");
}

SweepSpec load_config(const std::string& path, bool need_sweep) {
  IniFile ini = parse_ini(path);
  SweepSpec spec;
  spec.main = parse_fading(
      ini, "main", need_sweep ? SnrKey::Optional : SnrKey::Required);

  // Eavesdropper variants: the [eve] section (whose avg_snr_db may be a
  // list) plus optional [eve2], [eve3], ... sections.
  std::vector<FadingSpec> eves;
  {
    FadingSpec base = parse_fading(ini, "eve", SnrKey::SkipList);
    SectionReader sec(ini, "eve");
    const IniEntry& snr = sec.require("avg_snr_db");
    for (double db : parse_double_list(ini, snr, "avg_snr_db")) {
      FadingSpec f = base;
      f.avg_snr_db = db;
      eves.push_back(f);
    }
  }
  for (int i = 2;; ++i) {
    std::string name = "eve" + std::to_string(i);
    if (!ini.sections.count(name)) break;
    eves.push_back(parse_fading(ini, name, SnrKey::Required));
  }

  std::vector<int> orders;
  {
    SectionReader sec(ini, "constellation");
    if (!sec.exists())
      throw ConfigError(ini.path + ":1: missing [constellation] section");
    const IniEntry& mo = sec.require("modulation_order");
    for (double v : parse_double_list(ini, mo, "modulation_order")) {
      int m = static_cast<int>(v);
      if (v != m || (m != 4 && m != 16 && m != 64 && m != 256))
        ini.fail(mo.line, "modulation_order must be 4, 16, 64, or 256");
      orders.push_back(m);
    }
    sec.finish();
  }

  {
    SectionReader sec(ini, "sweep");
    if (sec.exists()) {
      if (const IniEntry* e = sec.find("points_db")) {
        spec.points_db = parse_double_list(ini, *e, "points_db");
        for (std::size_t i = 1; i < spec.points_db.size(); ++i) {
          if (!(spec.points_db[i] > spec.points_db[i - 1]))
            ini.fail(e->line, "points_db must be strictly increasing");
        }
      }
      if (const IniEntry* e = sec.find("outputs")) {
        for (const auto& name : split_list(e->value))
          spec.outputs.insert(parse_output(ini, e->line, name));
        if (spec.outputs.empty()) ini.fail(e->line, "outputs is empty");
      }
      if (const IniEntry* e = sec.find("target_rate_bits")) {
        double rs = parse_double(ini, *e, "target_rate_bits");
        if (!(rs > 0.0)) ini.fail(e->line, "target_rate_bits must be > 0");
        spec.target_rate = rs;
      }
      sec.finish();
    } else if (need_sweep) {
      throw ConfigError(ini.path + ":1: missing [sweep] section");
    }
  }
  if (need_sweep && spec.points_db.empty())
    throw ConfigError(ini.path + ":1: [sweep] needs a nonempty points_db");
  if (need_sweep && spec.outputs.empty())
    throw ConfigError(ini.path + ":1: [sweep] needs a nonempty outputs list");

  {
    SectionReader sec(ini, "precision");
    if (sec.exists()) {
      auto read_order = [&](const char* key, int fallback) {
        if (const IniEntry* e = sec.find(key)) {
          double v = parse_double(ini, *e, key);
          int n = static_cast<int>(v);
          if (v != n || n < 1 || n > 256)
            ini.fail(e->line, std::string("'") + key +
                                  "' must be an integer in [1, 256]");
          return n;
        }
        return fallback;
      };
      spec.hermite_order = read_order("hermite_order", spec.hermite_order);
      spec.laguerre_order = read_order("laguerre_order", spec.laguerre_order);
      spec.legendre_order = read_order("legendre_order", spec.legendre_order);
      sec.finish();
    }
  }

  bool wants_sop = spec.outputs.count(SweepOutput::Sop) ||
                   spec.outputs.count(SweepOutput::LimitSop) ||
                   spec.outputs.count(SweepOutput::PCon);
  if (wants_sop && !spec.target_rate)
    throw ConfigError(ini.path +
                      ": sop outputs require target_rate_bits in [sweep]");
  if (spec.outputs.count(SweepOutput::Asymptote) &&
      spec.main.family == FadingFamily::Custom)
    throw ConfigError(ini.path +
                      ": asymptote output is unsupported for family: custom");

  // Groups: modulation orders cross eavesdropper variants.
  for (int m : orders) {
    for (std::size_t e = 0; e < eves.size(); ++e) {
      SweepGroup g;
      g.modulation_order = m;
      g.eve = eves[e];
      std::ostringstream label;
      label << "M=" << m << " eve=" << fading_label(eves[e]);
      g.label = label.str();
      spec.groups.push_back(std::move(g));
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Evaluation

MixtureGamma build_fading(const FadingSpec& f, double avg_snr_db) {
  double gbar = db_to_linear(avg_snr_db);
  switch (f.family) {
    case FadingFamily::Nakagami: return from_nakagami(f.m, gbar);
    case FadingFamily::Hoyt: return from_hoyt(f.q, gbar);
    case FadingFamily::GeneralizedK:
      return from_generalized_k(f.k, f.m, gbar);
    case FadingFamily::KappaMu: return from_kappa_mu(f.kappa, f.mu, gbar);
    case FadingFamily::Custom: {
      MixtureGamma file = load_mixture_file(f.custom_path);
      // Rescale the mean: gamma -> c*gamma maps zeta -> zeta/c.
      double c = gbar / file.avg_snr;
      std::vector<MgComponent> comps = file.components;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        comps[i].zeta /= c;
        comps[i].alpha =
            std::exp(file.log_weight[i] - std::lgamma(comps[i].beta) +
                     comps[i].beta * std::log(comps[i].zeta));
      }
      return from_components(std::move(comps), gbar);
    }
  }
  throw ConfigError("unknown fading family");
}

SecrecyScenario build_scenario(const SweepSpec& spec, const SweepGroup& group,
                               double main_db) {
  SecrecyScenario s;
  s.main = build_fading(spec.main, main_db);
  s.eve = build_fading(group.eve, group.eve.avg_snr_db);
  s.constellation = make_constellation(group.modulation_order);
  s.hermite_order = spec.hermite_order;
  s.laguerre_order = spec.laguerre_order;
  s.legendre_order = spec.legendre_order;
  if (spec.target_rate) s.target_rate = *spec.target_rate;
  return s;
}

struct Row {
  double snr_db = 0.0;
  std::map<std::string, double> cols;
};

const std::vector<std::string> kColumnOrder = {
    "snr_db",     "asr_bits",      "i_lim_bits", "i_con_bits", "sop",
    "limit_sop",  "p_con",         "asym_asr_bits", "asym_sop", "mc_value",
    "mc_stderr",  "gauss_value",   "gauss_stderr"};

std::vector<std::string> active_columns(const SweepSpec& spec) {
  std::set<std::string> want = {"snr_db"};
  auto has = [&](SweepOutput o) { return spec.outputs.count(o) > 0; };
  if (has(SweepOutput::Asr)) want.insert("asr_bits");
  if (has(SweepOutput::ILim)) want.insert("i_lim_bits");
  if (has(SweepOutput::ICon)) want.insert("i_con_bits");
  if (has(SweepOutput::Sop)) want.insert("sop");
  if (has(SweepOutput::LimitSop)) want.insert("limit_sop");
  if (has(SweepOutput::PCon)) want.insert("p_con");
  if (has(SweepOutput::Asymptote)) {
    want.insert("asym_asr_bits");
    if (spec.target_rate) want.insert("asym_sop");
  }
  if (has(SweepOutput::Mc)) {
    want.insert("mc_value");
    want.insert("mc_stderr");
  }
  if (has(SweepOutput::GaussianBaseline)) {
    want.insert("gauss_value");
    want.insert("gauss_stderr");
  }
  std::vector<std::string> cols;
  for (const auto& name : kColumnOrder)
    if (want.count(name)) cols.push_back(name);
  return cols;
}

bool sop_is_primary(const SweepSpec& spec) {
  return spec.outputs.count(SweepOutput::Sop) ||
         spec.outputs.count(SweepOutput::PCon) ||
         spec.outputs.count(SweepOutput::LimitSop);
}

// The estimators refuse sample counts too small for a meaningful error bar,
// so requests below their floor are rounded up rather than crashing a run.
std::uint64_t clamp_samples(std::uint64_t requested) {
  return std::max<std::uint64_t>(requested, 100000);
}

std::vector<Row> evaluate_group(const SweepSpec& spec, const SweepGroup& group,
                                std::size_t group_index,
                                const CliOptions& opts) {
  auto has = [&](SweepOutput o) { return spec.outputs.count(o) > 0; };
  bool need_asr = has(SweepOutput::Asr) || has(SweepOutput::ILim) ||
                  has(SweepOutput::ICon);
  bool need_sop = has(SweepOutput::Sop) || has(SweepOutput::LimitSop) ||
                  has(SweepOutput::PCon);
  bool mc_on_sop = sop_is_primary(spec);

  // The asymptotic coefficients do not depend on the swept mean, so they are
  // computed once per group.
  double asym_g_d = 0.0, asym_g_a_asr = 0.0, asym_g_a_sop = 0.0;
  double asym_i_lim = 0.0, asym_limit_sop = 0.0;
  if (has(SweepOutput::Asymptote)) {
    SecrecyScenario ref = build_scenario(spec, group, spec.points_db.front());
    AsrAsymptote aa = asymptotic_asr(ref);
    asym_g_d = aa.g_d;
    asym_g_a_asr = aa.g_a_asr;
    asym_i_lim = aa.i_lim;
    if (spec.target_rate) {
      SopAsymptote sa = asymptotic_sop(ref);
      asym_g_a_sop = sa.g_a_sop;
      asym_limit_sop = sa.limit_sop;
    }
  }

  std::vector<Row> rows;
  for (std::size_t pi = 0; pi < spec.points_db.size(); ++pi) {
    double db = spec.points_db[pi];
    SecrecyScenario s = build_scenario(spec, group, db);
    Row row;
    row.snr_db = db;
    row.cols["snr_db"] = db;
    if (need_asr) {
      AsrResult a = asr(s);
      row.cols["asr_bits"] = a.asr;
      row.cols["i_lim_bits"] = a.i_lim;
      row.cols["i_con_bits"] = a.i_lim - a.asr;
    }
    if (need_sop) {
      SopResult p = sop(s);
      row.cols["sop"] = p.sop;
      row.cols["limit_sop"] = p.limit_sop;
      row.cols["p_con"] = p.sop - p.limit_sop;
    }
    if (has(SweepOutput::Asymptote)) {
      double gbar = db_to_linear(db);
      double decay = std::pow(gbar, -asym_g_d);
      row.cols["asym_asr_bits"] = asym_i_lim - asym_g_a_asr * decay;
      if (spec.target_rate)
        row.cols["asym_sop"] = asym_limit_sop + asym_g_a_sop * decay;
    }
    std::uint64_t point_index = group_index * spec.points_db.size() + pi;
    if (has(SweepOutput::Mc)) {
      std::uint64_t seed = split_stream(opts.seed, 2 * point_index);
      std::uint64_t n = clamp_samples(opts.samples);
      McEstimate e = mc_on_sop ? mc_sop(s, n, seed) : mc_asr(s, n, seed);
      row.cols["mc_value"] = e.value;
      row.cols["mc_stderr"] = e.std_error;
    }
    if (has(SweepOutput::GaussianBaseline)) {
      std::uint64_t seed = split_stream(opts.seed, 2 * point_index + 1);
      McEstimate e = mc_gaussian_baseline(
          s, mc_on_sop ? BaselineMetric::Sop : BaselineMetric::Asr,
          clamp_samples(opts.samples), seed);
      row.cols["gauss_value"] = e.value;
      row.cols["gauss_stderr"] = e.std_error;
    }
    for (const auto& [name, value] : row.cols) {
      if (!std::isfinite(value))
        throw std::runtime_error("numerical failure: non-finite " + name +
                                 " at " + group.label + ", " + fmt(db) +
                                 " dB");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_header_block(std::ostream& os, const SweepSpec& spec,
                        const CliOptions& opts) {
  os << "# qam-secrecy sweep\n";
  os << "# main: " << fading_label(spec.main, /*with_snr=*/false) << "\n";
  os << "# sweep_axis: avg_snr_main_db\n";
  os << "# points_db:";
  for (double p : spec.points_db) os << " " << fmt(p);
  os << "\n# outputs:";
  static const std::map<SweepOutput, std::string> names = {
      {SweepOutput::Asr, "asr"},
      {SweepOutput::ILim, "i_lim"},
      {SweepOutput::ICon, "i_con"},
      {SweepOutput::Sop, "sop"},
      {SweepOutput::LimitSop, "limit_sop"},
      {SweepOutput::PCon, "p_con"},
      {SweepOutput::Asymptote, "asymptote"},
      {SweepOutput::Mc, "mc"},
      {SweepOutput::GaussianBaseline, "gaussian_baseline"}};
  for (const auto& [o, n] : names)
    if (spec.outputs.count(o)) os << " " << n;
  os << "\n";
  if (spec.target_rate)
    os << "# target_rate_bits: " << fmt(*spec.target_rate) << "\n";
  os << "# precision: hermite_order=" << spec.hermite_order
     << " laguerre_order=" << spec.laguerre_order
     << " legendre_order=" << spec.legendre_order << "\n";
  os << "# seed: " << opts.seed << "\n";
  os << "# samples: " << opts.samples << "\n";
}

}  // namespace

MixtureGamma FadingSpec::build() const { return build_fading(*this, avg_snr_db); }

MixtureGamma FadingSpec::build_at_db(double db) const {
  return build_fading(*this, db);
}

SweepSpec load_sweep_spec(const std::string& config_path) {
  return load_config(config_path, /*need_sweep=*/true);
}

int run_sweep(const SweepSpec& spec, const std::string& out_path,
              const CliOptions& opts) {
  if (spec.points_db.empty()) throw ConfigError("sweep has no points");
  if (spec.outputs.empty()) throw ConfigError("sweep has no outputs");

  std::vector<std::vector<Row>> all_rows;
  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi)
    all_rows.push_back(evaluate_group(spec, spec.groups[gi], gi, opts));

  std::vector<std::string> cols = active_columns(spec);
  if (opts.format == "json") {
    json doc;
    doc["tool"] = "qam-secrecy";
    doc["main"] = fading_label(spec.main);
    doc["seed"] = opts.seed;
    doc["samples"] = opts.samples;
    doc["points_db"] = spec.points_db;
    if (spec.target_rate) doc["target_rate_bits"] = *spec.target_rate;
    doc["groups"] = json::array();
    for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
      json g;
      g["label"] = spec.groups[gi].label;
      g["rows"] = json::array();
      for (const Row& row : all_rows[gi]) {
        json r;
        for (const auto& name : cols) r[name] = row.cols.at(name);
        g["rows"].push_back(std::move(r));
      }
      doc["groups"].push_back(std::move(g));
    }
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write output file: " + out_path);
    out << doc.dump(2) << "\n";
    return 0;
  }

  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write output file: " + out_path);
  write_header_block(out, spec, opts);
  for (std::size_t i = 0; i < cols.size(); ++i)
    out << (i ? "," : "") << cols[i];
  out << "\n";
  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
    out << "# group: " << spec.groups[gi].label << "\n";
    for (const Row& row : all_rows[gi]) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << fmt(row.cols.at(cols[i]));
      out << "\n";
    }
  }
  return 0;
}

ValidationReport validate(const SweepSpec& spec, const CliOptions& opts) {
  bool on_sop = sop_is_primary(spec);
  ValidationReport report;
  report.metric = on_sop ? "sop" : "asr";
  report.pass = true;
  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
    const SweepGroup& group = spec.groups[gi];
    for (std::size_t pi = 0; pi < spec.points_db.size(); ++pi) {
      double db = spec.points_db[pi];
      SecrecyScenario s = build_scenario(spec, group, db);
      double quad = on_sop ? sop(s).sop : asr(s).asr;
      SecrecyScenario mc_scenario = s;
      mc_scenario.target_rate = s.target_rate + opts.mc_rate_offset;
      std::uint64_t point_seed = split_stream(
          opts.seed, 2 * (gi * spec.points_db.size() + pi));
      std::uint64_t n = clamp_samples(opts.samples);
      McEstimate e = on_sop ? mc_sop(mc_scenario, n, point_seed)
                            : mc_asr(mc_scenario, n, point_seed);
      ValidationRow row;
      row.group = group.label;
      row.snr_db = db;
      row.quadrature = quad;
      row.mc_value = e.value;
      row.mc_stderr = e.std_error;
      if (e.std_error > 0.0)
        row.z = (e.value - quad) / e.std_error;
      else
        row.z = (e.value == quad) ? 0.0
                                  : std::numeric_limits<double>::infinity();
      if (!(std::abs(row.z) <= 3.0)) report.pass = false;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

namespace {

int dispatch(const std::string& command, const std::string& config_path,
             const std::string& out_path, CliOptions& opts,
             const std::string& mc_metric) {
  if (command == "sweep") {
    SweepSpec spec = load_config(config_path, /*need_sweep=*/true);
    return run_sweep(spec, out_path, opts);
  }
  if (command == "validate") {
    SweepSpec spec = load_config(config_path, /*need_sweep=*/true);
    ValidationReport report = validate(spec, opts);
    std::ostringstream os;
    os << "group,snr_db,metric,quadrature,mc_value,mc_stderr,z\n";
    for (const auto& row : report.rows) {
      os << row.group << "," << fmt(row.snr_db) << "," << report.metric << ","
         << fmt(row.quadrature) << "," << fmt(row.mc_value) << ","
         << fmt(row.mc_stderr) << "," << fmt(row.z) << "\n";
    }
    os << (report.pass ? "PASS" : "FAIL") << "\n";
    std::cout << os.str();
    if (!out_path.empty()) {
      json doc;
      doc["metric"] = report.metric;
      doc["pass"] = report.pass;
      doc["rows"] = json::array();
      for (const auto& row : report.rows) {
        doc["rows"].push_back({{"group", row.group},
                               {"snr_db", row.snr_db},
                               {"quadrature", row.quadrature},
                               {"mc_value", row.mc_value},
                               {"mc_stderr", row.mc_stderr},
                               {"z", row.z}});
      }
      std::ofstream out(out_path);
      if (!out) throw ConfigError("cannot write output file: " + out_path);
      out << doc.dump(2) << "\n";
    }
    return report.pass ? 0 : 3;
  }

  // Single-point commands evaluate at the configured [main] avg_snr_db.
  SweepSpec spec = load_config(config_path, /*need_sweep=*/false);
  json doc = json::array();
  std::ostringstream os;
  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
    const SweepGroup& group = spec.groups[gi];
    SecrecyScenario s = build_scenario(spec, group, spec.main.avg_snr_db);
    json g;
    g["group"] = group.label;
    os << "# group: " << group.label << "\n";
    auto emit = [&](const char* key, double value) {
      os << key << " = " << fmt(value) << "\n";
      g[key] = value;
    };
    if (command == "asr") {
      AsrResult a = asr(s);
      emit("asr_bits", a.asr);
      emit("i_lim_bits", a.i_lim);
      emit("i_con_bits", a.i_lim - a.asr);
      emit("i1_bits", a.i1);
      emit("i2_bits", a.i2);
      emit("i3_bits", a.i3);
    } else if (command == "sop") {
      if (!spec.target_rate)
        throw ConfigError(config_path +
                          ": sop requires target_rate_bits in [sweep]");
      SopResult p = sop(s);
      emit("sop", p.sop);
      emit("h_m", p.h_m);
      emit("limit_sop", p.limit_sop);
      emit("p_con", p.sop - p.limit_sop);
      os << "degenerate_threshold = "
         << (p.degenerate_threshold ? "true" : "false") << "\n";
      g["degenerate_threshold"] = p.degenerate_threshold;
    } else if (command == "asymptote") {
      if (spec.main.family == FadingFamily::Custom)
        throw ConfigError(config_path +
                          ": asymptote is unsupported for family: custom");
      AsrAsymptote aa = asymptotic_asr(s);
      emit("g_d", aa.g_d);
      emit("g_a_asr", aa.g_a_asr);
      emit("i_lim_bits", aa.i_lim);
      if (spec.target_rate) {
        SopAsymptote sa = asymptotic_sop(s);
        emit("g_a_sop", sa.g_a_sop);
        emit("limit_sop", sa.limit_sop);
      }
    } else if (command == "mc") {
      std::uint64_t point_seed = split_stream(opts.seed, gi);
      McEstimate e;
      if (mc_metric == "asr") {
        e = mc_asr(s, clamp_samples(opts.samples), point_seed);
      } else if (mc_metric == "sop") {
        if (!spec.target_rate)
          throw ConfigError(config_path +
                            ": mc --metric sop requires target_rate_bits");
        e = mc_sop(s, clamp_samples(opts.samples), point_seed);
      } else if (mc_metric == "gaussian_asr") {
        e = mc_gaussian_baseline(s, BaselineMetric::Asr,
                                 clamp_samples(opts.samples), point_seed);
      } else if (mc_metric == "gaussian_sop") {
        e = mc_gaussian_baseline(s, BaselineMetric::Sop,
                                 clamp_samples(opts.samples), point_seed);
      } else {
        throw ConfigError("unknown mc metric: " + mc_metric);
      }
      emit("value", e.value);
      emit("std_error", e.std_error);
      os << "n_samples = " << e.n_samples << "\n";
      g["n_samples"] = e.n_samples;
    }
    for (auto& [key, value] : g.items()) {
      if (value.is_number_float() && !std::isfinite(value.get<double>()))
        throw std::runtime_error("numerical failure: non-finite " + key);
    }
    doc.push_back(std::move(g));
  }
  if (opts.format == "json") {
    std::ostream* osp = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw ConfigError("cannot write output file: " + out_path);
      osp = &file;
    }
    (*osp) << doc.dump(2) << "\n";
  } else {
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) throw ConfigError("cannot write output file: " + out_path);
      file << os.str();
    } else {
      std::cout << os.str();
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  std::vector<char*> argv;
  std::string prog = "qam-secrecy";
  argv.push_back(prog.data());
  for (auto& a : storage) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Secrecy-rate and secrecy-outage metrics for M-QAM inputs "
               "over mixture-Gamma fading wiretap channels"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string mc_metric = "asr";
  CliOptions opts;

  auto add_common = [&](CLI::App* cmd, bool need_out) {
    cmd->add_option("--config", config_path, "Path to the INI config file")
        ->required();
    auto* out = cmd->add_option("--out", out_path, "Output file path");
    if (need_out) out->required();
    cmd->add_option("--seed", opts.seed, "Master RNG seed");
    cmd->add_option("--samples", opts.samples, "Monte Carlo sample count");
    cmd->add_option("--format", opts.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  add_common(app.add_subcommand("asr", "Average secrecy rate at the "
                                       "configured operating point"),
             false);
  add_common(app.add_subcommand("sop", "Secrecy outage probability at the "
                                       "configured operating point"),
             false);
  add_common(app.add_subcommand(
                 "asymptote",
                 "High-SNR diversity order and convergence coefficients"),
             false);
  add_common(app.add_subcommand("sweep", "Evaluate metrics over the "
                                         "configured SNR sweep"),
             true);
  auto* validate_cmd = app.add_subcommand(
      "validate", "Cross-check quadrature metrics against Monte Carlo");
  add_common(validate_cmd, false);
  validate_cmd->add_option(
      "--mc-rate-offset", opts.mc_rate_offset,
      "Shift the MC target rate (negative control; forces a FAIL)");
  auto* mc_cmd =
      app.add_subcommand("mc", "Monte Carlo estimate at the operating point");
  add_common(mc_cmd, false);
  mc_cmd->add_option("--metric", mc_metric,
                     "asr, sop, gaussian_asr, or gaussian_sop")
      ->check(CLI::IsMember({"asr", "sop", "gaussian_asr", "gaussian_sop"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    std::string command = app.get_subcommands().front()->get_name();
    return dispatch(command, config_path, out_path, opts, mc_metric);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace plsec
