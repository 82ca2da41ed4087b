#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cognoise/design.hpp"
#include "cognoise/errors.hpp"
#include "cognoise/hierarchy.hpp"
#include "cognoise/inference/draws.hpp"
#include "cognoise/simulate.hpp"

namespace cognoise::io {

namespace fs = std::filesystem;

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw data_error("cannot open for writing: " + path.string());
  return f;
}

inline std::ifstream open_in(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw data_error("cannot open for reading: " + path.string());
  return f;
}

/// Shortest representation that round-trips a double through text.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char probe[40];
      std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
      std::sscanf(probe, "%lf", &back);
      if (back == v) return probe;
    }
  }
  return buf;
}

/// Euros with exactly two decimals from integer cents.
inline std::string fmt_euro(std::int64_t cents) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%02lld", static_cast<long long>(cents / 100),
                static_cast<long long>(cents % 100));
  return buf;
}

inline const char* task_name(design::Task t) {
  return t == design::Task::altruism ? "altruism" : "number";
}

inline design::Task parse_task(const std::string& s) {
  if (s == "altruism") return design::Task::altruism;
  if (s == "number") return design::Task::number;
  throw data_error("unknown task '" + s + "'");
}

// ---------------------------------------------------------------------------
// trials.csv: task,game_id,repetition,round,self_cents,other_cents,
//             self1,self2,other1,other2 (sum columns empty for baseline rows)
// ---------------------------------------------------------------------------

inline void write_trials_csv(const fs::path& path, const std::vector<design::TrialSpec>& trials,
                             const std::vector<design::SumDecomposition>* sums = nullptr) {
  if (sums != nullptr && sums->size() != trials.size()) {
    throw data_error("write_trials_csv: sums size mismatch");
  }
  auto f = open_out(path);
  f << "task,game_id,repetition,round,self_cents,other_cents,self1,self2,other1,other2\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    f << task_name(t.task) << ',' << t.game_id << ',' << t.repetition << ',' << t.round << ','
      << t.self_cents << ',' << t.other_cents << ',';
    if (sums != nullptr) {
      const auto& s = (*sums)[i];
      f << s.self1 << ',' << s.self2 << ',' << s.other1 << ',' << s.other2;
    } else {
      f << ",,,";
    }
    f << '\n';
  }
}

struct TrialsFile {
  std::vector<design::TrialSpec> trials;
  std::vector<design::SumDecomposition> sums;  // empty if baseline
  bool has_sums = false;
};

inline TrialsFile read_trials_csv(const fs::path& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw data_error("empty trials file: " + path.string());
  TrialsFile out;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cols = split_csv_line(line);
    if (cols.size() != 10) {
      throw data_error(path.string() + ":" + std::to_string(row) + ": expected 10 columns");
    }
    design::TrialSpec t;
    t.task = parse_task(cols[0]);
    t.game_id = std::stoi(cols[1]);
    t.repetition = std::stoi(cols[2]);
    t.round = std::stoi(cols[3]);
    t.self_cents = std::stoll(cols[4]);
    t.other_cents = std::stoll(cols[5]);
    out.trials.push_back(t);
    if (!cols[6].empty()) {
      design::SumDecomposition s;
      s.self1 = std::stoll(cols[6]);
      s.self2 = std::stoll(cols[7]);
      s.other1 = std::stoll(cols[8]);
      s.other2 = std::stoll(cols[9]);
      out.sums.push_back(s);
      out.has_sums = true;
    }
  }
  if (out.has_sums && out.sums.size() != out.trials.size()) {
    throw data_error(path.string() + ": mixed baseline and treatment rows");
  }
  return out;
}

// ---------------------------------------------------------------------------
// choices.csv: participant_id,group,task,game_id,repetition,round,
//              self_cents,other_cents,choice
// ---------------------------------------------------------------------------

inline void write_choices_csv(const fs::path& path, const sim::ChoiceDataset& data) {
  auto f = open_out(path);
  f << "participant_id,group,task,game_id,repetition,round,self_cents,other_cents,choice\n";
  for (const auto& r : data) {
    f << r.participant_id << ',' << hier::group_label(r.group) << ',' << task_name(r.task) << ','
      << r.game_id << ',' << r.repetition << ',' << r.round << ',' << r.self_cents << ','
      << r.other_cents << ',' << r.choice << '\n';
  }
}

inline sim::ChoiceDataset read_choices_csv(const fs::path& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw data_error("empty choices file: " + path.string());
  sim::ChoiceDataset out;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cols = split_csv_line(line);
    if (cols.size() != 9) {
      throw data_error(path.string() + ":" + std::to_string(row) + ": expected 9 columns");
    }
    sim::ChoiceRecord r;
    r.participant_id = cols[0];
    r.group = hier::parse_group(cols[1]);
    r.task = parse_task(cols[2]);
    r.game_id = std::stoi(cols[3]);
    r.repetition = std::stoi(cols[4]);
    r.round = std::stoi(cols[5]);
    r.self_cents = std::stoll(cols[6]);
    r.other_cents = std::stoll(cols[7]);
    r.choice = std::stoi(cols[8]);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hyper-parameter JSON and simulation truth
// ---------------------------------------------------------------------------

inline nlohmann::json hyper_to_json(const hier::HyperParams& h) {
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& s : h.slots) {
    nlohmann::json j = {{"name", s.name}, {"group_specific", s.group_specific}};
    if (s.group_specific) {
      j["mu_b"] = s.mu_base;
      j["mu_t"] = s.mu_treat;
    } else {
      j["mu"] = s.mu_base;
    }
    slots.push_back(j);
  }
  nlohmann::json omega = nlohmann::json::array();
  const std::size_t k = h.k();
  for (std::size_t i = 0; i < k; ++i) {
    nlohmann::json rowj = nlohmann::json::array();
    for (std::size_t j = 0; j < k; ++j) rowj.push_back(h.omega[i * k + j]);
    omega.push_back(rowj);
  }
  return {{"slots", slots}, {"tau", h.tau}, {"omega", omega}};
}

inline hier::HyperParams hyper_from_json(const nlohmann::json& j) {
  hier::HyperParams h;
  if (!j.contains("slots") || !j.contains("tau") || !j.contains("omega")) {
    throw data_error("hyper json must contain slots, tau and omega");
  }
  for (const auto& sj : j.at("slots")) {
    hier::ParamSlot s;
    s.name = sj.at("name").get<std::string>();
    s.group_specific = sj.value("group_specific", false);
    if (s.group_specific) {
      s.mu_base = sj.at("mu_b").get<double>();
      s.mu_treat = sj.at("mu_t").get<double>();
    } else {
      s.mu_base = sj.at("mu").get<double>();
      s.mu_treat = s.mu_base;
    }
    h.slots.push_back(s);
  }
  h.tau = j.at("tau").get<std::vector<double>>();
  const auto& oj = j.at("omega");
  const std::size_t k = h.slots.size();
  if (oj.size() != k) throw data_error("hyper json: omega must be k x k");
  h.omega.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (oj[i].size() != k) throw data_error("hyper json: omega must be k x k");
    for (std::size_t jj = 0; jj < k; ++jj) h.omega[i * k + jj] = oj[i][jj].get<double>();
  }
  h.validate();
  return h;
}

inline nlohmann::json load_json(const fs::path& path) {
  auto f = open_in(path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw data_error("invalid json in " + path.string() + ": " + e.what());
  }
  return j;
}

inline void save_json(const fs::path& path, const nlohmann::json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

inline void write_truth_json(const fs::path& path, const sim::SimulatedDataset& ds) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : ds.participants) {
    nlohmann::json theta;
    for (std::size_t s = 0; s < ds.hyper.k(); ++s) theta[ds.hyper.slots[s].name] = p.theta[s];
    parts.push_back({{"id", p.id}, {"group", hier::group_label(p.group)}, {"theta", theta}});
  }
  save_json(path, {{"seed", ds.seed},
                   {"hyper", hyper_to_json(ds.hyper)},
                   {"participants", parts}});
}

// ---------------------------------------------------------------------------
// draws.bin: little-endian binary draw store
//   magic "CGNZDRW1" | u32 n_chains | u32 n_draws | u32 n_dims
//   | per dim: u32 name length, name bytes
//   | f64 values, row-major [chain][draw][dim]
// ---------------------------------------------------------------------------

inline void write_draws_bin(const fs::path& path, const infer::PosteriorDraws& d) {
  auto f = open_out(path);
  f.write("CGNZDRW1", 8);
  auto w32 = [&](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
  w32(static_cast<std::uint32_t>(d.n_chains));
  w32(static_cast<std::uint32_t>(d.n_draws));
  w32(static_cast<std::uint32_t>(d.n_dims()));
  for (const auto& name : d.names) {
    w32(static_cast<std::uint32_t>(name.size()));
    f.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  f.write(reinterpret_cast<const char*>(d.values.data()),
          static_cast<std::streamsize>(d.values.size() * sizeof(double)));
}

inline infer::PosteriorDraws read_draws_bin(const fs::path& path) {
  auto f = open_in(path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::string(magic, 8) != "CGNZDRW1") {
    throw data_error(path.string() + ": not a draws file");
  }
  auto r32 = [&]() {
    std::uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  infer::PosteriorDraws d;
  d.n_chains = r32();
  d.n_draws = r32();
  const std::uint32_t dims = r32();
  for (std::uint32_t i = 0; i < dims; ++i) {
    const std::uint32_t len = r32();
    std::string name(len, '\0');
    f.read(name.data(), len);
    d.names.push_back(std::move(name));
  }
  d.values.resize(d.n_chains * d.n_draws * dims);
  f.read(reinterpret_cast<char*>(d.values.data()),
         static_cast<std::streamsize>(d.values.size() * sizeof(double)));
  if (!f) throw data_error(path.string() + ": truncated draws file");
  return d;
}

inline std::uint64_t fnv64_file(const fs::path& path) {
  auto f = open_in(path);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[65536];
  while (f) {
    f.read(buf, sizeof(buf));
    const std::streamsize got = f.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

}  // namespace cognoise::io
