#include "ionsim/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ionsim/csv.hpp"
#include "ionsim/errors.hpp"

namespace ionsim {

TrapConfig RunConfig::trap_for(int n) const {
  TrapConfig trap;
  trap.ion_count = n;
  trap.ion_mass = ion_mass_amu * kAtomicMassUnit;
  trap.omega_x = kTwoPi * freq_x_hz;
  trap.omega_z = kTwoPi * freq_z_hz;
  trap.k_vec = k_vec_rad_per_m;
  trap.gate_ions = gate_pair_for(n);
  return trap;
}

std::pair<int, int> RunConfig::gate_pair_for(int n) const {
  if (!gate_ions_auto) return {gate_ion_a, gate_ion_b};
  // centre pair: for odd N the middle ion and its right neighbour
  const int a = (n - 1) / 2;
  return {a, a + 1};
}

NoiseModel RunConfig::noise_for(int n) const {
  NoiseChannel channel;
  if (noise_channel == "heating") channel = NoiseChannel::kHeating;
  else if (noise_channel == "dephasing") channel = NoiseChannel::kDephasing;
  else if (noise_channel == "both") channel = NoiseChannel::kBoth;
  else throw ConfigError("unknown noise channel: " + noise_channel);
  if (noise_model == "com_linear") return com_linear_noise(n, noise_gamma, channel);
  if (noise_model == "uniform") return uniform_noise(n, noise_gamma, channel);
  throw ConfigError("unknown noise model: " + noise_model);
}

void RunConfig::validate() const {
  if (sweep_n.empty() || sweep_delta_min_hz.empty() || sweep_tau_us.empty()) {
    throw ConfigError("sweep lists must be non-empty");
  }
  for (int n : sweep_n) {
    if (n < 1) throw ConfigError("sweep ion counts must be >= 1");
  }
  for (double d : sweep_delta_min_hz) {
    if (!(d > 0)) throw ConfigError("delta_min values must be positive");
  }
  for (double t : sweep_tau_us) {
    if (!(t > 0)) throw ConfigError("tau values must be positive");
  }
  if (noise_gamma < 0) throw ConfigError("noise rate must be >= 0");
  if (noise_model != "com_linear" && noise_model != "uniform") {
    throw ConfigError("unknown noise model: " + noise_model);
  }
  if (noise_channel != "heating" && noise_channel != "dephasing" &&
      noise_channel != "both") {
    throw ConfigError("unknown noise channel: " + noise_channel);
  }
  if (!(freq_x_hz > 0) || !(freq_z_hz > 0)) {
    throw ConfigError("trap frequencies must be positive");
  }
  if (n_segments != 0 && (n_segments < 2 || n_segments % 2 != 0)) {
    throw ConfigError("segments must be even (or auto)");
  }
  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

double to_double(const std::string& s, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("invalid number for " + key + ": '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& key) {
  const double v = to_double(s, key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ConfigError(key + " must be an integer");
  return i;
}

bool to_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(key + " must be true or false");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section header at line " + std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;

    if (full == "trap.ion_count") cfg.ion_count = to_int(value, full);
    else if (full == "trap.ion_mass_amu") cfg.ion_mass_amu = to_double(value, full);
    else if (full == "trap.freq_x_hz") cfg.freq_x_hz = to_double(value, full);
    else if (full == "trap.freq_z_hz") cfg.freq_z_hz = to_double(value, full);
    else if (full == "trap.k_vec_rad_per_m") cfg.k_vec_rad_per_m = to_double(value, full);
    else if (full == "trap.gate_ions") {
      if (value == "auto") {
        cfg.gate_ions_auto = true;
      } else {
        const auto parts = split_list(value);
        if (parts.size() != 2) throw ConfigError("gate_ions must be 'auto' or 'a, b'");
        cfg.gate_ions_auto = false;
        cfg.gate_ion_a = to_int(parts[0], full);
        cfg.gate_ion_b = to_int(parts[1], full);
      }
    } else if (full == "sweep.n") {
      cfg.sweep_n.clear();
      for (const auto& p : split_list(value)) cfg.sweep_n.push_back(to_int(p, full));
    } else if (full == "sweep.delta_min_hz") {
      cfg.sweep_delta_min_hz.clear();
      for (const auto& p : split_list(value))
        cfg.sweep_delta_min_hz.push_back(to_double(p, full));
    } else if (full == "sweep.tau_us") {
      cfg.sweep_tau_us.clear();
      for (const auto& p : split_list(value))
        cfg.sweep_tau_us.push_back(to_double(p, full));
    } else if (full == "sweep.segments") {
      cfg.n_segments = value == "auto" ? 0 : to_int(value, full);
    } else if (full == "noise.model") cfg.noise_model = value;
    else if (full == "noise.gamma_per_s") cfg.noise_gamma = to_double(value, full);
    else if (full == "noise.channel") cfg.noise_channel = value;
    else if (full == "sim.fock_cutoff") cfg.sim.fock_cutoff = to_int(value, full);
    else if (full == "sim.initial_nbar") cfg.sim.initial_nbar = to_double(value, full);
    else if (full == "sim.rk_substeps_per_segment")
      cfg.sim.rk_substeps_per_segment = to_int(value, full);
    else if (full == "sim.rk_steps_per_cycle")
      cfg.sim.rk_steps_per_cycle = to_int(value, full);
    else if (full == "sim.leakage_tol") cfg.sim.leakage_tol = to_double(value, full);
    else if (full == "drift.xi_omega_hz")
      cfg.drift.xi_omega = kTwoPi * to_double(value, full);
    else if (full == "drift.xi_rabi") cfg.drift.xi_rabi = to_double(value, full);
    else if (full == "output.dir") cfg.output_dir = value;
    else if (full == "output.plots") cfg.plots = to_bool(value, full);
    else if (full == "seed" || full == "output.seed")
      cfg.seed = static_cast<unsigned>(to_int(value, full));
    else throw ConfigError("unknown config key: " + full);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  auto num = [](double v) { return csv::format_double(v); };
  auto list_d = [&](const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s;
  };
  out << "seed = " << cfg.seed << "\n\n";
  out << "[trap]\n";
  out << "ion_count = " << cfg.ion_count << "\n";
  out << "ion_mass_amu = " << num(cfg.ion_mass_amu) << "\n";
  out << "freq_x_hz = " << num(cfg.freq_x_hz) << "\n";
  out << "freq_z_hz = " << num(cfg.freq_z_hz) << "\n";
  out << "k_vec_rad_per_m = " << num(cfg.k_vec_rad_per_m) << "\n";
  if (cfg.gate_ions_auto) {
    out << "gate_ions = auto\n";
  } else {
    out << "gate_ions = " << cfg.gate_ion_a << ", " << cfg.gate_ion_b << "\n";
  }
  out << "\n[sweep]\n";
  out << "n = ";
  for (size_t i = 0; i < cfg.sweep_n.size(); ++i)
    out << (i ? ", " : "") << cfg.sweep_n[i];
  out << "\n";
  out << "delta_min_hz = " << list_d(cfg.sweep_delta_min_hz) << "\n";
  out << "tau_us = " << list_d(cfg.sweep_tau_us) << "\n";
  if (cfg.n_segments > 0) {
    out << "segments = " << cfg.n_segments << "\n";
  } else {
    out << "segments = auto\n";
  }
  out << "\n[noise]\n";
  out << "model = " << cfg.noise_model << "\n";
  out << "gamma_per_s = " << num(cfg.noise_gamma) << "\n";
  out << "channel = " << cfg.noise_channel << "\n";
  out << "\n[sim]\n";
  out << "fock_cutoff = " << cfg.sim.fock_cutoff << "\n";
  out << "initial_nbar = " << num(cfg.sim.initial_nbar) << "\n";
  out << "rk_substeps_per_segment = " << cfg.sim.rk_substeps_per_segment << "\n";
  out << "rk_steps_per_cycle = " << cfg.sim.rk_steps_per_cycle << "\n";
  out << "leakage_tol = " << num(cfg.sim.leakage_tol) << "\n";
  out << "\n[drift]\n";
  out << "xi_omega_hz = " << num(cfg.drift.xi_omega / kTwoPi) << "\n";
  out << "xi_rabi = " << num(cfg.drift.xi_rabi) << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.output_dir << "\n";
  out << "plots = " << (cfg.plots ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace ionsim
