#include "lrcurves/species.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lrcurves/angular.hpp"
#include "lrcurves/constants.hpp"

namespace lrc {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("species file: " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
}

double get_number(const json& obj, const std::string& where,
                  const std::string& key) {
  if (!obj.contains(key)) fail(where, "missing key '" + key + "'");
  if (!obj[key].is_number()) fail(where + "." + key, "expected a number");
  return obj[key].get<double>();
}

std::string get_string(const json& obj, const std::string& where,
                       const std::string& key) {
  if (!obj.contains(key)) fail(where, "missing key '" + key + "'");
  if (!obj[key].is_string()) fail(where + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

std::vector<TransitionChannel> load_channels(const json& arr,
                                             const std::string& where,
                                             bool atomic, bool allow_empty,
                                             bool allow_downward) {
  if (!arr.is_array()) fail(where, "expected an array");
  if (arr.empty() && !allow_empty) fail(where, "empty channel list");
  std::vector<TransitionChannel> out;
  int i = 0;
  for (const auto& c : arr) {
    const std::string wc = where + "[" + std::to_string(i++) + "]";
    std::set<std::string> keys = {"delta_e_cm1", "dipole_au", "label"};
    if (atomic) keys.insert("target_l");
    check_keys(c, wc, keys);
    TransitionChannel ch;
    ch.delta_e_cm1 = get_number(c, wc, "delta_e_cm1");
    ch.delta_e = cm1_to_hartree(ch.delta_e_cm1);
    ch.dipole = get_number(c, wc, "dipole_au");
    ch.label = get_string(c, wc, "label");
    if (atomic) {
      const double tl = get_number(c, wc, "target_l");
      ch.target_l = static_cast<int>(tl);
      if (ch.target_l != tl || ch.target_l < 0)
        fail(wc + ".target_l", "expected a non-negative integer");
    }
    if (ch.delta_e == 0.0) fail(wc + ".delta_e_cm1", "must be nonzero");
    if (!allow_downward && ch.delta_e < 0.0)
      fail(wc + ".delta_e_cm1", "downward channel not permitted here");
    if (ch.dipole < 0.0) fail(wc + ".dipole_au", "must be >= 0");
    out.push_back(std::move(ch));
  }
  return out;
}

double pole_sum(const std::vector<TransitionChannel>& ch, double z2) {
  double s = 0.0;
  for (const auto& c : ch)
    s += 2.0 * c.delta_e * c.dipole * c.dipole / (c.delta_e * c.delta_e - z2);
  return s;
}

const std::vector<TransitionChannel>& dimer_channels(const DimerSpecies& s,
                                                     Polarization kind) {
  return kind == Polarization::kParallel ? s.parallel_channels
                                         : s.perpendicular_channels;
}

json channels_to_json(const std::vector<TransitionChannel>& ch, bool atomic) {
  json arr = json::array();
  for (const auto& c : ch) {
    json o;
    o["delta_e_cm1"] = c.delta_e_cm1;
    o["dipole_au"] = c.dipole;
    if (atomic) o["target_l"] = c.target_l;
    o["label"] = c.label;
    arr.push_back(o);
  }
  return arr;
}

}  // namespace

SpeciesData load_species(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("species file: cannot open " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("species file: " + path + ": " + e.what());
  }

  check_keys(root, "top level", {"dimer", "atom", "masses"});
  for (const char* k : {"dimer", "atom", "masses"})
    if (!root.contains(k)) fail("top level", std::string("missing key '") + k + "'");

  SpeciesData s;

  const json& d = root["dimer"];
  check_keys(d, "dimer",
             {"name", "b_rot_cm1", "q20_au", "parallel_channels",
              "perpendicular_channels"});
  s.dimer.name = get_string(d, "dimer", "name");
  s.dimer.b_rot_cm1 = get_number(d, "dimer", "b_rot_cm1");
  s.dimer.b_rot = cm1_to_hartree(s.dimer.b_rot_cm1);
  if (s.dimer.b_rot <= 0.0) fail("dimer.b_rot_cm1", "must be > 0");
  s.dimer.q20 = get_number(d, "dimer", "q20_au");
  if (!d.contains("parallel_channels")) fail("dimer", "missing key 'parallel_channels'");
  if (!d.contains("perpendicular_channels")) fail("dimer", "missing key 'perpendicular_channels'");
  s.dimer.parallel_channels = load_channels(
      d["parallel_channels"], "dimer.parallel_channels", false, false, false);
  s.dimer.perpendicular_channels =
      load_channels(d["perpendicular_channels"], "dimer.perpendicular_channels",
                    false, false, false);

  const json& a = root["atom"];
  check_keys(a, "atom",
             {"name", "l", "r2_au", "channels", "core_channels"});
  s.atom.name = get_string(a, "atom", "name");
  const double l = get_number(a, "atom", "l");
  s.atom.l = static_cast<int>(l);
  if (s.atom.l != l || s.atom.l < 0) fail("atom.l", "expected a non-negative integer");
  s.atom.r2_expect = get_number(a, "atom", "r2_au");
  if (!a.contains("channels")) fail("atom", "missing key 'channels'");
  if (!a.contains("core_channels")) fail("atom", "missing key 'core_channels'");
  s.atom.channels =
      load_channels(a["channels"], "atom.channels", true, false, true);
  s.atom.core_channels = load_channels(a["core_channels"], "atom.core_channels",
                                       false, true, false);

  const json& m = root["masses"];
  check_keys(m, "masses", {"dimer_amu", "atom_amu"});
  s.dimer_mass_amu = get_number(m, "masses", "dimer_amu");
  s.atom_mass_amu = get_number(m, "masses", "atom_amu");
  if (s.dimer_mass_amu <= 0 || s.atom_mass_amu <= 0)
    fail("masses", "must be > 0");
  s.dimer.mass = amu_to_au(s.dimer_mass_amu);
  s.atom.mass = amu_to_au(s.atom_mass_amu);
  s.reduced_mass =
      s.dimer.mass * s.atom.mass / (s.dimer.mass + s.atom.mass);
  return s;
}

std::string species_to_json(const SpeciesData& s) {
  json root;
  root["dimer"]["name"] = s.dimer.name;
  root["dimer"]["b_rot_cm1"] = s.dimer.b_rot_cm1;
  root["dimer"]["q20_au"] = s.dimer.q20;
  root["dimer"]["parallel_channels"] =
      channels_to_json(s.dimer.parallel_channels, false);
  root["dimer"]["perpendicular_channels"] =
      channels_to_json(s.dimer.perpendicular_channels, false);
  root["atom"]["name"] = s.atom.name;
  root["atom"]["l"] = s.atom.l;
  root["atom"]["r2_au"] = s.atom.r2_expect;
  root["atom"]["channels"] = channels_to_json(s.atom.channels, true);
  root["atom"]["core_channels"] =
      channels_to_json(s.atom.core_channels, false);
  root["masses"]["dimer_amu"] = s.dimer_mass_amu;
  root["masses"]["atom_amu"] = s.atom_mass_amu;
  return root.dump(2) + "\n";
}

void save_species(const SpeciesData& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("species file: cannot write " + path);
  out << species_to_json(s);
}

double dimer_polarizability(const DimerSpecies& s, Polarization kind,
                            ImagFreq w) {
  return pole_sum(dimer_channels(s, kind), -w.omega * w.omega);
}

double dimer_polarizability(const DimerSpecies& s, Polarization kind,
                            RealFreq z) {
  const auto& ch = dimer_channels(s, kind);
  for (const auto& c : ch)
    if (std::abs(std::abs(z.z) - std::abs(c.delta_e)) < 1e-6)
      throw std::runtime_error(
          "dimer_polarizability: resonant evaluation near channel '" +
          c.label + "'");
  return pole_sum(ch, z.z * z.z);
}

double atomic_channel_polarizability(const AtomSpecies& a,
                                     const TransitionChannel& ch, ImagFreq w) {
  const double mu =
      ch.dipole * clebsch_gordan(a.l, 0, 1, 0, ch.target_l, 0) / std::sqrt(3.0);
  return 2.0 * ch.delta_e * mu * mu /
         (ch.delta_e * ch.delta_e + w.omega * w.omega);
}

double core_polarizability(const AtomSpecies& a, ImagFreq w) {
  return pole_sum(a.core_channels, -w.omega * w.omega);
}

}  // namespace lrc
