//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "apoflow/structures.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "apoflow/errors.hpp"
#include "apoflow/molgraph.hpp"

namespace apoflow {

namespace {

const std::unordered_set<std::string>& amino_acids() {
  static const std::unordered_set<std::string> table = {
      "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
      "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL"};
  return table;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string field(std::string_view line, std::size_t col0, std::size_t col1) {
  if (line.size() < col1) {
    if (line.size() <= col0) return {};
    col1 = line.size();
  }
  return trim(line.substr(col0, col1 - col0));
}

double parse_coord(std::string_view line, std::size_t col0, std::size_t col1,
                   std::size_t lineno) {
  const std::string text = field(line, col0, col1);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    throw ParseError("non-numeric coordinate '" + text + "' on line " +
                         std::to_string(lineno),
                     lineno);
  return v;
}

std::string element_from_name(const std::string& name) {
  for (char c : name) {
    if (std::isalpha(static_cast<unsigned char>(c)))
      return std::string(1, static_cast<char>(std::toupper(c)));
  }
  return {};
}

// Round half away from zero at 3 decimals, matching the column format.
double round3(double v) {
  return std::copysign(std::floor(std::abs(v) * 1000.0 + 0.5), v) / 1000.0;
}

}  // namespace

const Atom* Residue::c_alpha() const {
  for (const Atom& a : atoms)
    if (a.name == "CA") return &a;
  return nullptr;
}

int Structure::protein_atom_count() const {
  int n = 0;
  for (const Chain& c : chains)
    for (const Residue& r : c.residues) n += static_cast<int>(r.atoms.size());
  return n;
}

int Structure::residue_count() const {
  int n = 0;
  for (const Chain& c : chains) n += static_cast<int>(c.residues.size());
  return n;
}

Points Structure::protein_coords() const {
  Points out(protein_atom_count(), 3);
  Eigen::Index row = 0;
  for (const Chain& c : chains)
    for (const Residue& r : c.residues)
      for (const Atom& a : r.atoms) out.row(row++) = a.position.transpose();
  return out;
}

Points Structure::ca_coords() const {
  Points out(residue_count(), 3);
  Eigen::Index row = 0;
  for (const Chain& c : chains)
    for (const Residue& r : c.residues) {
      const Atom* ca = r.c_alpha();
      if (!ca) throw std::runtime_error("residue without CA atom");
      out.row(row++) = ca->position.transpose();
    }
  return out;
}

Points Structure::ligand_coords() const {
  Points out(static_cast<Eigen::Index>(ligand_atoms.size()), 3);
  for (std::size_t i = 0; i < ligand_atoms.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = ligand_atoms[i].position.transpose();
  return out;
}

void Structure::set_protein_coords(const Points& coords) {
  if (coords.rows() != protein_atom_count())
    throw std::invalid_argument("protein coordinate row count mismatch");
  Eigen::Index row = 0;
  for (Chain& c : chains)
    for (Residue& r : c.residues)
      for (Atom& a : r.atoms) a.position = coords.row(row++).transpose();
}

void Structure::set_ligand_coords(const Points& coords) {
  if (coords.rows() != static_cast<Eigen::Index>(ligand_atoms.size()))
    throw std::invalid_argument("ligand coordinate row count mismatch");
  for (std::size_t i = 0; i < ligand_atoms.size(); ++i)
    ligand_atoms[i].position =
        coords.row(static_cast<Eigen::Index>(i)).transpose();
}

Structure read_pdb(std::string_view text) {
  Structure out;
  std::set<std::string> closed_chains;
  std::optional<std::pair<std::string, int>> het_key;
  std::set<std::pair<std::string, int>> seen_het_keys;
  int next_fragment = 0;
  std::size_t residue_line = 0;  // first line of the current residue

  auto check_residue_ca = [&](const Residue& r) {
    int n_ca = 0;
    for (const Atom& a : r.atoms)
      if (a.name == "CA") ++n_ca;
    if (n_ca != 1)
      throw ParseError("residue " + r.label + " " + std::to_string(r.index) +
                           " has " + std::to_string(n_ca) +
                           " CA atoms (expected 1) near line " +
                           std::to_string(residue_line),
                       residue_line);
  };

  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(
        start, nl == std::string_view::npos ? text.size() - start : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.size() < 6) continue;

    const std::string_view record = line.substr(0, 6);
    const bool is_atom = record == "ATOM  ";
    const bool is_het = record == "HETATM";
    if (!is_atom && !is_het) continue;
    if (line.size() < 54)
      throw ParseError("truncated record on line " + std::to_string(lineno),
                       lineno);

    const std::string name = field(line, 12, 16);
    const std::string altloc = field(line, 16, 17);
    if (!altloc.empty())
      throw ParseError("alternate locations unsupported (line " +
                           std::to_string(lineno) + ")",
                       lineno);
    const std::string res_name = field(line, 17, 20);
    const std::string chain_id = field(line, 21, 22);
    const std::string res_seq_text = field(line, 22, 26);
    const std::string icode = field(line, 26, 27);
    if (!icode.empty())
      throw ParseError("insertion codes unsupported (line " +
                           std::to_string(lineno) + ")",
                       lineno);
    char* end = nullptr;
    const long res_seq = std::strtol(res_seq_text.c_str(), &end, 10);
    if (res_seq_text.empty() || end != res_seq_text.c_str() + res_seq_text.size())
      throw ParseError("malformed residue number on line " +
                           std::to_string(lineno),
                       lineno);

    Eigen::Vector3d pos;
    pos.x() = parse_coord(line, 30, 38, lineno);
    pos.y() = parse_coord(line, 38, 46, lineno);
    pos.z() = parse_coord(line, 46, 54, lineno);

    std::string element = field(line, 76, 78);
    if (element.empty()) element = element_from_name(name);
    if (element.empty())
      throw ParseError("missing element on line " + std::to_string(lineno),
                       lineno);
    if (element.size() > 1)
      element[1] = static_cast<char>(std::tolower(element[1]));
    if (element == "H" || element == "D") continue;
    if (res_name == "HOH") continue;

    if (is_het) {
      const auto key = std::make_pair(chain_id, static_cast<int>(res_seq));
      if (!het_key || *het_key != key) {
        if (seen_het_keys.count(key))
          throw ParseError("ligand residue reappears on line " +
                               std::to_string(lineno),
                           lineno);
        seen_het_keys.insert(key);
        het_key = key;
        ++next_fragment;
      }
      out.ligand_atoms.push_back({element, pos, next_fragment - 1});
      continue;
    }

    if (!amino_acids().count(res_name))
      throw ParseError("unknown residue name '" + res_name + "' on line " +
                           std::to_string(lineno),
                       lineno);

    if (out.chains.empty() || out.chains.back().id != chain_id) {
      if (closed_chains.count(chain_id))
        throw ParseError("chain " + chain_id + " reappears on line " +
                             std::to_string(lineno),
                         lineno);
      if (!out.chains.empty()) {
        closed_chains.insert(out.chains.back().id);
        check_residue_ca(out.chains.back().residues.back());
      }
      out.chains.push_back({chain_id, {}});
    }
    Chain& chain = out.chains.back();
    if (chain.residues.empty() ||
        chain.residues.back().index != static_cast<int>(res_seq)) {
      if (!chain.residues.empty()) {
        const int prev = chain.residues.back().index;
        if (res_seq <= prev)
          throw ParseError("residue numbering not increasing on line " +
                               std::to_string(lineno),
                           lineno);
        if (res_seq != prev + 1)
          throw ParseError("sequence gap (residues " + std::to_string(prev) +
                               " -> " + std::to_string(res_seq) +
                               ") on line " + std::to_string(lineno),
                           lineno);
        check_residue_ca(chain.residues.back());
      }
      chain.residues.push_back({res_name, static_cast<int>(res_seq), {}});
      residue_line = lineno;
    } else if (chain.residues.back().label != res_name) {
      throw ParseError("residue name conflict on line " + std::to_string(lineno),
                       lineno);
    }
    chain.residues.back().atoms.push_back({name, element, pos});
  }

  if (!out.chains.empty() && !out.chains.back().residues.empty())
    check_residue_ca(out.chains.back().residues.back());
  return out;
}

std::string write_pdb(const Structure& structure) {
  std::string out;
  char buf[128];
  int serial = 0;

  auto emit = [&](const char* record, const std::string& name,
                  const std::string& res_name, char chain, int res_seq,
                  const Eigen::Vector3d& pos, const std::string& element) {
    double xyz[3];
    for (int k = 0; k < 3; ++k) {
      xyz[k] = round3(pos[k]);
      if (xyz[k] >= 10000.0 || xyz[k] <= -1000.0)
        throw std::invalid_argument(
            "coordinate " + std::to_string(pos[k]) +
            " overflows the 8-column PDB field");
    }
    // Single-letter elements indent the atom name by one column.
    std::string padded = name;
    if (element.size() == 1 && padded.size() <= 3) padded = " " + padded;
    ++serial;
    std::snprintf(buf, sizeof(buf),
                  "%-6s%5d %-4s %3s %c%4d    %8.3f%8.3f%8.3f  1.00  0.00    "
                  "      %2s\n",
                  record, serial, padded.c_str(), res_name.c_str(), chain,
                  res_seq, xyz[0], xyz[1], xyz[2], element.c_str());
    out += buf;
  };

  for (const Chain& chain : structure.chains) {
    const char cid = chain.id.empty() ? 'A' : chain.id[0];
    for (const Residue& res : chain.residues)
      for (const Atom& atom : res.atoms)
        emit("ATOM", atom.name, res.label, cid, res.index, atom.position,
             atom.element);
    out += "TER\n";
  }
  int frag = -1;
  int frag_atom = 0;
  for (const Structure::LigandAtom& atom : structure.ligand_atoms) {
    if (atom.fragment_id != frag) {
      frag = atom.fragment_id;
      frag_atom = 0;
    }
    ++frag_atom;
    emit("HETATM", atom.element + std::to_string(frag_atom), "LIG", 'X',
         frag + 1, atom.position, atom.element);
  }
  out += "END\n";
  return out;
}

ComplexState concat_state(const Points& protein,
                          const std::vector<Points>& ligand_fragments,
                          double t) {
  Eigen::Index n_ligand = 0;
  for (const Points& f : ligand_fragments) n_ligand += f.rows();
  if (protein.rows() == 0 && n_ligand == 0)
    throw std::invalid_argument("empty protein and empty ligand");
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("time must lie in [0, 1]");
  if (!protein.allFinite())
    throw std::invalid_argument("non-finite protein coordinates");

  ComplexState state;
  state.coords.resize(protein.rows() + n_ligand, 3);
  state.coords.topRows(protein.rows()) = protein;
  Eigen::Index row = protein.rows();
  int frag = 0;
  state.partition.n_protein = protein.rows();
  state.partition.n_ligand = n_ligand;
  for (const Points& f : ligand_fragments) {
    if (!f.allFinite())
      throw std::invalid_argument("non-finite ligand coordinates");
    state.coords.middleRows(row, f.rows()) = f;
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      state.partition.fragment_ids.push_back(frag);
    row += f.rows();
    ++frag;
  }
  state.time = t;
  return state;
}

std::pair<Points, std::vector<Points>> split_state(const ComplexState& state) {
  Points protein = state.coords.topRows(state.partition.n_protein);
  std::vector<Points> fragments;
  Eigen::Index row = state.partition.n_protein;
  Eigen::Index i = 0;
  const auto& ids = state.partition.fragment_ids;
  while (i < state.partition.n_ligand) {
    Eigen::Index j = i;
    while (j < state.partition.n_ligand && ids[j] == ids[i]) ++j;
    fragments.push_back(state.coords.middleRows(row + i, j - i));
    i = j;
  }
  return {std::move(protein), std::move(fragments)};
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string write_trajectory(const Trajectory& trajectory) {
  std::string out;
  const Partition* partition = nullptr;
  if (!trajectory.frames.empty())
    partition = &trajectory.frames.front().state.partition;

  out += "{\"format\":\"apoflow.traj\",\"version\":1,\"seed\":";
  out += std::to_string(trajectory.seed);
  out += ",\"steps\":" + std::to_string(trajectory.config.steps);
  out += ",\"eta\":";
  append_double(out, trajectory.config.eta);
  out += ",\"clamp_lo\":";
  append_double(out, trajectory.config.clamp_lo);
  out += ",\"clamp_hi\":";
  append_double(out, trajectory.config.clamp_hi);
  out += ",\"align_each_step\":";
  out += trajectory.config.align_each_step ? "true" : "false";
  out += ",\"align_protein_only\":";
  out += trajectory.config.align_protein_only ? "true" : "false";
  out += ",\"n_protein\":";
  out += std::to_string(partition ? partition->n_protein : 0);
  out += ",\"n_ligand\":";
  out += std::to_string(partition ? partition->n_ligand : 0);
  out += ",\"fragment_ids\":[";
  if (partition) {
    for (std::size_t i = 0; i < partition->fragment_ids.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(partition->fragment_ids[i]);
    }
  }
  out += "]}\n";

  for (const TrajectoryFrame& frame : trajectory.frames) {
    if (partition && !(frame.state.partition == *partition))
      throw std::invalid_argument("trajectory frames disagree on partition");
    out += "{\"n\":" + std::to_string(frame.step) + ",\"t\":";
    append_double(out, frame.time);
    out += ",\"coords\":[";
    for (Eigen::Index r = 0; r < frame.state.coords.rows(); ++r) {
      if (r) out += ',';
      out += '[';
      append_double(out, frame.state.coords(r, 0));
      out += ',';
      append_double(out, frame.state.coords(r, 1));
      out += ',';
      append_double(out, frame.state.coords(r, 2));
      out += ']';
    }
    out += "]}\n";
  }
  return out;
}

Trajectory read_trajectory(std::string_view text) {
  using nlohmann::json;
  Trajectory out;
  std::size_t lineno = 0;
  bool have_header = false;
  Partition partition;

  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(
        start, nl == std::string_view::npos ? text.size() - start : nl - start);
    start = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    if (trim(line).empty()) continue;

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw ParseError("truncated or malformed line " + std::to_string(lineno),
                       lineno);

    if (!have_header) {
      if (!j.is_object() || j.value("format", "") != "apoflow.traj")
        throw ParseError("missing trajectory metadata header", lineno);
      if (j.value("version", 0) != 1)
        throw ParseError("unsupported trajectory version", lineno);
      out.seed = j.at("seed").get<std::uint64_t>();
      out.config.steps = j.at("steps").get<int>();
      out.config.eta = j.at("eta").get<double>();
      out.config.clamp_lo = j.at("clamp_lo").get<double>();
      out.config.clamp_hi = j.at("clamp_hi").get<double>();
      out.config.align_each_step = j.at("align_each_step").get<bool>();
      out.config.align_protein_only = j.at("align_protein_only").get<bool>();
      partition.n_protein = j.at("n_protein").get<Eigen::Index>();
      partition.n_ligand = j.at("n_ligand").get<Eigen::Index>();
      partition.fragment_ids = j.at("fragment_ids").get<std::vector<int>>();
      have_header = true;
      continue;
    }

    TrajectoryFrame frame;
    try {
      frame.step = j.at("n").get<int>();
      frame.time = j.at("t").get<double>();
      const auto& coords = j.at("coords");
      frame.state.coords.resize(static_cast<Eigen::Index>(coords.size()), 3);
      for (std::size_t r = 0; r < coords.size(); ++r) {
        const auto& row = coords[r];
        if (row.size() != 3) throw std::out_of_range("bad coordinate row");
        for (int k = 0; k < 3; ++k)
          frame.state.coords(static_cast<Eigen::Index>(r), k) =
              row[k].get<double>();
      }
    } catch (const json::exception&) {
      throw ParseError("malformed frame on line " + std::to_string(lineno),
                       lineno);
    } catch (const std::out_of_range&) {
      throw ParseError("malformed frame on line " + std::to_string(lineno),
                       lineno);
    }
    if (frame.state.coords.rows() != partition.n_protein + partition.n_ligand)
      throw ParseError("frame row count disagrees with header on line " +
                           std::to_string(lineno),
                       lineno);
    frame.state.partition = partition;
    frame.state.time = frame.time;

    if (out.frames.empty()) {
      if (frame.time != 0.0)
        throw ParseError("first frame must be the prior sample at t = 0",
                         lineno);
    } else if (frame.time <= out.frames.back().time) {
      throw ParseError("non-monotone frame times on line " +
                           std::to_string(lineno),
                       lineno);
    }
    out.frames.push_back(std::move(frame));
  }

  if (!have_header) throw ParseError("missing trajectory metadata header", 1);
  return out;
}

Structure state_to_structure(const Structure& protein_template,
                             const MolGraph& ligand,
                             const ComplexState& state) {
  if (state.partition.n_protein != protein_template.protein_atom_count())
    throw std::invalid_argument("state protein block does not match template");
  if (state.partition.n_ligand != ligand.atom_count())
    throw std::invalid_argument("state ligand block does not match graph");

  Structure out = protein_template;
  out.set_protein_coords(state.coords.topRows(state.partition.n_protein));
  out.ligand_atoms.clear();
  for (int i = 0; i < ligand.atom_count(); ++i) {
    const Eigen::Index row = state.partition.n_protein + i;
    out.ligand_atoms.push_back({ligand.atoms[i],
                                state.coords.row(row).transpose(),
                                ligand.fragment_ids[i]});
  }
  return out;
}

}  // namespace apoflow
