#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "finiteness.hpp"
#include "harness.hpp"
#include "membership.hpp"

namespace branchgroup {

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Stable id of a generator list: FNV-1a of the formatted words joined by ';'.
inline std::string generator_set_hash(const Group &group, const std::vector<Word> &gens) {
  std::string joined;
  for (const Word &g : gens)
    joined += group.format(g) + ";";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(joined)));
  return buf;
}

// ---------------------------------------------------------------------------
// Subgroup files: one word per line, '#' starts a comment.

inline std::vector<Word> parse_subgroup_text(const Group &group, std::istream &in) {
  std::vector<Word> gens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      gens.push_back(group.parse(line));
    } catch (const ParseError &e) {
      throw ParseError(e.position(), "line " + std::to_string(number) + ": " + e.detail());
    }
  }
  return gens;
}

inline std::vector<Word> load_subgroup_file(const Group &group, const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open subgroup file '" + path + "'");
  return parse_subgroup_text(group, in);
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json words_json(const Group &group, const std::vector<Word> &words) {
  nlohmann::json out = nlohmann::json::array();
  for (const Word &w : words)
    out.push_back(group.format(w));
  return out;
}

inline nlohmann::json to_json(const Group &group, const TraceStep &s) {
  nlohmann::json j{{"kind", to_string(s.kind)},
                   {"vertex", s.vertex.to_string()},
                   {"before", words_json(group, s.before)},
                   {"after", words_json(group, s.after)}};
  if (!s.note.empty())
    j["note"] = s.note;
  return j;
}

inline nlohmann::json to_json(const Group &group, const WholeGroupCertificate &c) {
  nlohmann::json j{{"kind", c.kind == WholeGroupCertificate::Kind::Products ? "products" : "roadmap"},
                   {"vertex", c.vertex.to_string()},
                   {"section_generators", words_json(group, c.section_generators)}};
  if (c.kind == WholeGroupCertificate::Kind::Products) {
    nlohmann::json products = nlohmann::json::object();
    const auto targets = preset_generators(group);
    for (std::size_t t = 0; t < c.products.size(); ++t)
      products[group.format(targets[t])] = c.products[t].to_string();
    j["products"] = products;
  } else {
    j["moving_generator"] = group.format(c.moving_generator);
  }
  return j;
}

inline nlohmann::json to_json(const Group &group, const FinitenessVerdict &v) {
  nlohmann::json j{{"verdict", to_string(v.kind)}};
  if (v.order)
    j["order"] = *v.order;
  if (v.witness)
    j["witness"] = to_json(group, *v.witness);
  if (!v.reason.empty())
    j["reason"] = v.reason;
  nlohmann::json trace = nlohmann::json::array();
  for (const TraceStep &s : v.trace)
    trace.push_back(to_json(group, s));
  j["trace"] = trace;
  return j;
}

inline nlohmann::json to_json(const MembershipVerdict &v) {
  nlohmann::json j{{"verdict", to_string(v.kind)}};
  if (v.witness)
    j["witness"] = v.witness->to_string();
  if (v.kind == MembershipVerdict::Kind::NotIn)
    j["level"] = v.level;
  if (!v.reason.empty())
    j["reason"] = v.reason;
  return j;
}

inline nlohmann::json to_json(const CheckReport &r, bool timings) {
  nlohmann::json j{{"name", r.name}, {"pass", r.pass}, {"seed", r.seed}};
  if (!r.counterexample.empty())
    j["counterexample"] = r.counterexample;
  if (timings)
    j["ms"] = r.ms;
  return j;
}

// ---------------------------------------------------------------------------
// Text

inline std::string join_words(const Group &group, const std::vector<Word> &words) {
  std::string out;
  for (const Word &w : words) {
    if (!out.empty())
      out += ", ";
    out += group.format(w);
  }
  return "<" + out + ">";
}

inline std::string render_text(const Group &group, const FinitenessVerdict &v) {
  std::ostringstream out;
  out << to_string(v.kind);
  if (v.order)
    out << " order " << *v.order;
  out << '\n';
  if (v.witness) {
    const WholeGroupCertificate &c = *v.witness;
    out << "witness vertex " << c.vertex.to_string() << " ("
        << (c.kind == WholeGroupCertificate::Kind::Products ? "products" : "roadmap") << ")\n";
    out << "  section generators " << join_words(group, c.section_generators) << '\n';
    if (c.kind == WholeGroupCertificate::Kind::Products) {
      const auto targets = preset_generators(group);
      for (std::size_t t = 0; t < c.products.size(); ++t)
        out << "  " << group.format(targets[t]) << " = " << c.products[t].to_string() << '\n';
    } else {
      out << "  moves level 1: " << group.format(c.moving_generator) << '\n';
    }
  }
  if (!v.reason.empty())
    out << "reason: " << v.reason << '\n';
  out << "trace:\n";
  for (const TraceStep &s : v.trace) {
    out << "  " << to_string(s.kind) << ' ' << s.vertex.to_string() << ' ' << join_words(group, s.before);
    if (!s.after.empty() || s.kind == TraceStep::Kind::Section || s.kind == TraceStep::Kind::Normalize)
      out << " -> " << join_words(group, s.after);
    if (!s.note.empty())
      out << " [" << s.note << ']';
    out << '\n';
  }
  return out.str();
}

inline std::string render_text(const MembershipVerdict &v) {
  std::string out = to_string(v.kind);
  if (v.kind == MembershipVerdict::Kind::In)
    out += " witness " + v.witness->to_string();
  if (v.kind == MembershipVerdict::Kind::NotIn)
    out += " level " + std::to_string(v.level);
  if (!v.reason.empty())
    out += " (" + v.reason + ")";
  return out;
}

} // namespace branchgroup
