#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "parser.hpp"
#include "permutation.hpp"
#include "word.hpp"

namespace branchgroup {

enum class PresetFamily { GuptaSidki, Grigorchuk, Custom };

/// Recursion data for one generator: its action on the first level and the
/// restrictions ("sections") to the p subtrees below it.
struct GeneratorRecursion {
  Permutation root;
  std::vector<Word> sections;
};

/// A self-similar group given by a table of generator recursions.
struct GroupPreset {
  std::string name;
  int degree = 0;
  Alphabet alphabet;
  std::vector<GeneratorRecursion> recursion;
  PresetFamily family = PresetFamily::Custom;

  bool is_gupta_sidki() const { return family == PresetFamily::GuptaSidki; }
  bool is_grigorchuk() const { return family == PresetFamily::Grigorchuk; }
};

inline bool is_prime(int n) {
  if (n < 2)
    return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

/// Gupta-Sidki p-group: a = (0 1 ... p-1), b = (a, a^-1, 1, ..., 1, b).
inline GroupPreset gupta_sidki(int p) {
  if (p <= 2 || !is_prime(p))
    throw NotOddPrime("Gupta-Sidki groups need an odd prime, got " + std::to_string(p));
  GroupPreset g;
  g.name = "gs" + std::to_string(p);
  g.degree = p;
  g.family = PresetFamily::GuptaSidki;
  g.alphabet.names = {"a", "b"};
  g.alphabet.orders = {p, p};
  g.alphabet.rooted = Symbol{0};

  std::vector<Point> shift(p);
  for (int i = 0; i < p; ++i)
    shift[i] = static_cast<Point>((i + 1) % p);
  g.recursion.push_back({Permutation(shift), std::vector<Word>(p)});

  auto letter = [&](Symbol s, int e) { return reduce(std::vector<Letter>{{s, e}}, g.alphabet); };
  std::vector<Word> b_sections(p);
  b_sections[0] = letter(0, 1);
  b_sections[1] = letter(0, -1);
  b_sections[p - 1] = letter(1, 1);
  g.recursion.push_back({Permutation::identity(p), std::move(b_sections)});
  return g;
}

/// First Grigorchuk group on the binary tree: a swaps the two subtrees,
/// b = (a, c), c = (a, d), d = (1, b).
inline GroupPreset grigorchuk() {
  GroupPreset g;
  g.name = "grigorchuk";
  g.degree = 2;
  g.family = PresetFamily::Grigorchuk;
  g.alphabet.names = {"a", "b", "c", "d"};
  g.alphabet.orders = {2, 2, 2, 2};
  g.alphabet.rooted = Symbol{0};
  auto letter = [&](Symbol s) { return reduce(std::vector<Letter>{{s, 1}}, g.alphabet); };
  g.recursion.push_back({Permutation(std::vector<Point>{1, 0}), {Word{}, Word{}}});
  g.recursion.push_back({Permutation::identity(2), {letter(0), letter(2)}});
  g.recursion.push_back({Permutation::identity(2), {letter(0), letter(3)}});
  g.recursion.push_back({Permutation::identity(2), {Word{}, letter(1)}});
  return g;
}

/// Looks up a built-in preset by id: gs<p> for odd primes p, or grigorchuk.
inline GroupPreset builtin_preset(const std::string &id) {
  if (id == "grigorchuk")
    return grigorchuk();
  if (id.size() > 2 && id.starts_with("gs")) {
    int p = 0;
    for (char c : id.substr(2)) {
      if (c < '0' || c > '9')
        throw PresetError("unknown preset '" + id + "'");
      p = p * 10 + (c - '0');
      if (p > 1000)
        throw PresetError("unknown preset '" + id + "'");
    }
    return gupta_sidki(p);
  }
  throw PresetError("unknown preset '" + id + "'");
}

// ---------------------------------------------------------------------------
// Preset files
//
// {
//   "name": "gs3",
//   "p": 3,
//   "family": "gupta-sidki" | "grigorchuk" | "custom",   (optional)
//   "rooted": "a",                                          (optional)
//   "alphabet": [ {"symbol": "a", "order": 3}, ... ],
//   "recursion": { "a": {"perm": "(0 1 2)", "sections": ["", "", ""]}, ... }
// }

inline nlohmann::json preset_to_json(const GroupPreset &g) {
  nlohmann::json j;
  j["name"] = g.name;
  j["p"] = g.degree;
  j["family"] = g.family == PresetFamily::GuptaSidki  ? "gupta-sidki"
                : g.family == PresetFamily::Grigorchuk ? "grigorchuk"
                                                       : "custom";
  if (g.alphabet.rooted)
    j["rooted"] = g.alphabet.names.at(*g.alphabet.rooted);
  j["alphabet"] = nlohmann::json::array();
  for (std::size_t i = 0; i < g.alphabet.size(); ++i)
    j["alphabet"].push_back({{"symbol", g.alphabet.names[i]}, {"order", g.alphabet.orders[i]}});
  j["recursion"] = nlohmann::json::object();
  for (std::size_t i = 0; i < g.alphabet.size(); ++i) {
    nlohmann::json sections = nlohmann::json::array();
    for (const Word &w : g.recursion[i].sections)
      sections.push_back(w.empty() ? std::string() : format_word(w, g.alphabet));
    j["recursion"][g.alphabet.names[i]] = {{"perm", g.recursion[i].root.to_cycle_string()},
                                           {"sections", sections}};
  }
  return j;
}

inline GroupPreset preset_from_json(const nlohmann::json &j) {
  try {
    GroupPreset g;
    g.name = j.at("name").get<std::string>();
    g.degree = j.at("p").get<int>();
    if (g.degree < 2 || g.degree > 64)
      throw PresetError("p must lie in [2, 64]");
    std::string family = j.value("family", "custom");
    g.family = family == "gupta-sidki"  ? PresetFamily::GuptaSidki
               : family == "grigorchuk" ? PresetFamily::Grigorchuk
                                        : PresetFamily::Custom;
    for (const auto &entry : j.at("alphabet")) {
      std::string symbol = entry.at("symbol").get<std::string>();
      int order = entry.at("order").get<int>();
      if (symbol.size() != 1 || symbol[0] < 'a' || symbol[0] > 'z')
        throw PresetError("symbols must be single lowercase letters, got '" + symbol + "'");
      if (order < 2)
        throw PresetError("generator orders must be at least 2");
      if (g.alphabet.find(symbol))
        throw PresetError("duplicate symbol '" + symbol + "'");
      g.alphabet.names.push_back(symbol);
      g.alphabet.orders.push_back(order);
    }
    if (g.alphabet.size() == 0 || g.alphabet.size() > 26)
      throw PresetError("alphabet must have between 1 and 26 symbols");
    if (j.contains("rooted")) {
      auto r = g.alphabet.find(j.at("rooted").get<std::string>());
      if (!r)
        throw PresetError("rooted symbol is not in the alphabet");
      g.alphabet.rooted = r;
    }
    const auto &table = j.at("recursion");
    for (std::size_t i = 0; i < g.alphabet.size(); ++i) {
      const auto &row = table.at(g.alphabet.names[i]);
      GeneratorRecursion rec;
      rec.root = Permutation::from_cycles(row.at("perm").get<std::string>(), static_cast<std::size_t>(g.degree));
      for (const auto &s : row.at("sections"))
        rec.sections.push_back(parse_word(s.get<std::string>(), g.alphabet));
      if (rec.sections.size() != static_cast<std::size_t>(g.degree))
        throw PresetError("generator '" + g.alphabet.names[i] + "' needs exactly p sections");
      g.recursion.push_back(std::move(rec));
    }
    return g;
  } catch (const nlohmann::json::exception &e) {
    throw PresetError(std::string("malformed preset: ") + e.what());
  } catch (const ParseError &e) {
    throw PresetError(std::string("bad section word in preset: ") + e.what());
  }
}

inline GroupPreset load_preset_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw PresetError("cannot open preset file '" + path + "'");
  try {
    return preset_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error &e) {
    throw PresetError(std::string("malformed preset file: ") + e.what());
  }
}

} // namespace branchgroup
