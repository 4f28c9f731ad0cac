// Command-line front end: word arithmetic, quotients, subgroup verdicts and
// the verification checks.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <branchgroup/finiteness.hpp>
#include <branchgroup/harness.hpp>
#include <branchgroup/membership.hpp>
#include <branchgroup/preset.hpp>
#include <branchgroup/quotient.hpp>
#include <branchgroup/serialize.hpp>

using namespace branchgroup;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, ParseFailure = 2, DomainFailure = 3, UnknownVerdict = 4 };

struct Settings {
  std::string group = "gs3";
  std::string preset_file;
  std::string format = "text";
  std::uint64_t seed = 20240531;
  int level_cap = 5;
  bool timings = false;
};

struct Output {
  bool json_lines = false;

  void emit(const json &j, const std::string &text) const {
    if (json_lines)
      std::cout << j.dump() << '\n';
    else
      std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
  }
};

std::string decomposition_text(const Group &g, const WreathDecomposition &d) {
  std::string out = "root " + d.root.to_cycle_string() + "\n";
  for (std::size_t i = 0; i < d.sections.size(); ++i)
    out += "section " + std::to_string(i) + ": " + g.format(d.sections[i]) + "\n";
  return out;
}

json decomposition_json(const Group &g, const WreathDecomposition &d) {
  return {{"root", d.root.to_cycle_string()}, {"sections", words_json(g, d.sections)}};
}

std::string order_text(const OrderResult &o, std::uint64_t cap) {
  switch (o.kind) {
  case OrderResult::Kind::Finite: return std::to_string(o.value);
  case OrderResult::Kind::ExceedsCap: return "exceeds cap " + std::to_string(cap);
  case OrderResult::Kind::Infinite: return "infinite";
  case OrderResult::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Computation in Gupta-Sidki groups and the Grigorchuk group"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  app.add_option("--group", s.group, "Built-in preset: gs3, gs5, gs7, grigorchuk")->capture_default_str();
  app.add_option("--preset-file", s.preset_file, "Preset JSON file (overrides --group)");
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--seed", s.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--level-cap", s.level_cap, "Deepest quotient level used by separations")->capture_default_str();
  app.add_flag("--timings", s.timings, "Include wall times in json output");

  std::string word, word2, path, file;
  std::vector<std::string> contains;
  bool decomp = false;
  std::uint64_t cap = 1'000'000;
  int depth = 0, level = 0;
  std::size_t word_cap = 2000;
  std::string filter;
  int budget = 3, samples = 1000;

  auto *eval = app.add_subcommand("eval", "Reduce a word");
  eval->add_option("word", word)->required();
  eval->add_flag("--decomp", decomp, "Print the wreath decomposition");

  auto *eq = app.add_subcommand("eq", "Compare two words, or decompose one");
  eq->add_option("word", word)->required();
  eq->add_option("other", word2);
  eq->add_flag("--decomp", decomp, "Print wreath decompositions");

  auto *order = app.add_subcommand("order", "Order of an element");
  order->add_option("word", word)->required();
  order->add_option("--cap", cap, "Largest order reported")->capture_default_str();

  auto *len = app.add_subcommand("len", "Syllable length");
  len->add_option("word", word)->required();

  auto *section = app.add_subcommand("section", "Section at a vertex");
  section->add_option("word", word)->required();
  section->add_option("vertex", path)->required();

  auto *portrait = app.add_subcommand("portrait", "Portrait to a given depth");
  portrait->add_option("word", word)->required();
  portrait->add_option("depth", depth)->required()->check(CLI::NonNegativeNumber);

  auto *quot = app.add_subcommand("quotient", "Order of the image in G/St(n)");
  quot->add_option("level", level)->required()->check(CLI::PositiveNumber);
  quot->add_option("--gens", file, "Subgroup file (default: the whole group)");
  quot->add_option("--contains", contains, "Words to test for membership in the image");

  auto *finite = app.add_subcommand("finite", "Decide finiteness of a subgroup");
  finite->add_option("file", file)->required();

  auto *member = app.add_subcommand("member", "Membership of a word in a subgroup");
  member->add_option("word", word)->required();
  member->add_option("file", file)->required();
  member->add_option("--word-cap", word_cap, "Largest product ball searched")->capture_default_str();

  auto *classify_cmd = app.add_subcommand("classify", "Finite, or infinite and commensurable with G or GxG");
  classify_cmd->add_option("file", file)->required();

  auto *verify = app.add_subcommand("verify", "Run the verification checks");
  verify->add_option("--filter", filter, "Only checks whose name contains this");
  verify->add_option("--budget", budget, "Level budget: 3, 4 or 5")->check(CLI::Range(3, 5))->capture_default_str();
  verify->add_option("--samples", samples, "Samples per length check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : ParseFailure;
  }

  Output out{s.format == "json"};
  try {
    GroupPreset preset = s.preset_file.empty() ? builtin_preset(s.group) : load_preset_file(s.preset_file);
    Group g(preset, Limits::from_environment());

    if (*eval) {
      Word w = g.parse(word);
      json j{{"command", "eval"}, {"word", g.format(w)}};
      std::string text = g.format(w);
      if (decomp) {
        WreathDecomposition d = g.decompose(w);
        j["decomposition"] = decomposition_json(g, d);
        text += "\n" + decomposition_text(g, d);
      }
      out.emit(j, text);
    } else if (*eq) {
      Word x = g.parse(word);
      json j{{"command", "eq"}};
      std::string text;
      if (!word2.empty() || eq->count("other")) {
        Word y = g.parse(word2);
        const bool same = g.equal(x, y);
        j["equal"] = same;
        text = same ? "true" : "false";
      }
      if (decomp) {
        WreathDecomposition d = g.decompose(x);
        j["decomposition"] = decomposition_json(g, d);
        text += (text.empty() ? "" : "\n") + decomposition_text(g, d);
      }
      out.emit(j, text);
    } else if (*order) {
      OrderResult o = g.order(g.parse(word), cap);
      json j{{"command", "order"}, {"word", g.format(g.parse(word))}};
      if (o.finite())
        j["order"] = o.value;
      else
        j["order"] = order_text(o, cap);
      out.emit(j, order_text(o, cap));
      if (o.kind == OrderResult::Kind::Unknown)
        return UnknownVerdict;
    } else if (*len) {
      Word w = g.parse(word);
      out.emit({{"command", "len"}, {"word", g.format(w)}, {"length", g.syllable_length(w)}},
               std::to_string(g.syllable_length(w)));
    } else if (*section) {
      Vertex v = Vertex::parse(path, g.degree());
      Word r = g.section(g.parse(word), v);
      out.emit({{"command", "section"}, {"vertex", v.to_string()}, {"section", g.format(r)}}, g.format(r));
    } else if (*portrait) {
      Portrait p = g.portrait(g.parse(word), depth);
      std::string text = g.render(p);
      out.emit({{"command", "portrait"}, {"depth", depth}, {"rendering", text}}, text);
    } else if (*quot) {
      std::vector<Word> gens = file.empty() ? preset_generators(g) : load_subgroup_file(g, file);
      QuotientGroup q = quotient(g, gens, level);
      json j{{"command", "quotient"}, {"level", level}, {"order", q.order().str()}};
      std::string text = q.order().str();
      for (const std::string &c : contains) {
        Word w = g.parse(c);
        const bool in = quotient_contains(g, q, w);
        j["contains"][g.format(w)] = in;
        text += "\n" + g.format(w) + ": " + (in ? "true" : "false");
      }
      out.emit(j, text);
    } else if (*finite || *classify_cmd) {
      SubgroupSpec h(g, load_subgroup_file(g, file));
      FinitenessVerdict v;
      json j{{"command", *finite ? "finite" : "classify"}};
      std::string label;
      if (*classify_cmd) {
        ClassifyResult c = classify(g, h);
        v = std::move(c.verdict);
        label = to_string(c.label);
      } else if (g.preset().is_grigorchuk()) {
        v = is_finite_grigorchuk(g, h);
      } else {
        v = is_finite_gs3(g, h);
      }
      j.update(to_json(g, v));
      std::string text = render_text(g, v);
      if (!label.empty()) {
        j["classification"] = label;
        text = label + "\n" + text;
      }
      out.emit(j, text);
      if (v.kind == FinitenessVerdict::Kind::Unknown)
        return UnknownVerdict;
    } else if (*member) {
      Word h = g.parse(word);
      SubgroupSpec k(g, load_subgroup_file(g, file));
      MembershipOptions options;
      options.word_cap = word_cap;
      options.level_cap = s.level_cap;
      MembershipVerdict v = membership(g, h, k, options);
      json j = to_json(v);
      j["command"] = "member";
      j["word"] = g.format(h);
      out.emit(j, render_text(v));
      if (v.kind == MembershipVerdict::Kind::Unknown)
        return UnknownVerdict;
    } else if (*verify) {
      if (!g.preset().is_gupta_sidki() || g.degree() != 3)
        throw Error("verify runs against gs3");
      HarnessOptions options;
      options.seed = s.seed;
      options.level_budget = budget;
      options.samples = samples;
      bool all = true;
      int count = 0;
      for (const CheckReport &r : run_checks(g, filter, options)) {
        all = all && r.pass;
        ++count;
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.1f", r.ms);
        std::string text = r.name + " " + (r.pass ? "PASS" : "FAIL") + " " + ms + "ms seed=" + std::to_string(r.seed);
        if (!r.counterexample.empty())
          text += " counterexample: " + r.counterexample;
        json j = to_json(r, s.timings);
        j["command"] = "verify";
        out.emit(j, text);
      }
      out.emit({{"command", "verify"}, {"summary", {{"checks", count}, {"all_pass", all}}}},
               std::string("summary: ") + std::to_string(count) + " checks, " + (all ? "all pass" : "FAILURES"));
      return all ? Ok : DomainFailure;
    }
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return ParseFailure;
  } catch (const UnknownSymbol &e) {
    std::cerr << "error: " << e.what() << '\n';
    return ParseFailure;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return DomainFailure;
  }
  return Ok;
}
