#include "epdyn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "epdyn/errors.hpp"

namespace epdyn::cli {

namespace {

struct HelpRequested {
  std::string text;
};

std::vector<EpSet> parse_sets(const std::vector<std::string>& literals) {
  std::vector<EpSet> out;
  for (const auto& s : literals) out.push_back(parse_epset(s));
  return out;
}

Json literal_list(const std::vector<SymbolicPoint>& points) {
  Json out = Json::array();
  for (const auto& p : points) out.push_back(p.literal());
  return out;
}

// Output field a bare `$step` reference expands to, per command.
const std::map<std::string, std::string>& primary_fields() {
  static const std::map<std::string, std::string> fields{
      {"set normalize", "set"},     {"set algebra", "members"},   {"dyn shift", "point"},
      {"dyn ae", "solution"},       {"dyn eaet", "solution"},     {"dyn eaetp", "solutions"},
      {"dyn orbit", "closure"},     {"dyn encode", "point"},      {"dyn cover", "m"},
      {"ip fs", "sums"},            {"ip construct", "generator"}, {"ip limit", "pass"},
      {"ip hindman", "witness"},    {"ip iht", "witness"},        {"ip pipeline", "terms"},
      {"filter member", "member"},  {"filter build", "generator"}, {"filter verify", "all_pass"},
      {"filter dset", "dset"},      {"filter ulimit", "limit"},   {"filter extend", "generator"},
      {"set member", "member"},     {"set syndetic", "syndetic"}, {"dyn ur", "uniformly_recurrent"},
      {"dyn proximal", "proximal"}, {"filter central", "filter"}};
  return fields;
}

std::string command_key(const std::vector<std::string>& tokens) {
  return tokens.size() >= 2 ? tokens[0] + " " + tokens[1] : std::string{};
}

Algebra scope_algebra(const std::vector<EpSet>& sets, const Options& options) {
  return generate_algebra(sets, true, options.cap);
}

// Builds the command tree; `result` receives the callback output.
void add_commands(CLI::App& app, Json& result, const Options& options) {
  app.require_subcommand(1);

  // ---- set ----
  auto* set = app.add_subcommand("set", "eventually periodic sets");
  set->require_subcommand(1);
  {
    auto* c = set->add_subcommand("normalize", "canonical form of a set literal");
    auto lit = std::make_shared<std::string>();
    c->add_option("set", *lit)->required();
    c->callback([&result, lit] {
      const EpSet x = parse_epset(*lit);
      result = Json{{"set", x.literal()}, {"preperiod", x.preperiod_length()}, {"period", x.period_length()}};
    });
  }
  {
    auto* c = set->add_subcommand("member", "n in X");
    auto lit = std::make_shared<std::string>();
    auto n = std::make_shared<std::uint64_t>();
    c->add_option("set", *lit)->required();
    c->add_option("n", *n)->required();
    c->callback([&result, lit, n] { result = Json{{"member", parse_epset(*lit).contains(*n)}}; });
  }
  {
    auto* c = set->add_subcommand("syndetic", "exact syndeticity with gap bound");
    auto lit = std::make_shared<std::string>();
    c->add_option("set", *lit)->required();
    c->callback([&result, lit] { result = to_json(is_syndetic(parse_epset(*lit))); });
  }
  {
    auto* c = set->add_subcommand("algebra", "generated algebra, closed under X - n unless --plain");
    auto lits = std::make_shared<std::vector<std::string>>();
    auto plain = std::make_shared<bool>(false);
    c->add_option("sets", *lits)->required();
    c->add_flag("--plain", *plain, "Boolean closure only");
    c->callback([&result, &options, lits, plain] {
      result = to_json(generate_algebra(parse_sets(*lits), !*plain, options.cap));
    });
  }

  // ---- dyn ----
  auto* dyn = app.add_subcommand("dyn", "shift dynamics on stacked sequences");
  dyn->require_subcommand(1);
  {
    auto* c = dyn->add_subcommand("shift", "T^n x");
    auto point = std::make_shared<std::string>();
    auto n = std::make_shared<std::uint64_t>();
    c->add_option("--point", *point)->required();
    c->add_option("n", *n)->required();
    c->callback([&result, point, n] { result = Json{{"point", shift(parse_point(*point), *n).literal()}}; });
  }
  {
    auto* c = dyn->add_subcommand("ur", "exact uniform recurrence");
    auto point = std::make_shared<std::string>();
    c->add_option("--point", *point)->required();
    c->callback([&result, point] { result = to_json(is_uniformly_recurrent(parse_point(*point))); });
  }
  {
    auto* c = dyn->add_subcommand("proximal", "exact proximality of x and y");
    auto x = std::make_shared<std::string>(), y = std::make_shared<std::string>();
    c->add_option("x", *x)->required();
    c->add_option("y", *y)->required();
    c->callback([&result, x, y] { result = to_json(are_proximal(parse_point(*x), parse_point(*y))); });
  }
  {
    auto* c = dyn->add_subcommand("ae", "uniformly recurrent point proximal to x");
    auto point = std::make_shared<std::string>();
    c->add_option("--point", *point)->required();
    c->callback([&result, point] {
      const SymbolicPoint x = parse_point(*point);
      const SymbolicPoint y = ae_solve(x);
      const bool ur = is_uniformly_recurrent(y).uniformly_recurrent;
      const bool prox = are_proximal(x, y).proximal;
      result = Json{{"point", x.literal()},
                    {"solution", y.literal()},
                    {"uniformly_recurrent", ur},
                    {"proximal", prox},
                    {"all_pass", ur && prox}};
    });
  }
  {
    auto* c = dyn->add_subcommand("eaet", "extend an AET pair (x1, y1) to x2");
    auto x1 = std::make_shared<std::string>(), y1 = std::make_shared<std::string>(),
         x2 = std::make_shared<std::string>();
    c->add_option("x1", *x1)->required();
    c->add_option("y1", *y1)->required();
    c->add_option("x2", *x2)->required();
    c->callback([&result, x1, y1, x2] {
      const SymbolicPoint a = parse_point(*x1), b = parse_point(*y1), p = parse_point(*x2);
      const SymbolicPoint y2 = eaet_extend(a, b, p);
      const bool ok = !aet_pair_failure(stack(a, p), stack(b, y2)).has_value();
      result = Json{{"solution", y2.literal()}, {"pair", stack(b, y2).literal()}, {"all_pass", ok}};
    });
  }
  {
    auto* c = dyn->add_subcommand("eaetp", "iterated extension along block codes");
    auto point = std::make_shared<std::string>();
    auto codes = std::make_shared<std::vector<std::string>>();
    c->add_option("--point", *point)->required();
    c->add_option("codes", *codes);
    c->callback([&result, point, codes] {
      std::vector<BlockCode> parsed;
      for (const auto& s : *codes) parsed.push_back(parse_block_code(s));
      const auto r = eaet_prime(parse_point(*point), parsed);
      result = Json{{"targets", literal_list(r.targets)}, {"solutions", literal_list(r.solutions)}};
    });
  }
  {
    auto* c = dyn->add_subcommand("cover", "covering bound of a cylinder for a periodic point");
    auto point = std::make_shared<std::string>(), cyl = std::make_shared<std::string>();
    c->add_option("--point", *point)->required();
    c->add_option("cylinder", *cyl, "coord_depth,pos_depth@point")->required();
    c->callback([&result, point, cyl] {
      const Cylinder u = parse_cylinder(*cyl);
      result = Json{{"cylinder", u.literal()}, {"m", covering_bound(parse_point(*point), u)}};
    });
  }
  {
    auto* c = dyn->add_subcommand("orbit", "orbit closure");
    auto point = std::make_shared<std::string>();
    c->add_option("--point", *point)->required();
    c->callback([&result, point] {
      const auto closure = orbit_closure(parse_point(*point));
      result = Json{{"size", closure.size()}, {"closure", literal_list(closure)}};
    });
  }
  {
    auto* c = dyn->add_subcommand("encode", "characteristic-function point of a list of sets");
    auto lits = std::make_shared<std::vector<std::string>>();
    c->add_option("sets", *lits)->required();
    c->callback([&result, lits] { result = Json{{"point", encode_point(parse_sets(*lits)).literal()}}; });
  }

  // ---- ip ----
  auto* ip = app.add_subcommand("ip", "IP sequences and finite sums");
  ip->require_subcommand(1);
  {
    auto* c = ip->add_subcommand("fs", "finite sums of a generator");
    auto gen = std::make_shared<std::string>();
    auto terms = std::make_shared<std::size_t>(2);
    auto bound = std::make_shared<std::uint64_t>(64);
    auto from = std::make_shared<std::size_t>(0);
    c->add_option("--gen", *gen)->required();
    c->add_option("--terms", *terms, "most terms per sum");
    c->add_option("--bound", *bound);
    c->add_option("--from", *from, "first index");
    c->callback([&result, gen, terms, bound, from] {
      result = Json{{"sums", fs_enumerate(parse_generator(*gen), *from, *terms, *bound)}};
    });
  }
  {
    auto* c = ip->add_subcommand("construct", "IP sequence with T^n x -> y along its finite sums");
    auto x = std::make_shared<std::string>(), y = std::make_shared<std::string>();
    auto terms = std::make_shared<std::size_t>(4);
    c->add_option("x", *x)->required();
    c->add_option("y", *y)->required();
    c->add_option("--terms", *terms);
    c->callback([&result, x, y, terms] {
      result = to_json(ip_sequence_construct(parse_point(*x), parse_point(*y), *terms));
      result["all_pass"] = result["verified"];
    });
  }
  {
    auto* c = ip->add_subcommand("limit", "bounded check of an IP-limit");
    auto point = std::make_shared<std::string>(), gen = std::make_shared<std::string>();
    auto resolution = std::make_shared<std::uint64_t>(2);
    auto terms = std::make_shared<std::size_t>(2);
    auto witnesses = std::make_shared<std::size_t>(4);
    c->add_option("--point", *point)->required();
    c->add_option("--gen", *gen)->required();
    c->add_option("--resolution", *resolution);
    c->add_option("--terms", *terms, "most terms per sum");
    c->add_option("--witnesses", *witnesses, "indices per tail");
    c->callback([&result, point, gen, resolution, terms, witnesses] {
      result = to_json(ip_limit_check(parse_point(*point), parse_generator(*gen), *resolution, *terms, *witnesses));
    });
  }
  {
    auto* c = ip->add_subcommand("hindman", "least monochromatic finite-sum sequence");
    auto col = std::make_shared<std::string>();
    auto terms = std::make_shared<std::size_t>(3);
    auto bound = std::make_shared<std::uint64_t>(64);
    c->add_option("coloring", *col, "classes separated by |")->required();
    c->add_option("--terms", *terms);
    c->add_option("--bound", *bound);
    c->callback([&result, &options, col, terms, bound] {
      result = to_json(hindman_search(parse_coloring(*col), *terms, *bound, options.jobs));
    });
  }
  {
    auto* c = ip->add_subcommand("iht", "least sequence with homogeneous suffixes");
    auto cols = std::make_shared<std::vector<std::string>>();
    auto terms = std::make_shared<std::size_t>(2);
    auto bound = std::make_shared<std::uint64_t>(64);
    c->add_option("colorings", *cols)->required();
    c->add_option("--terms", *terms);
    c->add_option("--bound", *bound);
    c->callback([&result, &options, cols, terms, bound] {
      std::vector<Coloring> parsed;
      for (const auto& s : *cols) parsed.push_back(parse_coloring(s));
      result = to_json(iht_search(parsed, *terms, *bound, options.jobs));
    });
  }
  {
    auto* c = ip->add_subcommand("pipeline", "colorings to IHT witness through AET");
    auto lits = std::make_shared<std::vector<std::string>>();
    auto terms = std::make_shared<std::size_t>(4);
    c->add_option("sets", *lits, "color-0 class of each coloring")->required();
    c->add_option("--terms", *terms);
    c->callback([&result, lits, terms] { result = to_json(aet_to_iht_pipeline(parse_sets(*lits), *terms)); });
  }

  // ---- filter ----
  auto* filter = app.add_subcommand("filter", "partial idempotent ultrafilters");
  filter->require_subcommand(1);
  {
    auto* c = filter->add_subcommand("member", "exact F((n_i)) membership");
    auto gen = std::make_shared<std::string>(), lit = std::make_shared<std::string>();
    c->add_option("--gen", *gen)->required();
    c->add_option("--set", *lit)->required();
    c->callback([&result, gen, lit] { result = to_json(filter_member(parse_generator(*gen), parse_epset(*lit))); });
  }
  {
    auto* c = filter->add_subcommand("build", "filter on the downward algebra of the sets");
    auto lits = std::make_shared<std::vector<std::string>>();
    c->add_option("sets", *lits)->required();
    c->callback([&result, &options, lits] {
      result = to_json(build_partial_ultrafilter(scope_algebra(parse_sets(*lits), options)));
    });
  }
  {
    auto* c = filter->add_subcommand("verify", "audit a generator against the downward algebra of the sets");
    auto gen = std::make_shared<std::string>();
    auto lits = std::make_shared<std::vector<std::string>>();
    c->add_option("--gen", *gen)->required();
    c->add_option("sets", *lits)->required();
    c->callback([&result, &options, gen, lits] {
      Algebra a = scope_algebra(parse_sets(*lits), options);
      const PartialUltrafilter f(parse_generator(*gen), a);
      result = to_json(verify_filter(f, a));
    });
  }
  {
    auto* c = filter->add_subcommand("dset", "{n : X - n in F}");
    auto gen = std::make_shared<std::string>(), lit = std::make_shared<std::string>();
    c->add_option("--gen", *gen)->required();
    c->add_option("--set", *lit)->required();
    c->callback([&result, &options, gen, lit] {
      const EpSet x = parse_epset(*lit);
      const PartialUltrafilter f(parse_generator(*gen), scope_algebra({x}, options));
      result = Json{{"set", x.literal()}, {"dset", translate_membership_set(f, x).literal()}};
    });
  }
  {
    auto* c = filter->add_subcommand("ulimit", "limit of T^n x along the filter");
    auto gen = std::make_shared<std::string>(), point = std::make_shared<std::string>();
    auto lits = std::make_shared<std::vector<std::string>>();
    c->add_option("--gen", *gen)->required();
    c->add_option("--point", *point, "defaults to the encoded algebra");
    c->add_option("sets", *lits, "algebra generators")->required();
    c->callback([&result, &options, gen, point, lits] {
      const PartialUltrafilter f(parse_generator(*gen), scope_algebra(parse_sets(*lits), options));
      const SymbolicPoint x = point->empty() ? encode_point(f.scope()) : parse_point(*point);
      const SymbolicPoint y = ultralimit(f, x);
      result = Json{{"point", x.literal()}, {"limit", y.literal()}, {"all_pass", true}};
    });
  }
  {
    auto* c = filter->add_subcommand("extend", "extend a filter to a larger algebra");
    auto gen = std::make_shared<std::string>();
    auto lits = std::make_shared<std::vector<std::string>>();
    auto added = std::make_shared<std::vector<std::string>>();
    c->add_option("--gen", *gen)->required();
    c->add_option("sets", *lits, "generators of the current algebra")->required();
    c->add_option("--add", *added, "additional generators")->required();
    c->callback([&result, &options, gen, lits, added] {
      const std::vector<EpSet> old_sets = parse_sets(*lits);
      std::vector<EpSet> all_sets = old_sets;
      for (const auto& s : parse_sets(*added)) all_sets.push_back(s);
      const PartialUltrafilter f(parse_generator(*gen), scope_algebra(old_sets, options));
      result = to_json(extend_filter(f, scope_algebra(all_sets, options)));
    });
  }
  {
    auto* c = filter->add_subcommand("central", "syndetic, IP, and filter verdicts, reported separately");
    auto lit = std::make_shared<std::string>();
    auto bound = std::make_shared<std::uint64_t>(64);
    c->add_option("--set", *lit)->required();
    c->add_option("--bound", *bound);
    c->callback([&result, &options, lit, bound] {
      result = to_json(central_check(parse_epset(*lit), *bound, options.jobs, options.cap));
    });
  }

  // ---- scenario ----
  auto* scenario = app.add_subcommand("scenario", "named multi-step runs");
  scenario->require_subcommand(1);
  {
    auto* c = scenario->add_subcommand("run", "run a scenario file");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file)->required();
    c->callback([&result, &options, file] {
      std::ifstream in(*file);
      if (!in) throw input_error("cannot read scenario file '" + *file + "'");
      std::stringstream text;
      text << in.rdbuf();
      result = run_scenario(parse_scenario(text.str()), options);
    });
  }
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') tok = tok.substr(1, tok.size() - 2);
    out.push_back(tok);
  }
  return out;
}

bool valid_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
  });
}

// Splits `$step.a.b` into ("step", "a.b").
std::pair<std::string, std::string> split_reference(std::string_view token) {
  token.remove_prefix(1);
  const auto dot = token.find('.');
  if (dot == std::string_view::npos) return {std::string(token), {}};
  return {std::string(token.substr(0, dot)), std::string(token.substr(dot + 1))};
}

void append_value(const Json& v, std::vector<std::string>& out) {
  if (v.is_array()) {
    for (const auto& item : v) append_value(item, out);
  } else if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else {
    out.push_back(v.dump());
  }
}

}  // namespace

Json execute(const std::vector<std::string>& args, const Options& options) {
  CLI::App app{"Exact workbench for eventually periodic dynamics, IP sets and partial ultrafilters", "epdyn"};
  Json result;
  add_commands(app, result, options);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    // Help for the deepest subcommand named on the line.
    const CLI::App* at = &app;
    for (const CLI::App* sub = &app; sub;) {
      at = sub;
      const auto subs = sub->get_subcommands();
      sub = subs.empty() ? nullptr : subs.front();
    }
    throw HelpRequested{at->help()};
  } catch (const CLI::ParseError& e) {
    throw parse_error(e.what());
  }
  return result;
}

std::vector<Step> parse_scenario(const std::string& text) {
  std::vector<Step> steps;
  std::set<std::string> names;
  std::istringstream in(text);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "scenario line " + std::to_string(number) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw parse_error(where + "expected 'name = command'");
    const auto name_tokens = split_tokens(line.substr(0, eq));
    if (name_tokens.size() != 1 || !valid_name(name_tokens[0])) throw parse_error(where + "bad step name");
    Step step{name_tokens[0], split_tokens(line.substr(eq + 1))};
    if (step.tokens.empty()) throw parse_error(where + "empty command");
    if (step.tokens[0] == "scenario") throw parse_error(where + "scenarios cannot nest");
    for (const auto& tok : step.tokens) {
      if (tok.empty() || tok[0] != '$') continue;
      const auto [ref, field] = split_reference(tok);
      if (!names.count(ref)) throw parse_error(where + "reference to unknown step '" + ref + "'");
    }
    if (!names.insert(step.name).second) throw parse_error(where + "duplicate step name '" + step.name + "'");
    steps.push_back(std::move(step));
  }
  return steps;
}

Json run_scenario(const std::vector<Step>& steps, const Options& options) {
  std::map<std::string, std::pair<std::string, Json>> outputs;  // name -> (command key, output)
  Json transcript = Json::array();
  bool all_pass = true;
  for (const auto& step : steps) {
    std::vector<std::string> tokens;
    for (const auto& tok : step.tokens) {
      if (tok.empty() || tok[0] != '$') {
        tokens.push_back(tok);
        continue;
      }
      const auto [ref, field] = split_reference(tok);
      const auto& [key, output] = outputs.at(ref);
      std::string path = field;
      if (path.empty()) {
        const auto it = primary_fields().find(key);
        if (it == primary_fields().end())
          throw input_error("step '" + ref + "' has no default output; name a field as $" + ref + ".field");
        path = it->second;
      }
      const Json* v = &output;
      for (std::size_t start = 0; start <= path.size();) {
        const auto dot = std::min(path.find('.', start), path.size());
        const std::string part = path.substr(start, dot - start);
        if (!v->is_object() || !v->contains(part))
          throw input_error("step '" + ref + "' has no output field '" + path + "'");
        v = &(*v)[part];
        start = dot + 1;
      }
      append_value(*v, tokens);
    }
    Json output = execute(tokens, options);
    const bool pass = output.is_object() && output.contains("all_pass") ? output["all_pass"].get<bool>() : true;
    all_pass = all_pass && pass;
    transcript.push_back(Json{{"name", step.name}, {"command", tokens}, {"output", output}});
    outputs.emplace(step.name, std::pair{command_key(tokens), std::move(output)});
  }
  return Json{{"steps", std::move(transcript)}, {"all_pass", all_pass}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options options;
  std::vector<std::string> rest;
  try {
    // Global options may appear anywhere on the line.
    for (std::size_t i = 0; i < args.size(); ++i) {
      const std::string& a = args[i];
      std::string name, value;
      if (a == "--jobs" || a == "--cap") {
        if (i + 1 == args.size()) throw parse_error(a + " needs a value");
        name = a;
        value = args[++i];
      } else if (a.rfind("--jobs=", 0) == 0 || a.rfind("--cap=", 0) == 0) {
        name = a.substr(0, a.find('='));
        value = a.substr(a.find('=') + 1);
      } else {
        rest.push_back(a);
        continue;
      }
      std::size_t n = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc{} || ptr != value.data() + value.size() || n == 0)
        throw parse_error(name + " needs a positive integer, got '" + value + "'");
      (name == "--jobs" ? options.jobs : options.cap) = n;
    }
    out << execute(rest, options).dump() << '\n';
    return kOk;
  } catch (const HelpRequested& h) {
    out << h.text;
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const resource_error& e) {
    err << "error: " << e.what() << '\n';
    return kOverCap;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace epdyn::cli
