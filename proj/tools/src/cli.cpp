#include "dioph_cli/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>

#include <fstream>
#include <optional>
#include <sstream>

#include "dioph/analysis.hpp"
#include "dioph/errors.hpp"
#include "dioph/farey.hpp"
#include "dioph/partition.hpp"
#include "dioph_cli/alpha.hpp"
#include "dioph_cli/format.hpp"

namespace dioph::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
  std::string output;
  std::string format;
  unsigned threads = 1;
  long precision_cap = 1L << 20;
  std::size_t digit_cap = kDefaultDigitCap;
  unsigned enum_cap = kEnumerationCap;
};

struct FareyArgs {
  unsigned n = 0;
};

struct CfArgs {
  AlphaFlags alpha;
  std::size_t depth = 10;
};

struct PartitionArgs {
  std::string kind = "knauf";
  std::string form = "matrix";
  std::string x = "0";
  AlphaFlags alpha;
  std::string N = "1";
  std::string beta = "2";
  std::string method = "dfs";
  bool infinity = false;
};

struct FreeEnergyArgs {
  AlphaFlags alpha;
  std::string beta = "3";
  std::string scale = "N";
  std::string N;
  std::size_t m = 40;
  std::size_t from_m = 2;
  std::string estimator = "increment";
};

struct ClassifyArgs {
  AlphaFlags alpha;
  std::string beta = "3";
  ClassifyBudget budget;
};

void add_alpha_flags(CLI::App* cmd, AlphaFlags& a) {
  auto* group = cmd->add_option_group("alpha", "the real number alpha");
  group->add_option("--rational", a.rational, "p/q");
  group->add_option("--surd", a.surd, "P,Q,D for (P + sqrt D) / Q");
  group->add_option("--named", a.named, "golden | e_minus_1 | pi_literal");
  group->add_option("--construct", a.construct, "thm42 | thm43");
  group->add_option("--literal", a.literal, "<decimal>@<bits>");
  group->require_option(0, 1);
}

Alpha alpha_from(AlphaFlags flags, const Globals& g) {
  flags.digit_cap = g.digit_cap;
  return parse_alpha(flags);
}

RealScalar beta_from(const std::string& text) {
  const mpq_class v = parse_rational_value(text);
  if (v < 0) throw DomainError("beta must be nonnegative: " + text);
  return RealScalar::rational(v);
}

EngineOptions engine_from(const Globals& g) {
  EngineOptions opts;
  opts.threads = g.threads;
  return opts;
}

Format format_or(const Globals& g, Format fallback) {
  return g.format.empty() ? fallback : parse_format(g.format);
}

std::string beta_text(const RealScalar& beta) {
  if (auto v = beta.exact_value()) return v->get_str();
  return beta.describe();
}

std::vector<std::string> interval_cells(const Interval& x) { return {lower_text(x), upper_text(x), midpoint_text(x)}; }

void emit_table(std::ostream& os, Format format, const Table& table, Json meta) {
  if (format == Format::json) {
    meta["rows"] = rows_json(table);
    os << meta.dump(2) << '\n';
  } else {
    write_csv(os, table);
  }
}

// ---------------------------------------------------------------- commands

void cmd_farey(const FareyArgs& a, const Globals& g, std::ostream& os) {
  const auto set = farey_set(a.n);
  switch (format_or(g, Format::text)) {
    case Format::text:
      for (std::size_t i = 0; i < set.size(); ++i) os << (i ? ", " : "") << set[i].to_string();
      os << '\n';
      break;
    case Format::csv: {
      Table t{{"index", "p", "q"}, {}};
      for (std::size_t i = 0; i < set.size(); ++i) {
        t.rows.push_back({std::to_string(i), set[i].num().get_str(), set[i].den().get_str()});
      }
      write_csv(os, t);
      break;
    }
    case Format::json: {
      Json j{{"n", a.n}, {"size", set.size()}, {"set", Json::array()}};
      for (const auto& f : set) j["set"].push_back(f.to_string());
      os << j.dump(2) << '\n';
      break;
    }
  }
}

void cmd_cf(const CfArgs& a, const Globals& g, std::ostream& os) {
  if (a.depth < 1) throw DomainError("depth must be at least 1");
  const Alpha alpha = alpha_from(a.alpha, g);
  const std::string expansion = alpha.cf.to_string(a.depth);
  const std::size_t rows = alpha.cf.prefix(a.depth).size();
  const ConvergentTable table = convergents(alpha.cf, rows - 1);
  Table t{{"m", "a_m", "p_m", "q_m", "N_m"}, {}};
  for (const auto& r : table) {
    t.rows.push_back({std::to_string(r.m), r.a.get_str(), r.p.get_str(), r.q.get_str(), r.N.get_str()});
  }
  switch (format_or(g, Format::text)) {
    case Format::text:
      os << expansion << '\n';
      write_csv(os, t);
      break;
    case Format::csv:
      write_csv(os, t);
      break;
    case Format::json:
      emit_table(os, Format::json, t, Json{{"alpha", alpha.name}, {"expansion", expansion}});
      break;
  }
}

void cmd_partition(const PartitionArgs& a, const Globals& g, std::ostream& os) {
  const RealScalar beta = beta_from(a.beta);
  const EngineOptions opts = engine_from(g);
  const auto Ns = parse_index_list(a.N);
  for (unsigned N : Ns) {
    if (N > g.enum_cap) throw CapExceeded("N = " + std::to_string(N) + " exceeds the enumeration cap");
  }

  std::vector<PartitionResult> results;
  std::string label;
  if (a.kind == "knauf") {
    const KnaufForm form = a.form == "set" ? KnaufForm::set : KnaufForm::matrix;
    if (a.form != "set" && a.form != "matrix") throw ParseError("unknown form: " + a.form);
    label = "knauf-" + a.form;
    for (unsigned N : Ns) results.push_back(z_knauf(N, beta, form, opts));
  } else if (a.kind == "fk") {
    const RealScalar x = RealScalar::rational(parse_rational_value(a.x));
    label = "fk(x=" + a.x + ")";
    for (unsigned N : Ns) results.push_back(z_fiala_kleban(N, x, beta, opts));
  } else if (a.kind == "dioph") {
    const Alpha alpha = alpha_from(a.alpha, g);
    label = "dioph(" + alpha.name + ")";
    if (a.method == "series") {
      unsigned top = 0;
      for (unsigned N : Ns) top = std::max(top, N);
      const auto series = z_diophantine_series(alpha.value, top, beta, opts, g.enum_cap);
      for (unsigned N : Ns) results.push_back(series[N]);
    } else {
      PartitionSpec spec;
      spec.M = WeightMatrix::diophantine(alpha.value);
      spec.beta = beta;
      spec.include_infinity_term = a.infinity;
      spec.cap = g.enum_cap;
      for (unsigned N : Ns) {
        spec.N = N;
        if (a.method == "dfs") {
          results.push_back(z_general(spec, opts));
        } else if (a.method == "recursion") {
          results.push_back(z_recursion(spec, opts));
        } else {
          throw ParseError("unknown method: " + a.method);
        }
      }
    }
  } else {
    throw ParseError("unknown kind: " + a.kind);
  }

  Table t{{"kind", "N", "beta", "method", "terms", "lo", "hi", "midpoint"}, {}};
  for (const auto& r : results) {
    std::vector<std::string> row{label, std::to_string(r.N), beta_text(r.beta), to_string(r.method),
                                 std::to_string(r.term_count)};
    for (auto& c : interval_cells(r.value.enclosure())) row.push_back(std::move(c));
    t.rows.push_back(std::move(row));
  }
  emit_table(os, format_or(g, Format::csv), t, Json{{"kind", label}});
}

void cmd_free_energy(const FreeEnergyArgs& a, const Globals& g, std::ostream& os) {
  const Alpha alpha = alpha_from(a.alpha, g);
  const RealScalar beta = beta_from(a.beta);
  Table t{{"N_or_m", "lower", "upper", "midpoint", "scale_tag"}, {}};
  std::string mode;
  auto push = [&t](const std::string& index, const Interval& x, const std::string& tag) {
    std::vector<std::string> row{index};
    for (auto& c : interval_cells(x)) row.push_back(std::move(c));
    row.push_back(tag);
    t.rows.push_back(std::move(row));
  };

  if (!a.N.empty()) {
    mode = "enumerated";
    const Scale scale = Scale::parse(a.scale);
    const auto series =
        free_energy_series(alpha.value, alpha.cf, beta, parse_index_list(a.N), scale, engine_from(g), g.enum_cap);
    for (const auto& p : series.points) push(p.N.get_str(), p.enclosure, series.scale_tag);
  } else if (alpha.construction) {
    mode = "diagnostic";
    for (const auto& p : construction_diagnostic(*alpha.construction, beta, a.from_m, a.m)) {
      push(std::to_string(p.m), p.value, p.log_space ? "diagnostic_log_space" : "diagnostic");
    }
  } else {
    if (a.estimator != "increment" && a.estimator != "raw") throw ParseError("unknown estimator: " + a.estimator);
    mode = "convergent_" + a.estimator;
    const Scale scale = Scale::parse(a.scale);
    const LimitEstimate est = convergent_limit_estimate(alpha.cf, scale, a.m);
    for (const auto& p : est.points) {
      if (a.estimator == "raw") {
        push(std::to_string(p.m), p.raw, est.scale_tag);
      } else if (p.increment) {
        push(std::to_string(p.m), *p.increment, est.scale_tag);
      }
    }
  }
  emit_table(os, format_or(g, Format::csv), t,
             Json{{"alpha", alpha.name}, {"beta", beta_text(beta)}, {"mode", mode}});
}

Json interval_json(const Interval& x) { return Json{{"lower", lower_text(x)}, {"upper", upper_text(x)}}; }

void cmd_classify(ClassifyArgs a, const Globals& g, std::ostream& os) {
  const Alpha alpha = alpha_from(a.alpha, g);
  const RealScalar beta = beta_from(a.beta);
  a.budget.engine = engine_from(g);
  const ClassificationReport r = classify(alpha.name, alpha.value, alpha.cf, beta, a.budget,
                                          alpha.construction ? &*alpha.construction : nullptr);

  Table scales{{"scale_tag", "trend", "cauchy", "max_rel_change", "doubling_ratio", "m_last", "lower", "upper"}, {}};
  for (const auto& s : r.scales) {
    std::ostringstream rel, dbl;
    rel.precision(6);
    dbl.precision(6);
    rel << s.max_rel_change;
    dbl << s.doubling_ratio;
    scales.rows.push_back({s.scale_tag, to_string(s.trend), s.cauchy ? "true" : "false", rel.str(), dbl.str(),
                           std::to_string(s.m_last), lower_text(s.limit_window), upper_text(s.limit_window)});
  }
  if (format_or(g, Format::json) == Format::csv) {
    write_csv(os, scales);
    return;
  }

  Json j;
  j["alpha"] = r.alpha;
  j["beta"] = beta_text(r.beta);
  j["one_free_energy"] = {{"verdict", to_string(r.one_free_energy)}, {"evidence", r.one_free_energy_evidence}};
  j["k_free_energy_zero"] = {{"verdict", to_string(r.k_free_energy_zero)},
                             {"evidence", r.k_free_energy_evidence}};
  j["fitted_scale"] = r.fitted_scale ? Json(*r.fitted_scale) : Json(nullptr);
  j["free_energy_window"] = r.free_energy_window ? interval_json(*r.free_energy_window) : Json(nullptr);
  j["scales"] = rows_json(scales);
  auto sandwich = Json::array();
  for (const auto& b : r.sandwich) {
    Json row{{"N", b.N.get_str()},
             {"m", b.m},
             {"lower", lower_text(b.lower.enclosure())},
             {"upper", upper_text(b.upper.enclosure())}};
    if (b.value) row["value"] = interval_json(*b.value);
    row["holds"] = b.holds;
    sandwich.push_back(std::move(row));
  }
  j["sandwich"] = {{"holds", r.sandwich_holds}, {"rows", std::move(sandwich)}};
  auto diagnostic = Json::array();
  for (const auto& p : r.diagnostic) {
    Json row{{"m", p.m}, {"lower", lower_text(p.value)}, {"upper", upper_text(p.value)}, {"log_space", p.log_space}};
    diagnostic.push_back(std::move(row));
  }
  j["diagnostic"] = std::move(diagnostic);
  os << j.dump(2) << '\n';
}

}  // namespace

std::vector<unsigned> parse_index_list(const std::string& text) {
  auto number = [&text](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 9) {
      throw ParseError("invalid index list: " + text);
    }
    return static_cast<unsigned>(std::stoul(s));
  };
  std::vector<unsigned> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const unsigned lo = number(text.substr(0, dots));
    const unsigned hi = number(text.substr(dots + 2));
    if (hi < lo) throw ParseError("empty range: " + text);
    for (unsigned n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(number(item));
  if (out.empty()) throw ParseError("invalid index list: " + text);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diophantine partition functions and free-energy limits", "dioph"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file of option defaults");

  Globals g;
  app.add_option("--output", g.output, "write results to this file");
  app.add_option("--format", g.format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 256u));
  auto* cap_opt = app.add_option("--precision-cap", g.precision_cap,
                                 "maximum working precision in bits (default from DIOPH_MAX_PRECISION)");
  app.add_option("--digit-cap", g.digit_cap, "decimal-digit cap on rule-generated quotients");
  app.add_option("--enum-cap", g.enum_cap, "largest enumerated word length")->check(CLI::Range(0u, kEnumerationCap));

  FareyArgs farey;
  auto* farey_cmd = app.add_subcommand("farey", "print the Farey set F_n");
  farey_cmd->add_option("--n", farey.n, "level")->required();

  CfArgs cf;
  auto* cf_cmd = app.add_subcommand("cf", "continued fraction expansion and convergents");
  add_alpha_flags(cf_cmd, cf.alpha);
  cf_cmd->add_option("--depth", cf.depth, "number of quotients, a_0 included");

  PartitionArgs part;
  auto* part_cmd = app.add_subcommand("partition", "evaluate a partition function");
  part_cmd->add_option("--kind", part.kind, "knauf | fk | dioph")->check(CLI::IsMember({"knauf", "fk", "dioph"}));
  part_cmd->add_option("--form", part.form, "knauf form: matrix | set");
  part_cmd->add_option("--x", part.x, "Fiala-Kleban parameter");
  add_alpha_flags(part_cmd, part.alpha);
  part_cmd->add_option("--N", part.N, "word length, range a..b or list");
  part_cmd->add_option("--beta", part.beta, "inverse temperature");
  part_cmd->add_option("--method", part.method, "dioph engine: dfs | recursion | series");
  part_cmd->add_flag("--infinity", part.infinity, "add the 1/0 term");

  FreeEnergyArgs fe;
  auto* fe_cmd = app.add_subcommand("free-energy", "free-energy series under a scaling");
  add_alpha_flags(fe_cmd, fe.alpha);
  fe_cmd->add_option("--beta", fe.beta, "inverse temperature");
  fe_cmd->add_option("--scale", fe.scale, "N, N^k or sqrtN_logN");
  fe_cmd->add_option("--N", fe.N, "enumerated word lengths (range a..b or list)");
  fe_cmd->add_option("--m", fe.m, "convergent depth");
  fe_cmd->add_option("--from-m", fe.from_m, "first diagnostic index for constructions");
  fe_cmd->add_option("--estimator", fe.estimator, "increment | raw");

  ClassifyArgs cl;
  auto* cl_cmd = app.add_subcommand("classify", "classification report");
  add_alpha_flags(cl_cmd, cl.alpha);
  cl_cmd->add_option("--beta", cl.beta, "inverse temperature");
  cl_cmd->add_option("--m-max", cl.budget.m_max, "convergent depth");
  cl_cmd->add_option("--window", cl.budget.window, "stability window");
  cl_cmd->add_option("--tolerance", cl.budget.tolerance, "relative change tolerance");
  cl_cmd->add_option("--enumerate-N", cl.budget.enumerate_N, "sandwich sweep length");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::parse);
  }

  const PrecisionPolicy saved = precision_policy();
  std::ostringstream buffer;
  int code = static_cast<int>(ExitCode::ok);
  try {
    const char* env_cap = std::getenv("DIOPH_MAX_PRECISION");
    if (cap_opt->count() == 0 && env_cap != nullptr && *env_cap != '\0') {
      char* end = nullptr;
      g.precision_cap = std::strtol(env_cap, &end, 10);
      if (*end != '\0') throw ParseError(std::string("DIOPH_MAX_PRECISION is not an integer: ") + env_cap);
    }
    if (g.precision_cap < 64 || g.precision_cap > (1L << 26)) {
      throw ParseError("precision cap out of range [64, 2^26]: " + std::to_string(g.precision_cap));
    }
    set_precision_policy({64, g.precision_cap});
    if (farey_cmd->parsed()) cmd_farey(farey, g, buffer);
    if (cf_cmd->parsed()) cmd_cf(cf, g, buffer);
    if (part_cmd->parsed()) cmd_partition(part, g, buffer);
    if (fe_cmd->parsed()) cmd_free_energy(fe, g, buffer);
    if (cl_cmd->parsed()) cmd_classify(cl, g, buffer);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    code = static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = static_cast<int>(ExitCode::failure);
  }
  set_precision_policy(saved);
  if (code != 0) return code;

  if (g.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(g.output, std::ios::binary);
    file << buffer.str();
    if (!file) {
      err << "error: cannot write " << g.output << '\n';
      return static_cast<int>(ExitCode::failure);
    }
  }
  return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace dioph::cli
