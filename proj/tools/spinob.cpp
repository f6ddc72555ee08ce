#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spinob/cli.hpp"

using namespace spinob;
using cli::Json;

namespace {

Json read_json(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw cli::ConfigError("/", "cannot read " + what + " " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw cli::ConfigError("/", what + " " + path + " is not valid JSON: " + e.what());
  }
}

Json parse_inline(const std::string& text, const std::string& ptr) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw cli::ConfigError(ptr, std::string("not valid JSON: ") + e.what());
  }
}

Json scalar_literal(const std::string& s) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return s;
}

struct Options {
  std::string config, form, ext, out, a, b, place;
  std::optional<std::uint64_t> seed;
  std::optional<long> bound, samples;
  bool timing = false;
};

int run(const std::string& command, const Options& o) {
  Json config = o.config.empty() ? Json::object() : read_json(o.config, "config");
  if (!o.form.empty()) config["form"] = parse_inline(o.form, "/form");
  if (!o.ext.empty()) config["extension"] = parse_inline(o.ext, "/extension");
  if (o.seed) config["seed"] = *o.seed;
  if (o.bound) config["bound"] = *o.bound;
  if (o.samples) config["samples"] = *o.samples;
  if (!o.a.empty()) config["a"] = scalar_literal(o.a);
  if (!o.b.empty()) config["b"] = scalar_literal(o.b);
  if (!o.place.empty()) config["place"] = scalar_literal(o.place);

  cli::RunConfig rc = cli::parse_config(command, config);
  auto start = std::chrono::steady_clock::now();
  Json report = cli::run_command(rc);
  if (o.timing) {
    std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    report["timing"] = Json{{"elapsed_ms", ms.count()}};
  }
  std::string text = cli::render(report);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!(f << text)) throw cli::ConfigError("/", "cannot write " + o.out);
  }
  return 0;
}

int verify(const std::string& path) {
  cli::VerifyOutcome v = cli::verify_report(read_json(path, "report"));
  (v.ok ? std::cout : std::cerr) << (v.ok ? "ok: " : "verification failed: ") << v.message << "\n";
  return v.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact spinor-norm and obstruction workbench for orthogonal similitude groups"};
  app.set_version_flag("--version", cli::kVersion);
  std::string verify_path;
  app.add_option("--verify", verify_path, "Replay the certificates of a JSON report")->check(CLI::ExistingFile);
  app.require_subcommand(0, 1);

  Options o;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> help = {
      {"spinor-norm", "Spinor norm of isometries via Cartan-Dieudonne decompositions"},
      {"lift", "Lift proper similitudes to Omega and evaluate mu_bar, x and mu*"},
      {"obstruction", "Obstruction class alpha for special theta"},
      {"np-check", "Weak norm principle experiment over an extension L/k"},
      {"hilbert", "Hilbert symbols and ramification of (a, b) over Q"},
      {"h1", "U/U_0 against Frobenius coinvariants of mu_4[Z]"},
      {"search", "Counterexample search over forms and extensions"},
  };
  for (const auto& name : cli::command_names()) {
    CLI::App* s = app.add_subcommand(name, help.at(name));
    s->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "Write the report here instead of stdout");
    s->add_option("--seed", o.seed, "64-bit seed");
    s->add_option("--bound", o.bound, "Height bound for searches over Q");
    s->add_option("--samples", o.samples, "Number of random samples");
    s->add_flag("--timing", o.timing, "Record wall-clock time (breaks byte-identical output)");
    if (name == "hilbert") {
      s->add_option("a", o.a, "First entry, integer or p/q");
      s->add_option("b", o.b, "Second entry, integer or p/q");
      s->add_option("--place", o.place, "A prime or inf");
    } else if (name != "search") {
      s->add_option("--form", o.form, R"(Form literal, e.g. {"field":{"kind":"Fp","p":3},"diagonal":[1,1,1,2]})");
    }
    if (name == "np-check") s->add_option("--ext", o.ext, R"(Extension, e.g. {"kind":"Fq","p":3,"m":3})");
    subs[name] = s;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!verify_path.empty()) return verify(verify_path);
    for (const auto& [name, s] : subs)
      if (s->parsed()) return run(name, o);
    std::cerr << app.help();
    return 1;
  } catch (const cli::ConfigError& e) {
    std::cerr << "invalid input at " << e.what() << "\n";
    return 1;
  } catch (const MathError& e) {
    std::cerr << (e.is_invariant_violation() ? "internal invariant violated: " : "error: ") << e.what() << "\n";
    return e.is_invariant_violation() ? 2 : 1;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
