#include "spinob/cli.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <regex>
#include <set>

#include "spinob/integer.hpp"

namespace spinob::cli {
namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const Json& need(const Json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw ConfigError(ptr.empty() ? "/" : ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(child(ptr, key), "missing required field");
  return *it;
}

void only_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& ptr) {
  if (!obj.is_object()) throw ConfigError(ptr.empty() ? "/" : ptr, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* x : keys) known = known || k == x;
    if (!known) throw ConfigError(child(ptr, k), "unknown field");
  }
}

long get_long(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
  return j.get<long>();
}

const Json& get_array(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array");
  return j;
}

mpq_class parse_rational(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return mpq_class(get_long(j, ptr));
  if (!j.is_string()) throw ConfigError(ptr, "expected an integer or a string \"p/q\"");
  static const std::regex re(R"(^-?[0-9]+(/[0-9]+)?$)");
  const std::string s = j.get<std::string>();
  if (!std::regex_match(s, re)) throw ConfigError(ptr, "malformed rational \"" + s + "\"");
  auto slash = s.find('/');
  mpz_class num(s.substr(0, slash)), den(slash == std::string::npos ? "1" : s.substr(slash + 1));
  if (den == 0) throw ConfigError(ptr, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

template <typename F>
auto guarded(const std::string& ptr, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const MathError& e) {
    if (e.is_invariant_violation()) throw;
    throw ConfigError(ptr, e.what());
  }
}

Json encode_place(long p) { return p == kRealPlace ? Json("inf") : Json(p); }

long decode_place(const Json& j, const std::string& ptr) {
  if (j.is_string() && j.get<std::string>() == "inf") return kRealPlace;
  long p = get_long(j, ptr);
  if (p == kRealPlace) return p;
  if (!is_prime(p)) throw ConfigError(ptr, "place must be a prime or \"inf\"");
  return p;
}

Json encode_theta(const Theta& t) {
  if (const auto* u = std::get_if<UPoint>(&t)) return Json{{"f", encode(u->f)}, {"z", encode(u->z)}};
  return Json{{"z", encode(std::get<FieldElement>(t))}};
}

Theta decode_theta(const Json& j, const ObstructionContext& ctx, const std::string& ptr) {
  if (ctx.n_odd()) {
    only_keys(j, {"f", "z"}, ptr);
    FieldElement f = decode(need(j, "f", ptr), ctx.k(), child(ptr, "f"));
    FieldElement z = decode(need(j, "z", ptr), ctx.z(), child(ptr, "z"));
    return guarded(ptr, [&] { return make_upoint(f, z); });
  }
  only_keys(j, {"z"}, ptr);
  FieldElement z = decode(need(j, "z", ptr), ctx.z(), child(ptr, "z"));
  if (z.is_zero()) throw ConfigError(child(ptr, "z"), "theta must be nonzero");
  return z;
}

Json encode_clifford(const CliffordElement& c) {
  Json out = Json::array();
  for (unsigned mask : c.algebra()->ordered_masks()) {
    if (c.coeff(mask).is_zero()) continue;
    Json blade = Json::array();
    for (std::size_t i = 0; i < c.algebra()->m(); ++i)
      if (mask >> i & 1u) blade.push_back(i + 1);
    out.push_back(Json{{"blade", blade}, {"coeff", encode(c.coeff(mask))}});
  }
  return out;
}

CliffordElement decode_clifford(const Json& j, const AlgebraPtr& alg, const std::string& ptr) {
  CliffordElement c = CliffordElement::zero(alg);
  const Json& arr = get_array(j, ptr);
  for (std::size_t t = 0; t < arr.size(); ++t) {
    std::string p = child(ptr, t);
    only_keys(arr[t], {"blade", "coeff"}, p);
    unsigned mask = 0;
    const Json& blade = get_array(need(arr[t], "blade", p), child(p, "blade"));
    for (std::size_t i = 0; i < blade.size(); ++i) {
      long b = get_long(blade[i], child(child(p, "blade"), i));
      if (b < 1 || b > static_cast<long>(alg->m())) throw ConfigError(child(child(p, "blade"), i), "index out of range");
      mask |= 1u << (b - 1);
    }
    c = c + CliffordElement::basis(alg, mask) * decode(need(arr[t], "coeff", p), alg->field(), child(p, "coeff"));
  }
  return c;
}

std::string spinor_status_name(SpinorStatus s) {
  switch (s) {
    case SpinorStatus::Yes: return "Yes";
    case SpinorStatus::No: return "No";
    case SpinorStatus::Unknown: return "Unknown";
  }
  return "?";
}

std::string special_status_name(SpecialStatus s) {
  switch (s) {
    case SpecialStatus::Special: return "Special";
    case SpecialStatus::NotSpecial: return "NotSpecial";
    case SpecialStatus::Unknown: return "Unknown";
  }
  return "?";
}

Verdict decode_verdict(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a verdict name");
  for (Verdict v : {Verdict::SpinorNorm, Verdict::NotSpinorNorm, Verdict::Unknown})
    if (verdict_name(v) == j.get<std::string>()) return v;
  throw ConfigError(ptr, "unknown verdict");
}

SpinorStatus decode_spinor_status(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a status name");
  for (SpinorStatus s : {SpinorStatus::Yes, SpinorStatus::No, SpinorStatus::Unknown})
    if (spinor_status_name(s) == j.get<std::string>()) return s;
  throw ConfigError(ptr, "unknown status");
}

Json encode_vectors(const std::vector<Vector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(encode(v));
  return out;
}

std::vector<Vector> decode_vectors(const Json& j, const Field& f, std::size_t n, const std::string& ptr) {
  std::vector<Vector> out;
  const Json& arr = get_array(j, ptr);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(decode_vector(arr[i], f, n, child(ptr, i)));
  return out;
}

Json encode_obstruction(const ObstructionResult& r) {
  Json cert = nullptr;
  if (r.certificate)
    cert = Json{{"omega", encode_clifford(r.certificate->value())},
                {"similitude", encode(r.certificate->similitude().matrix())}};
  return Json{{"theta", encode_theta(r.theta)},
              {"witness", encode(r.witness.matrix())},
              {"alpha", encode(r.alpha)},
              {"y", encode(r.y)},
              {"verdict", verdict_name(r.verdict)},
              {"spinor",
               {{"status", spinor_status_name(r.spinor.status)},
                {"vectors", encode_vectors(r.spinor.vectors)},
                {"witness", r.spinor.witness}}},
              {"certificate", cert}};
}

ObstructionResult decode_obstruction(const Json& j, const ObstructionContext& ctx, const std::string& ptr) {
  const QuadSpace& space = ctx.space();
  const Field& k = ctx.k();
  std::size_t m = space.dimension();
  Theta theta = decode_theta(need(j, "theta", ptr), ctx, child(ptr, "theta"));
  Matrix w = decode_matrix(need(j, "witness", ptr), k, m, child(ptr, "witness"));
  Similitude g = guarded(child(ptr, "witness"), [&] { return Similitude(space, w); });
  FieldElement alpha = decode(need(j, "alpha", ptr), k, child(ptr, "alpha"));
  FieldElement y = decode(need(j, "y", ptr), ctx.z(), child(ptr, "y"));
  ObstructionResult r{theta, g, alpha, y, decode_verdict(need(j, "verdict", ptr), child(ptr, "verdict")), {},
                      std::nullopt};
  const Json& sp = need(j, "spinor", ptr);
  std::string spp = child(ptr, "spinor");
  r.spinor.status = decode_spinor_status(need(sp, "status", spp), child(spp, "status"));
  r.spinor.vectors = decode_vectors(need(sp, "vectors", spp), k, m, child(spp, "vectors"));
  const Json& cert = need(j, "certificate", ptr);
  if (!cert.is_null()) {
    std::string cp = child(ptr, "certificate");
    CliffordElement value = decode_clifford(need(cert, "omega", cp), ctx.algebra(), child(cp, "omega"));
    Matrix cm = decode_matrix(need(cert, "similitude", cp), k, m, child(cp, "similitude"));
    r.certificate = guarded(cp, [&] { return OmegaElement(value, Similitude(space, cm)); });
  }
  return r;
}

Json encode_np_report(const NPReport& rep) {
  Json entries = Json::array();
  for (const auto& e : rep.entries)
    entries.push_back(Json{{"index", e.index},
                           {"g1", encode(e.g1.matrix())},
                           {"theta", encode_theta(e.theta)},
                           {"norm_theta", encode_theta(e.norm_theta)},
                           {"j_value", encode(e.j_value.representative())},
                           {"result", encode_obstruction(e.result)}});
  return Json{{"map", rep.map},
              {"extension", rep.extension},
              {"form", rep.form},
              {"seed", rep.seed},
              {"samples", rep.samples},
              {"yes", rep.yes},
              {"no", rep.no},
              {"unknown", rep.unknown},
              {"counterexamples", rep.counterexamples},
              {"entries", entries}};
}

NPReport decode_np_report(const Json& j, const QuadSpace& space, const ExtensionSpec& ext, const std::string& ptr) {
  ObstructionContext ctx_k(space);
  ObstructionContext ctx_l = context_over(space, ext);
  NPReport rep;
  rep.map = need(j, "map", ptr).get<std::string>();
  rep.extension = need(j, "extension", ptr).get<std::string>();
  rep.form = need(j, "form", ptr).get<std::string>();
  rep.seed = need(j, "seed", ptr).get<std::uint64_t>();
  rep.samples = need(j, "samples", ptr).get<std::size_t>();
  rep.yes = need(j, "yes", ptr).get<std::size_t>();
  rep.no = need(j, "no", ptr).get<std::size_t>();
  rep.unknown = need(j, "unknown", ptr).get<std::size_t>();
  rep.counterexamples = need(j, "counterexamples", ptr).get<std::vector<std::size_t>>();
  const Json& entries = get_array(need(j, "entries", ptr), child(ptr, "entries"));
  std::size_t m = space.dimension();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::string p = child(child(ptr, "entries"), i);
    const Json& e = entries[i];
    Matrix g1 = decode_matrix(need(e, "g1", p), ext.top(), m, child(p, "g1"));
    NPSample s{need(e, "index", p).get<std::size_t>(),
               guarded(child(p, "g1"), [&] { return Similitude(ctx_l.space(), g1); }),
               decode_theta(need(e, "theta", p), ctx_l, child(p, "theta")),
               decode_theta(need(e, "norm_theta", p), ctx_k, child(p, "norm_theta")),
               square_class(decode(need(e, "j_value", p), ext.base(), child(p, "j_value"))),
               decode_obstruction(need(e, "result", p), ctx_k, child(p, "result"))};
    rep.entries.push_back(std::move(s));
  }
  return rep;
}

Json report_shell(const RunConfig& c) {
  return Json{{"schema", kSchema}, {"tool", "spinob"},  {"version", kVersion}, {"command", c.command},
              {"config", c.echo},  {"seed", c.seed},    {"timing", nullptr},   {"results", Json::array()}};
}

FieldElement random_nonzero(const Field& f, std::mt19937_64& rng) {
  while (true) {
    FieldElement x = random_element(f, rng);
    if (!x.is_zero()) return x;
  }
}

// Parsed command-specific inputs, rebuilt from the echoed config when needed.
struct Inputs {
  std::optional<Matrix> isometry;
  std::optional<std::vector<Vector>> reflections;
  std::optional<Matrix> similitude;
  std::optional<Theta> theta;
  std::optional<Matrix> witness;
  mpq_class a, b;
  std::optional<long> place;
};

Inputs parse_inputs(const RunConfig& c) {
  Inputs in;
  const Json& j = c.echo;
  if (c.form) {
    const QuadSpace& s = *c.form;
    std::size_t m = s.dimension();
    if (j.contains("isometry")) in.isometry = decode_matrix(j["isometry"], s.field(), m, "/isometry");
    if (j.contains("reflections")) in.reflections = decode_vectors(j["reflections"], s.field(), m, "/reflections");
    if (j.contains("similitude")) in.similitude = decode_matrix(j["similitude"], s.field(), m, "/similitude");
    if (j.contains("witness")) in.witness = decode_matrix(j["witness"], s.field(), m, "/witness");
    if (j.contains("theta")) {
      ObstructionContext ctx = guarded("/form", [&] { return ObstructionContext(s); });
      in.theta = decode_theta(j["theta"], ctx, "/theta");
    }
  }
  if (c.command == "hilbert") {
    in.a = parse_rational(j["a"], "/a");
    in.b = parse_rational(j["b"], "/b");
    if (in.a == 0) throw ConfigError("/a", "must be nonzero");
    if (in.b == 0) throw ConfigError("/b", "must be nonzero");
    if (j.contains("place")) in.place = decode_place(j["place"], "/place");
  }
  return in;
}

}  // namespace

// ---------------------------------------------------------------------------

Json encode(const FieldElement& x) {
  const Field& f = x.field();
  switch (f.kind()) {
    case Field::Kind::Rationals: return x.rational().get_str();
    case Field::Kind::PrimeField: return x.residue(0);
    case Field::Kind::FiniteField: {
      Json out = Json::array();
      for (int i = 0; i < f.residue_degree(); ++i) out.push_back(x.residue(i));
      return out;
    }
    case Field::Kind::QuadExtOfRationals:
    case Field::Kind::Quadratic: return Json::array({encode(x.re()), encode(x.im())});
  }
  return nullptr;
}

FieldElement decode(const Json& j, const Field& f, const std::string& ptr) {
  switch (f.kind()) {
    case Field::Kind::Rationals: return f.from_rational(parse_rational(j, ptr));
    case Field::Kind::PrimeField: return f.from_int(get_long(j, ptr));
    case Field::Kind::FiniteField: {
      if (!j.is_array()) return f.from_int(get_long(j, ptr));
      if (j.size() != static_cast<std::size_t>(f.residue_degree()))
        throw ConfigError(ptr, "expected " + std::to_string(f.residue_degree()) + " residues");
      std::vector<long> c;
      long p = f.characteristic();
      for (std::size_t i = 0; i < j.size(); ++i) c.push_back(((get_long(j[i], child(ptr, i)) % p) + p) % p);
      return f.from_residues(c);
    }
    case Field::Kind::QuadExtOfRationals:
    case Field::Kind::Quadratic: {
      const Field& base = *f.base();
      if (!j.is_array()) return embed(decode(j, base, ptr), f);
      if (j.size() != 2) throw ConfigError(ptr, "expected a pair [a, b]");
      return f.make(decode(j[0], base, child(ptr, 0)), decode(j[1], base, child(ptr, 1)));
    }
  }
  throw ConfigError(ptr, "unsupported field");
}

Json encode(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(encode(x));
  return out;
}

Json encode(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(encode(m.row(i)));
  return out;
}

Vector decode_vector(const Json& j, const Field& f, std::size_t n, const std::string& ptr) {
  const Json& arr = get_array(j, ptr);
  if (arr.size() != n) throw ConfigError(ptr, "expected " + std::to_string(n) + " entries");
  Vector v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(decode(arr[i], f, child(ptr, i)));
  return v;
}

Matrix decode_matrix(const Json& j, const Field& f, std::size_t n, const std::string& ptr) {
  const Json& arr = get_array(j, ptr);
  if (arr.size() != n) throw ConfigError(ptr, "expected " + std::to_string(n) + " rows");
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(decode_vector(arr[i], f, n, child(ptr, i)));
  return Matrix::from_rows(f, rows);
}

const Field& decode_field(const Json& j, const std::string& ptr) {
  const Json& kind = need(j, "kind", ptr);
  if (!kind.is_string()) throw ConfigError(child(ptr, "kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "Q") {
    only_keys(j, {"kind"}, ptr);
    return Field::rationals();
  }
  if (k == "Qsqrt") {
    only_keys(j, {"kind", "d"}, ptr);
    long d = get_long(need(j, "d", ptr), child(ptr, "d"));
    return guarded(child(ptr, "d"), [&]() -> const Field& { return Field::qsqrt(d); });
  }
  if (k == "Fp") {
    only_keys(j, {"kind", "p"}, ptr);
    long p = get_long(need(j, "p", ptr), child(ptr, "p"));
    return guarded(child(ptr, "p"), [&]() -> const Field& { return Field::prime(p); });
  }
  if (k == "Fq") {
    only_keys(j, {"kind", "p", "m"}, ptr);
    long p = get_long(need(j, "p", ptr), child(ptr, "p"));
    long m = get_long(need(j, "m", ptr), child(ptr, "m"));
    if (m < 1 || m > Field::kMaxFiniteDegree) throw ConfigError(child(ptr, "m"), "degree out of range");
    return guarded(ptr, [&]() -> const Field& { return Field::finite(p, static_cast<int>(m)); });
  }
  throw ConfigError(child(ptr, "kind"), "unknown field kind \"" + k + "\"");
}

Json encode_field(const Field& f) {
  switch (f.kind()) {
    case Field::Kind::Rationals: return Json{{"kind", "Q"}};
    case Field::Kind::QuadExtOfRationals: return Json{{"kind", "Qsqrt"}, {"d", f.d()}};
    case Field::Kind::PrimeField: return Json{{"kind", "Fp"}, {"p", f.characteristic()}};
    case Field::Kind::FiniteField: return Json{{"kind", "Fq"}, {"p", f.characteristic()}, {"m", f.residue_degree()}};
    case Field::Kind::Quadratic: break;
  }
  throw ConfigError("/", "field " + f.name() + " has no descriptor");
}

QuadSpace decode_form(const Json& j, const std::string& ptr) {
  only_keys(j, {"field", "diagonal"}, ptr);
  const Field& f = decode_field(need(j, "field", ptr), child(ptr, "field"));
  std::string dp = child(ptr, "diagonal");
  const Json& arr = get_array(need(j, "diagonal", ptr), dp);
  if (arr.empty()) throw ConfigError(dp, "empty diagonal");
  Vector d;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    d.push_back(decode(arr[i], f, child(dp, i)));
    if (d.back().is_zero()) throw ConfigError(child(dp, i), "diagonal entry is zero; the form must be regular");
  }
  return guarded(ptr, [&] { return QuadSpace(f, d); });
}

Json encode_form(const QuadSpace& q) { return Json{{"field", encode_field(q.field())}, {"diagonal", encode(q.diagonal())}}; }

ExtensionSpec decode_extension(const Json& j, const std::string& ptr) {
  const Json& kind = need(j, "kind", ptr);
  if (!kind.is_string()) throw ConfigError(child(ptr, "kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "Qsqrt") {
    only_keys(j, {"kind", "d"}, ptr);
    long d = get_long(need(j, "d", ptr), child(ptr, "d"));
    return guarded(child(ptr, "d"), [&] { return ExtensionSpec::quadratic_of_q(d); });
  }
  if (k == "Fq") {
    only_keys(j, {"kind", "p", "m"}, ptr);
    long p = get_long(need(j, "p", ptr), child(ptr, "p"));
    long m = get_long(need(j, "m", ptr), child(ptr, "m"));
    if (m < 2 || m > Field::kMaxFiniteDegree) throw ConfigError(child(ptr, "m"), "degree out of range");
    return guarded(ptr, [&] { return ExtensionSpec::finite_degree(p, static_cast<int>(m)); });
  }
  throw ConfigError(child(ptr, "kind"), "extensions are \"Qsqrt\" or \"Fq\"");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spinor-norm", "lift", "obstruction", "np-check",
                                                 "hilbert",     "h1",   "search"};
  return names;
}

RunConfig parse_config(const std::string& command, const Json& config) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end())
    throw ConfigError("/", "unknown command \"" + command + "\"");
  if (!config.is_object()) throw ConfigError("/", "config must be a JSON object");
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"spinor-norm", {"form", "isometry", "reflections"}},
      {"lift", {"form", "similitude"}},
      {"obstruction", {"form", "theta", "witness"}},
      {"np-check", {"form", "extension"}},
      {"hilbert", {"a", "b", "place"}},
      {"h1", {"form"}},
      {"search", {"forms", "extensions"}},
  };
  const auto& allowed = keys.at(command);
  for (const auto& [k, v] : config.items()) {
    bool known = k == "schema" || k == "seed" || k == "bound" || k == "samples";
    known = known || std::find(allowed.begin(), allowed.end(), k) != allowed.end();
    if (!known) throw ConfigError("/" + k, "unknown field for " + command);
  }
  if (config.contains("schema") && config["schema"] != kSchema)
    throw ConfigError("/schema", "unsupported schema version");

  RunConfig c;
  c.command = command;
  c.echo = config;
  c.echo["schema"] = kSchema;
  if (config.contains("seed")) {
    const Json& sd = config["seed"];
    if (!sd.is_number_integer() || (!sd.is_number_unsigned() && sd.get<long>() < 0))
      throw ConfigError("/seed", "expected a nonnegative integer");
    c.seed = config["seed"].get<std::uint64_t>();
  }
  if (config.contains("bound")) {
    c.bound = get_long(config["bound"], "/bound");
    if (c.bound < 1 || c.bound > 1000) throw ConfigError("/bound", "bound must lie in [1, 1000]");
  }
  c.samples = (command == "np-check" || command == "search") ? 10 : 1;
  if (config.contains("samples")) {
    long n = get_long(config["samples"], "/samples");
    if (n < 1 || n > 100000) throw ConfigError("/samples", "samples must lie in [1, 100000]");
    c.samples = static_cast<std::size_t>(n);
  }
  c.echo["seed"] = c.seed;
  c.echo["bound"] = c.bound;
  c.echo["samples"] = c.samples;

  bool wants_form = command != "hilbert" && command != "search";
  if (wants_form) c.form = decode_form(need(config, "form", ""), "/form");
  if (command == "np-check") c.extension = decode_extension(need(config, "extension", ""), "/extension");
  if (command == "hilbert") {
    need(config, "a", "");
    need(config, "b", "");
  }
  if (command == "search") {
    const Json& fs = get_array(need(config, "forms", ""), "/forms");
    const Json& es = get_array(need(config, "extensions", ""), "/extensions");
    for (std::size_t i = 0; i < fs.size(); ++i) c.forms.push_back(decode_form(fs[i], child("/forms", i)));
    for (std::size_t i = 0; i < es.size(); ++i) c.extensions.push_back(decode_extension(es[i], child("/extensions", i)));
  }
  if (config.contains("isometry") && config.contains("reflections"))
    throw ConfigError("/reflections", "give either an isometry or reflections, not both");
  if (config.contains("witness") && !config.contains("theta"))
    throw ConfigError("/witness", "a witness needs an explicit theta");

  Inputs in = parse_inputs(c);
  if (in.isometry) guarded("/isometry", [&] { return Isometry(*c.form, *in.isometry); });
  if (in.reflections)
    guarded("/reflections", [&] { return compose_reflections(*c.form, *in.reflections); });
  if (in.similitude) {
    Similitude g = guarded("/similitude", [&] { return Similitude(*c.form, *in.similitude); });
    if (!guarded("/similitude", [&] { return g.is_proper(); }))
      throw ConfigError("/similitude", "similitude is improper; only proper similitudes lift");
  }
  if (in.witness) {
    Similitude g = guarded("/witness", [&] { return Similitude(*c.form, *in.witness); });
    if (!guarded("/witness", [&] { return g.is_proper(); })) throw ConfigError("/witness", "witness is improper");
    ObstructionContext ctx(*c.form);
    if (j_map(ctx, *in.theta) != square_class(g.multiplier()))
      throw ConfigError("/witness", "multiplier of the witness is not j(theta) modulo squares");
  }
  return c;
}

// ---------------------------------------------------------------------------

Json cmd_spinor_norm(const RunConfig& c) {
  const QuadSpace& space = *c.form;
  Inputs in = parse_inputs(c);
  std::vector<Isometry> hs;
  if (in.isometry) {
    hs.emplace_back(space, *in.isometry);
  } else if (in.reflections) {
    hs.push_back(compose_reflections(space, *in.reflections));
  } else {
    std::mt19937_64 rng(c.seed);
    for (std::size_t i = 0; i < c.samples; ++i) hs.push_back(random_isometry(space, rng, true));
  }
  Json r = report_shell(c);
  for (const auto& h : hs) {
    auto vs = cartan_dieudonne(h);
    FieldElement prod = space.field().one();
    for (const auto& v : vs) prod *= space.evaluate(v);
    SquareClass sn = square_class(prod);
    r["results"].push_back(Json{{"isometry", encode(h.matrix())},
                                {"proper", h.is_proper()},
                                {"vectors", encode_vectors(vs)},
                                {"product", encode(prod)},
                                {"spinor_norm", encode(sn.representative())},
                                {"trivial", sn.is_trivial()}});
  }
  return r;
}

Json cmd_lift(const RunConfig& c) {
  const QuadSpace& space = *c.form;
  Inputs in = parse_inputs(c);
  AlgebraPtr alg = CliffordAlgebra::create(space);
  std::vector<Similitude> gs;
  if (in.similitude) {
    gs.emplace_back(space, *in.similitude);
  } else {
    std::mt19937_64 rng(c.seed);
    for (std::size_t i = 0; i < c.samples; ++i) gs.push_back(random_proper_similitude(space, rng));
  }
  Json r = report_shell(c);
  for (const auto& g : gs) {
    OmegaElement om = lift_similitude_to_omega(alg, g);
    Json ms = nullptr;
    if (space.dimension() % 4 == 2) {
      UPoint u = mu_star(om);
      ms = encode_theta(u);
    }
    r["results"].push_back(Json{{"similitude", encode(g.matrix())},
                                {"multiplier", encode(g.multiplier())},
                                {"omega", encode_clifford(om.value())},
                                {"mu_bar", encode(mu_bar(om))},
                                {"x", encode(x_map(om))},
                                {"mu_star", ms},
                                {"spin", spin_membership(om.value())}});
  }
  return r;
}

Json cmd_obstruction(const RunConfig& c) {
  const QuadSpace& space = *c.form;
  Inputs in = parse_inputs(c);
  ObstructionContext ctx(space);
  struct Case {
    Theta theta;
    std::optional<Similitude> witness;
  };
  std::vector<Case> cases;
  if (in.theta) {
    std::optional<Similitude> w;
    if (in.witness) w = Similitude(space, *in.witness);
    cases.push_back(Case{*in.theta, w});
  } else {
    std::mt19937_64 rng(c.seed);
    for (std::size_t i = 0; i < c.samples; ++i) {
      Similitude g = random_proper_similitude(space, rng);
      FieldElement a = random_nonzero(space.field(), rng);
      cases.push_back(Case{theta_mul(S_of(ctx, g), i_map(ctx, a)), std::nullopt});
    }
  }
  Json r = report_shell(c);
  for (const auto& cs : cases) {
    Json special;
    std::optional<Similitude> g = cs.witness;
    if (g) {
      special = Json{{"status", "Given"}, {"j_value", encode(j_map(ctx, cs.theta).representative())}};
    } else {
      SpecialResult sr = is_special(ctx, cs.theta);
      special = Json{{"status", special_status_name(sr.status)},
                     {"j_value", encode(sr.j_value.representative())},
                     {"note", sr.note}};
      g = sr.witness;
    }
    if (!g) {
      r["results"].push_back(Json{{"theta", encode_theta(cs.theta)}, {"special", special}, {"obstruction", nullptr}});
      continue;
    }
    ObstructionResult o = obstruction_alpha(ctx, cs.theta, *g, c.bound);
    r["results"].push_back(Json{{"theta", encode_theta(cs.theta)}, {"special", special}, {"obstruction", encode_obstruction(o)}});
  }
  return r;
}

Json cmd_np_check(const RunConfig& c) {
  NPReport rep = weak_np_experiment(*c.form, *c.extension, c.samples, c.seed, c.bound);
  Json r = report_shell(c);
  r["results"].push_back(encode_np_report(rep));
  return r;
}

Json cmd_hilbert(const RunConfig& c) {
  Inputs in = parse_inputs(c);
  std::vector<long> all = relevant_places(in.a, in.b);
  std::vector<long> shown = in.place ? std::vector<long>{*in.place} : all;
  Json places = Json::array();
  for (long p : shown) places.push_back(Json{{"place", encode_place(p)}, {"symbol", hilbert_symbol(in.a, in.b, p)}});
  int product = 1;
  for (long p : all) product *= hilbert_symbol(in.a, in.b, p);
  Json ram = Json::array();
  for (long p : ramified_places(in.a, in.b)) ram.push_back(encode_place(p));
  Json r = report_shell(c);
  r["results"].push_back(Json{{"a", in.a.get_str()},
                              {"b", in.b.get_str()},
                              {"places", places},
                              {"ramified", ram},
                              {"split", ram.empty()},
                              {"product", product}});
  return r;
}

Json cmd_h1(const RunConfig& c) {
  ObstructionContext ctx(*c.form);
  UCount cnt = count_u(ctx);
  H1Description h = h1_mu4Z_finite_field(*c.form);
  Json r = report_shell(c);
  r["results"].push_back(Json{{"u", cnt.u},
                              {"u0", cnt.u0},
                              {"u_over_u0", cnt.u / cnt.u0},
                              {"order", h.order},
                              {"invariant_factors", h.invariant_factors},
                              {"module_order", h.module_order},
                              {"splitting_degree", h.splitting_degree},
                              {"agree", cnt.u == h.order * cnt.u0}});
  return r;
}

Json cmd_search(const RunConfig& c) {
  SearchConfig sc;
  sc.forms = c.forms;
  sc.extensions = c.extensions;
  sc.samples = c.samples;
  sc.seed = c.seed;
  sc.bound = c.bound;
  Json r = report_shell(c);
  Json hits = Json::array();
  for (const auto& run : search_runs(sc)) {
    for (const auto& e : run.report.entries)
      if (e.result.verdict != Verdict::SpinorNorm)
        hits.push_back(Json{{"form", run.form_index},
                            {"extension", run.extension_index},
                            {"index", e.index},
                            {"verdict", verdict_name(e.result.verdict)}});
    r["results"].push_back(
        Json{{"form", run.form_index}, {"extension", run.extension_index}, {"report", encode_np_report(run.report)}});
  }
  r["hits"] = hits;
  return r;
}

Json run_command(const RunConfig& c) {
  if (c.command == "spinor-norm") return cmd_spinor_norm(c);
  if (c.command == "lift") return cmd_lift(c);
  if (c.command == "obstruction") return cmd_obstruction(c);
  if (c.command == "np-check") return cmd_np_check(c);
  if (c.command == "hilbert") return cmd_hilbert(c);
  if (c.command == "h1") return cmd_h1(c);
  return cmd_search(c);
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

namespace {

struct Failure {
  std::string what;
};

void check(bool ok, const std::string& where, const std::string& what) {
  if (!ok) throw Failure{where + ": " + what};
}

std::size_t verify_spinor_norm(const RunConfig& c, const Json& results) {
  const QuadSpace& s = *c.form;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::string p = child("/results", i);
    const Json& e = results[i];
    Matrix m = decode_matrix(need(e, "isometry", p), s.field(), s.dimension(), child(p, "isometry"));
    Isometry h(s, m);
    auto vs = decode_vectors(need(e, "vectors", p), s.field(), s.dimension(), child(p, "vectors"));
    check(compose_reflections(s, vs).matrix() == m, p, "reflections do not compose to the isometry");
    FieldElement prod = s.field().one();
    for (const auto& v : vs) prod *= s.evaluate(v);
    check(prod == decode(need(e, "product", p), s.field(), child(p, "product")), p, "product of q(v) differs");
    SquareClass sn = square_class(decode(need(e, "spinor_norm", p), s.field(), child(p, "spinor_norm")));
    check(sn == square_class(prod), p, "spinor norm class differs");
    check(need(e, "trivial", p) == sn.is_trivial(), p, "triviality flag differs");
    check(need(e, "proper", p) == h.is_proper(), p, "properness flag differs");
  }
  return results.size();
}

std::size_t verify_lift(const RunConfig& c, const Json& results) {
  const QuadSpace& s = *c.form;
  AlgebraPtr alg = CliffordAlgebra::create(s);
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::string p = child("/results", i);
    const Json& e = results[i];
    Matrix m = decode_matrix(need(e, "similitude", p), s.field(), s.dimension(), child(p, "similitude"));
    Similitude g(s, m);
    check(g.multiplier() == decode(need(e, "multiplier", p), s.field(), child(p, "multiplier")), p,
          "multiplier differs");
    OmegaElement om(decode_clifford(need(e, "omega", p), alg, child(p, "omega")), g);
    const Field& z = alg->center_field();
    check(mu_bar(om) == decode(need(e, "mu_bar", p), z, child(p, "mu_bar")), p, "mu_bar differs");
    check(x_map(om) == decode(need(e, "x", p), z, child(p, "x")), p, "x differs");
    if (s.dimension() % 4 == 2) {
      UPoint u = mu_star(om);
      const Json& ms = need(e, "mu_star", p);
      check(u.f == decode(need(ms, "f", child(p, "mu_star")), s.field(), p) &&
                u.z == decode(need(ms, "z", child(p, "mu_star")), z, p),
            p, "mu_star differs");
    }
    check(need(e, "spin", p) == spin_membership(om.value()), p, "spin flag differs");
  }
  return results.size();
}

std::size_t verify_obstruction_results(const RunConfig& c, const Json& results) {
  ObstructionContext ctx(*c.form);
  std::size_t n = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::string p = child("/results", i);
    const Json& e = results[i];
    const Json& o = need(e, "obstruction", p);
    if (o.is_null()) continue;
    ObstructionResult r = decode_obstruction(o, ctx, child(p, "obstruction"));
    check(theta_equal(r.theta, decode_theta(need(e, "theta", p), ctx, child(p, "theta"))), p, "theta differs");
    check(verify_obstruction(ctx, r), p, "obstruction certificate does not verify");
    ++n;
  }
  return n;
}

std::size_t verify_np(const QuadSpace& s, const ExtensionSpec& ext, const Json& rep, const std::string& p) {
  NPReport r = decode_np_report(rep, s, ext, p);
  check(verify_np_report(s, ext, r), p, "weak norm principle report does not verify");
  return r.entries.size();
}

std::size_t verify_hilbert(const RunConfig& c, const Json& results) {
  Json fresh = cmd_hilbert(c)["results"];
  check(fresh == results, "/results", "Hilbert symbols differ on recomputation");
  for (const auto& e : results) check(e["product"] == 1, "/results", "product formula fails");
  return results.size();
}

std::size_t verify_h1(const RunConfig& c, const Json& results) {
  Json fresh = cmd_h1(c)["results"];
  check(fresh == results, "/results", "enumeration differs on recomputation");
  return results.size();
}

}  // namespace

VerifyOutcome verify_report(const Json& report) {
  VerifyOutcome out;
  try {
    if (!report.is_object()) throw ConfigError("/", "report must be a JSON object");
    if (need(report, "schema", "") != kSchema) throw ConfigError("/schema", "unsupported schema version");
    const Json& cmd = need(report, "command", "");
    if (!cmd.is_string()) throw ConfigError("/command", "expected a string");
    RunConfig c = parse_config(cmd.get<std::string>(), need(report, "config", ""));
    check(need(report, "seed", "") == c.seed, "/seed", "seed does not match the config");
    const Json& results = get_array(need(report, "results", ""), "/results");
    const std::string& name = c.command;
    if (name == "spinor-norm") {
      out.checked = verify_spinor_norm(c, results);
    } else if (name == "lift") {
      out.checked = verify_lift(c, results);
    } else if (name == "obstruction") {
      out.checked = verify_obstruction_results(c, results);
    } else if (name == "np-check") {
      for (std::size_t i = 0; i < results.size(); ++i)
        out.checked += verify_np(*c.form, *c.extension, results[i], child("/results", i));
    } else if (name == "hilbert") {
      out.checked = verify_hilbert(c, results);
    } else if (name == "h1") {
      out.checked = verify_h1(c, results);
    } else {
      for (std::size_t i = 0; i < results.size(); ++i) {
        std::string p = child("/results", i);
        std::size_t fi = need(results[i], "form", p).get<std::size_t>();
        std::size_t ei = need(results[i], "extension", p).get<std::size_t>();
        check(fi < c.forms.size() && ei < c.extensions.size(), p, "index out of range");
        out.checked += verify_np(c.forms[fi], c.extensions[ei], need(results[i], "report", p), child(p, "report"));
      }
    }
    out.ok = true;
    out.message = "verified " + std::to_string(out.checked) + " certificates";
  } catch (const Failure& f) {
    out.message = f.what;
  } catch (const ConfigError& e) {
    out.message = e.what();
  } catch (const MathError& e) {
    out.message = e.what();
  } catch (const Json::exception& e) {
    out.message = std::string("malformed report: ") + e.what();
  }
  return out;
}

}  // namespace spinob::cli
