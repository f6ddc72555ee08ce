#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinob/brauer.hpp"
#include "spinob/npharness.hpp"

namespace spinob::cli {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "v1";
inline constexpr const char* kVersion = "1.0.0";

// Rejected input, with a JSON pointer to the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

// Element literals. Q: integer or "p/q". Q(sqrt d): rational or [a, b] for
// a + b sqrt d. F_p: integer. F_{p^m}: integer or [c_0, ..., c_{m-1}].
// Quadratic extensions of any of these: [a, b].
Json encode(const FieldElement& x);
FieldElement decode(const Json& j, const Field& f, const std::string& ptr);
Json encode(const Vector& v);
Json encode(const Matrix& m);
Vector decode_vector(const Json& j, const Field& f, std::size_t n, const std::string& ptr);
Matrix decode_matrix(const Json& j, const Field& f, std::size_t n, const std::string& ptr);

// {"kind":"Q"}, {"kind":"Qsqrt","d":2}, {"kind":"Fp","p":3}, {"kind":"Fq","p":3,"m":2}.
const Field& decode_field(const Json& j, const std::string& ptr);
Json encode_field(const Field& f);
// {"field": ..., "diagonal": [...]}.
QuadSpace decode_form(const Json& j, const std::string& ptr);
Json encode_form(const QuadSpace& q);
// {"kind":"Qsqrt","d":m} or {"kind":"Fq","p":p,"m":r}.
ExtensionSpec decode_extension(const Json& j, const std::string& ptr);

struct RunConfig {
  std::string command;
  // Normalized copy of the input, with seed, bound and samples filled in.
  Json echo;
  std::uint64_t seed = 0;
  long bound = 6;
  std::size_t samples = 1;
  std::optional<QuadSpace> form;
  std::optional<ExtensionSpec> extension;
  std::vector<QuadSpace> forms;
  std::vector<ExtensionSpec> extensions;
};

const std::vector<std::string>& command_names();

// Validates everything before any computation; throws ConfigError.
RunConfig parse_config(const std::string& command, const Json& config);

Json cmd_spinor_norm(const RunConfig& c);
Json cmd_lift(const RunConfig& c);
Json cmd_obstruction(const RunConfig& c);
Json cmd_np_check(const RunConfig& c);
Json cmd_hilbert(const RunConfig& c);
Json cmd_h1(const RunConfig& c);
Json cmd_search(const RunConfig& c);
Json run_command(const RunConfig& c);

// Canonical text of a report: sorted keys, two-space indent, trailing newline.
std::string render(const Json& report);

struct VerifyOutcome {
  bool ok = false;
  std::size_t checked = 0;
  std::string message;
};

// Replays the certificates of a report without re-running any search.
VerifyOutcome verify_report(const Json& report);

}  // namespace spinob::cli
