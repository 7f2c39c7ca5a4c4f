#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "frobmod/duality.hpp"
#include "frobmod/glue.hpp"

namespace frobmod::cli {

using algebra::AlgebraPtr;

// raised for malformed or inconsistent input documents; the message carries
// the 1-based line (and column where available) of the offending token
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SubspaceDecl {
  std::string name;
  std::string alg;
  std::vector<int> killed;  // 0-based class positions
};

struct TaskDecl {
  std::string command;
  std::vector<std::string> args;
  // expectation key and raw value text, in declaration order
  std::vector<std::pair<std::string, std::string>> expects;
  int line = 0;
};

// a parsed document; every name in a task resolves and every block has been
// validated, so running a task can only fail for mathematical reasons
struct InputDocument {
  std::uint32_t p = 0;
  std::vector<std::string> algebra_order;
  std::map<std::string, AlgebraPtr> algebras;
  std::vector<std::string> bimodule_order;
  std::map<std::string, bimodules::Bimodule> bims;
  std::vector<std::string> subspace_order;
  std::map<std::string, SubspaceDecl> subspaces;
  std::vector<TaskDecl> tasks;
};

InputDocument parse(const std::string& text);

// canonical text form; parsing it reproduces the document and serializing
// again reproduces the same bytes
std::string serialize(const InputDocument& doc);

struct Flags {
  std::uint64_t seed = 0x5eed;
  std::string format = "text";  // "text" | "json"
  bool include_zero_subcategory = false;
};

// one reported value; str() is the canonical text rendering and the basis
// for expectation matching
struct FactValue {
  enum class Kind { Text, Int, List, Table };
  Kind kind = Kind::Text;
  std::string text;
  long long num = 0;
  std::vector<int> list;
  std::vector<std::vector<int>> table;

  static FactValue of(std::string s);
  static FactValue of_bool(bool b);
  static FactValue of_int(long long v);
  static FactValue of_list(std::vector<int> v);
  static FactValue of_table(const exactla::Mat& m);
  std::string str() const;
};

struct ExpectOutcome {
  std::string key;
  std::string wanted;
  std::string got;  // "(absent)" when the fact is missing
  bool ok = false;
};

struct TaskResult {
  std::string command;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, FactValue>> facts;
  std::vector<ExpectOutcome> expects;
  // "" when the task ran to completion; otherwise "hypothesis-failure",
  // "analysis-error" or "internal"
  std::string error_kind;
  std::string error_message;
  bool ok = false;

  const FactValue* find(const std::string& key) const;
};

struct Report {
  std::uint32_t p = 0;
  std::string command;
  std::uint64_t seed = 0;
  std::vector<TaskResult> tasks;
  int exit_code = 0;  // 0 ok, 1 expectation miss, 3 internal failure
};

// runs the document's tasks matching the command ("report-all" selects every
// task) and collects one result per task; unknown commands and documents
// without a matching task raise ParseError
Report run(const InputDocument& doc, const std::string& command, const Flags& flags);

// deterministic rendering; identical reports yield identical bytes
std::string emit(const Report& report, const std::string& format);

}  // namespace frobmod::cli
