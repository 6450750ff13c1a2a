#pragma once

#include <stdexcept>
#include <string>

namespace covlift {

enum class Errc {
  invalid_graph,
  invalid_argument,
  non_unit,
  singular,
  cap_exceeded,
  not_automorphism,
  not_tree_preserving,
  not_monomial,
  precondition,
  parse,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_graph: return "invalid graph";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::non_unit: return "non-unit";
    case Errc::singular: return "singular matrix";
    case Errc::cap_exceeded: return "cap exceeded";
    case Errc::not_automorphism: return "not an automorphism";
    case Errc::not_tree_preserving: return "not tree-preserving";
    case Errc::not_monomial: return "not monomial";
    case Errc::precondition: return "precondition violated";
    case Errc::parse: return "parse error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace covlift
