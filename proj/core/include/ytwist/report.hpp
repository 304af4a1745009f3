#ifndef YTWIST_REPORT_HPP
#define YTWIST_REPORT_HPP

#include <string>

namespace ytwist {

enum class CheckStatus { Pass, Fail, Error };

/// Structured outcome of one named identity check. A Fail always carries a
/// witness (offending entry and value, as text).
struct CheckReport {
  std::string check;
  std::string pair_key;
  int sites = 0;
  std::string shifts;
  int order = 0;
  CheckStatus status = CheckStatus::Pass;
  std::string witness;
  long elapsed_ms = 0;

  bool passed() const { return status == CheckStatus::Pass; }

  static CheckReport pass(std::string check_name) {
    CheckReport r;
    r.check = std::move(check_name);
    return r;
  }
  static CheckReport fail(std::string check_name, std::string witness_text) {
    CheckReport r;
    r.check = std::move(check_name);
    r.status = CheckStatus::Fail;
    r.witness = std::move(witness_text);
    return r;
  }
};

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Error: return "ERROR";
  }
  return "?";
}

}  // namespace ytwist

#endif
