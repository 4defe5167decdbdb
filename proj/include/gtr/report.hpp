// Structured verification results: data, not exceptions.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace gtr {

enum class Verdict { Pass, Fail, NotApplicable, Skipped };

const char* verdict_name(Verdict v);

struct VerificationReport {
  std::string check;
  std::string curve;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  Verdict verdict = Verdict::Pass;
  std::vector<nlohmann::ordered_json> witnesses;

  bool passed() const { return verdict == Verdict::Pass; }
  /// Records a witness and turns the verdict to Fail.
  void fail_with(nlohmann::ordered_json witness) {
    verdict = Verdict::Fail;
    witnesses.push_back(std::move(witness));
  }
};

nlohmann::ordered_json to_json(const VerificationReport& r);

}  // namespace gtr
