#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dgatk/hochschild.hpp"

namespace dgatk {

/// One expected value: the check is recomputed and its canonical string compared.
/// `source` is "published" (value stated in the literature), "trivial" or "derived".
struct CatalogCheck {
  std::string kind;
  std::vector<std::string> args;
  std::string expected;
  std::string source;
};

struct CatalogEntry {
  std::string id;
  std::string text;  // presentation language
  std::string description;
  std::string notes;
  std::vector<CatalogCheck> checks;

  DgaPresentation presentation() const { return parse_presentation(text); }
};

const std::vector<CatalogEntry>& catalog();
/// nullptr when absent.
const CatalogEntry* find_entry(const std::string& id);

/// Canonical per-degree listing "0:Z/2 1:0 ...".
std::string group_table(const std::map<int, std::vector<Integer>>& factors, const Ground& g);

/// Canonical string for a check on an entry.
std::string evaluate_check(const CatalogEntry& e, const CatalogCheck& c, const RealizeOptions& opt = {});

struct CheckResult {
  std::string entry;
  std::string kind;
  std::string args;
  std::string expected;
  std::string actual;
  std::string source;
  bool pass = false;
};

std::vector<CheckResult> verify_catalog(const RealizeOptions& opt = {},
                                        const std::function<void(const CheckResult&)>& progress = {});

}  // namespace dgatk
