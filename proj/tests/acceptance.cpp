// Acceptance checks: one PASS/FAIL line per criterion, details indented below it.
// Usage: acceptance [criterion or filter]
#include <iostream>
#include <map>

#include "stokescope/verify.hpp"

int main(int argc, char **argv)
{
  const std::string filter = argc > 1 ? argv[1] : "";
  const auto rows = stokescope::run_verify(filter);
  if (rows.empty())
  {
    std::cout << "FAIL no checks match '" << filter << "'\n";
    return 1;
  }
  std::map<int, std::vector<const stokescope::VerifyRow *>> by;
  for (const auto &r : rows)
  {
    by[r.criterion].push_back(&r);
  }
  bool ok = true;
  for (const auto &[id, list] : by)
  {
    bool pass = true;
    for (const auto *r : list)
    {
      pass = pass && r->pass;
    }
    ok = ok && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << "\n";
    for (const auto *r : list)
    {
      std::cout << "    " << (r->pass ? "ok  " : "bad ") << r->name << ": measured " << r->measured
                << ", expected " << r->expected << "\n";
    }
  }
  return ok ? 0 : 1;
}
