#pragma once

#include <string>
#include <vector>

namespace stokescope
{

struct VerifyRow
{
  int criterion;
  std::string group;  // curves, solver, stokes or pseudospec
  std::string name;
  double measured;
  std::string expected;
  double tolerance;
  bool pass;
};

// Runs the acceptance checks. An empty filter runs everything; otherwise a criterion runs
// when the filter is its number, "c<number>" or its group, and remaining rows are kept when
// their name contains the filter.
std::vector<VerifyRow> run_verify(const std::string &filter = {});

std::string verify_table(const std::vector<VerifyRow> &rows);
bool all_pass(const std::vector<VerifyRow> &rows);

}  // namespace stokescope
