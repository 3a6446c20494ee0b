#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "shw/algebra.hpp"
#include "shw/term.hpp"

namespace shw::test {

/// Seed given by --seed on the test command line.
std::uint64_t seed();
void set_seed(std::uint64_t s);

/// Random term of depth at most `depth` over the variables x, y, z.
Term random_term(std::mt19937_64& rng, int depth, bool with_neg = true);

/// Direct recursive evaluation with every derived operation expanded by
/// hand; shares no code with eval() or CompiledTerm.
Elem naive_eval(const FiniteAlgebra& a, const Term& t, const Assignment& env);

/// Every assignment of `vars` over the universe of `a`.
std::vector<Assignment> all_assignments(const FiniteAlgebra& a, const std::vector<std::string>& vars);

/// Subuniverses by testing every subset that contains 0 and 1.
std::vector<std::vector<Elem>> brute_force_subuniverses(const FiniteAlgebra& a);

std::string source_path(const std::string& relative);

}  // namespace shw::test
