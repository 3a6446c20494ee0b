#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shw/algebra.hpp"

/// The fixed algebras the workbench reasons about: the two- and
/// three-element semi-Heyting algebras, the three four-element Boolean
/// ones, their expansions by ', and the seven-element lattice used by the
/// level-2 search.
///
/// Keys: 2, 2bar, L1..L10 (no '); 2e, 2bare; L1dm..L10dm; L1dp..L10dp;
/// D1, D2, D3; fig2-lattice (lattice reduct only).
///
/// Element order follows the printed tables: (0, 1) for the two-element
/// algebras, (0, a, 1) for the chains, (0, 1, a, b) for D1-D3.
namespace shw::catalog {

const FiniteAlgebra& get(std::string_view key);
bool contains(std::string_view key);
std::vector<std::string> keys();

/// Seven elements 0,a,b,c,d,e,1 forming two stacked four-element diamonds:
/// 0<a, 0<b, a<c, b<c, c<d, c<e, d<1, e<1. No -> and no '.
const FiniteAlgebra& fig2_lattice();

/// Named sets of keys: C10dm, C10dp, C20, S1, S2, S3, RDQDStSH1 (the 25
/// simples), RDMSH1 (15), RDPCSH1 (12), DQDBSH (5).
const std::vector<std::string>& family(std::string_view name);
std::vector<std::string> family_names();

}  // namespace shw::catalog
