#ifndef CARTIER_CARTIER_HPP
#define CARTIER_CARTIER_HPP

#include <cartier/error.hpp>
#include <cartier/prime_field.hpp>
#include <cartier/polynomial.hpp>
#include <cartier/finite_field.hpp>
#include <cartier/multi_polynomial.hpp>
#include <cartier/poly_parse.hpp>
#include <cartier/linear_algebra.hpp>
#include <cartier/resultant.hpp>
#include <cartier/series.hpp>
#include <cartier/hensel.hpp>
#include <cartier/random.hpp>
#include <cartier/dfao.hpp>
#include <cartier/kernel.hpp>
#include <cartier/christol.hpp>
#include <cartier/network.hpp>
#include <cartier/enumerate.hpp>
#include <cartier/propagate.hpp>
#include <cartier/witness.hpp>
#include <cartier/cartier_ops.hpp>
#include <cartier/eqsys.hpp>
#include <cartier/eqsys_io.hpp>

#endif
