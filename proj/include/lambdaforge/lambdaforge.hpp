#pragma once

// Umbrella header: the exact lambda-bracket engine, the algebra catalog, the
// flat G2 tensor kernel, the chiral-de-Rham sections, the text formats, and
// the JSON report writer.

#include "scalar.hpp"   // exact arithmetic over Q(i, sqrt2, sqrt15)
#include "terms.hpp"    // generators, monomials, field expressions
#include "engine.hpp"   // lambda brackets, normal ordering, mode products
#include "axioms.hpp"   // identity residues and the randomized axiom suite
#include "builtins.hpp" // the algebra catalog
#include "checks.hpp"   // shared check-result type
#include "tensor.hpp"   // G2 forms and contraction identities on flat R^7
#include "embed.hpp"    // frame fields and form embedding
#include "cdr.hpp"      // chiral sections and the main verification suite
#include "dsl.hpp"      // .alg / realization text formats
#include "report.hpp"   // JSON reports
