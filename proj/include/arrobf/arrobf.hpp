// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/arrobf.hpp
//! Convenience header pulling in the whole library (the CLI layer excluded).
//---------------------------------------------------------------------------//
#pragma once

#include "codegen.hpp"
#include "constant_hiding.hpp"
#include "decl_parser.hpp"
#include "index_maps.hpp"
#include "kinds.hpp"
#include "metrics.hpp"
#include "restructured_store.hpp"
#include "verify.hpp"
