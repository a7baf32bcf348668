#pragma once

#include "ifcnorm/diff.hpp"
#include "ifcnorm/djb.hpp"
#include "ifcnorm/equivalence.hpp"
#include "ifcnorm/graph.hpp"
#include "ifcnorm/hashing.hpp"
#include "ifcnorm/id_assign.hpp"
#include "ifcnorm/normalize.hpp"
#include "ifcnorm/parallel.hpp"
#include "ifcnorm/parse.hpp"
#include "ifcnorm/real_text.hpp"
#include "ifcnorm/schema_tables.hpp"
#include "ifcnorm/sha256.hpp"
#include "ifcnorm/value.hpp"
#include "ifcnorm/write.hpp"
