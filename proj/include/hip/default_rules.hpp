#pragma once

namespace hip {

// Built-in rule data, used when no rule files are given on the command line.
// The same documents ship under data/ for users who want to extend them.
extern const char* kDefaultNormalizationRules;
extern const char* kDefaultTaxonomyRules;
extern const char* kDefaultOverrides;

}  // namespace hip
