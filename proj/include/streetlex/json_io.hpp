// JSON views of report types, for callers that compose larger documents.
#pragma once

#include <json.hpp>

#include "streetlex/agreement.hpp"
#include "streetlex/classify.hpp"

namespace streetlex {

/// {confusion, per_class, macro_f1, accuracy, n}
nlohmann::json report_to_json(const EvalReport& r);

/// {kappa, observed, expected, n, labels, matrix}
nlohmann::json kappa_to_json(const KappaResult& k, const AnnotationPair& pair);

}  // namespace streetlex
