#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "krylab/constraints.hpp"
#include "krylab/krylov.hpp"
#include "krylab/operator.hpp"
#include "krylab/solver.hpp"

namespace krylab {

using Json = nlohmann::json;

// Operator wire format: {"n": N, "re": [[...]], "im": [[...]]}, row-major.
Json to_json(const Operator& a);
/// Throws DimensionError on ragged or mis-sized arrays and DomainError on
/// non-numeric or non-finite entries.
Operator operator_from_json(const Json& j);
Operator read_operator(const std::filesystem::path& path);

// {"q": <operator>, "h": <operator>, "breakdown": b | null, "subdiag": [...]}
Json to_json(const KrylovForm& k);
KrylovForm krylov_from_json(const Json& j);

// {"a": [...]}
Json to_json(const DiagonalElement& d);
DiagonalElement diagonal_from_json(const Json& j);

Json to_json(Window w);
Json to_json(const MembershipVerdict& v);
Json to_json(const SubspaceCandidate& s);
Json to_json(const FeasibilityReport& r);
Json to_json(const FipAuditRow& r);

/// 17 significant digits, the precision used in every CSV report.
std::string format_double(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);

}  // namespace krylab
