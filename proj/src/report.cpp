#include "fbl/report.hpp"

namespace fbl {

nlohmann::json to_json(const NormEstimate& estimate)
{
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& f : estimate.witness.functionals()) witness.push_back(f.values());
    return {{"lower_bound", estimate.lower_bound},
            {"objective", estimate.objective},
            {"constraint", estimate.witness.constraint()},
            {"witness", std::move(witness)},
            {"certificate_signs", estimate.witness.certificate()},
            {"restarts", estimate.restarts},
            {"evaluations", estimate.evaluations},
            {"seed", estimate.seed}};
}

nlohmann::json to_json(const UpperBound& bound)
{
    return {{"upper_bound", bound.value},
            {"face_sup", bound.face_sup},
            {"certified", bound.certified},
            {"approximate", !bound.certified},
            {"grid", bound.grid},
            {"evaluations", bound.evaluations}};
}

} // namespace fbl
