#pragma once

#include "params.hpp"

#include "sobolab/bootstrap.hpp"
#include "sobolab/constants.hpp"
#include "sobolab/ensemble.hpp"
#include "sobolab/flow.hpp"
#include "sobolab/inequality.hpp"
#include "sobolab/semigroup_riesz.hpp"

namespace sobolab::cli {

json to_report(const EnsembleSpec& s);
json to_report(const SobolevEstimate& e);
json to_report(const InequalityCheck& c);
json to_report(const StepConstants& s);
json to_report(const BootstrapChain& c);
json to_report(const AlphaScalingRecord& r);
json to_report(const ContractionReport& r);
json to_report(const UltracontractivityFit& f);
json to_report(const Theorem31Report& r);
json to_report(const MappingNormScan& s);
json to_report(const BesselEquivalence& b);
json to_report(const ScalingTransferReport& s);
json to_report(const FlowTrajectory& t);

}  // namespace sobolab::cli
