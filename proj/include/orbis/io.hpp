#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "orbis/enumeration.hpp"
#include "orbis/orbisurface.hpp"
#include "orbis/psi.hpp"
#include "orbis/wave_trace.hpp"

namespace orbis {

// Rounds to 15 significant digits, the precision of every emitted number.
double round15(double x);
std::string format15(double x);

// Two columns with a header naming the variable: "t,value" or "r,value".
void write_csv(std::ostream& out, const SampledFunction& f);
SampledFunction read_csv(std::istream& in);

// {"a": .., "b": .., "c": .., "d": ..}; reading also accepts [a, b, c, d].
nlohmann::json to_json(const Moebius& m);
Moebius moebius_from_json(const nlohmann::json& j);

// {"genus": g, "cone_orders": [...], "generators": [matrix, ...]}; the
// generators are optional for triangle signatures.
HyperbolicStructure structure_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HyperbolicStructure& s);

nlohmann::json spectrum_entry_json(const SpectrumEntry& e);
// length,multiplicity,word,primitive rows with a header.
void write_spectrum_csv(std::ostream& out, const LengthSpectrum& spectrum);

// Sidecar of a mollified trace: {sigma, area, parts}.
nlohmann::json trace_sidecar(const MollifiedTrace& trace, double area);
// Rebuilds a trace from its CSV samples and sidecar; returns the area too.
MollifiedTrace trace_from(SampledFunction samples, const nlohmann::json& sidecar, double* area);

// Recursively rounds every floating point number to 15 significant digits.
nlohmann::json rounded(nlohmann::json j);

}  // namespace orbis
