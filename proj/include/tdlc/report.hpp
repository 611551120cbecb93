#pragma once

// Machine-readable reports. Every top-level report carries "format": 1, and
// every computed number sits next to its certification.

#include "json.hpp"
#include "tdlc/axis_tree.hpp"
#include "tdlc/dynamics.hpp"
#include "tdlc/padic.hpp"
#include "tdlc/scale.hpp"

namespace tdlc::report {

using nlohmann::json;

inline constexpr int kFormat = 1;

json cert(const Certification& c);
json verdict(const Verdict& v);
json rational(const Rational& r);
json vertices(const std::vector<VertexAddr>& vs);
json fixator(const FixatorSpec& u);

json axis(const Axis& a);
json isometry(const IsometryReport& r);
json scale(const ScaleReport& r);
json tidy(const TidyVerdict& v);
json modular(const ModularReport& m);
json battery(const BatteryReport& b);
json neighbourhood(const NeighbourhoodReport& n);
json arrows(const ArrowReport& a);
json absorbing(const AbsorbingWitness& w);
json contraction(const ContractionReport& c);
json contraction_space(const ContractionSpaceReport& c);
/// Members by depth below the root, and the sigma table sigma(m) for
/// m = 0..max_m from the root, with HorizonError entries as null.
json axis_tree(const AxisTree& t, int max_m);

/// Wraps a body as {"format": 1, "kind": kind, ...body}.
json envelope(const std::string& kind, json body);

}  // namespace tdlc::report
