#pragma once

#include <string>

#include "foliagraph/config.hpp"

namespace foliagraph {

// Schema: {"vertices":[{"id":str,"endpoint":bool}],
//          "edges":[{"id":str,"ends":[str|"OPEN_END", str|"OPEN_END"]}],
//          "micrographs":{vertexId:[{"id":str,"ends":[edgeId,edgeId]}]}}
// Parse failures throw Error with a JSON-pointer-style path in the message.
GraphicalConfiguration config_from_json(const std::string& text);
std::string config_to_json(const GraphicalConfiguration& config);

// Certificates and obstructions share a "kind" discriminator.
std::string certificate_to_json(const EulerianCertificate& cert);
std::string obstruction_to_json(const Obstruction& obs);
std::string result_to_json(const GlobalResult& result);

// DOT export of the main graph for visualization (micro-edges dashed).
std::string config_to_dot(const GraphicalConfiguration& config);

}  // namespace foliagraph
