// SVG rendering of a real curve and its real bitangents in the disk model
// of RP^2 (unit disk with antipodal boundary points identified).

#ifndef BITLAB_SVG_HPP
#define BITLAB_SVG_HPP

#include <string>

#include "bitlab/solver.hpp"

namespace bitlab {

std::string svg_plot(const Poly& curve, const std::vector<BitangentRecord>& records,
                     int size_px = 760);

}  // namespace bitlab

#endif
