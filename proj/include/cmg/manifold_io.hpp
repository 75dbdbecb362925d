#pragma once

#include <iosfwd>
#include <string>

#include "cmg/manifold.hpp"

namespace cmg {

// CSV schema v1: header line, then one row per contact:
//   index,kind,side,src_a,src_b,px,py,pz,dist,nx,ny,nz,activity
void write_manifold_csv(std::ostream& os, const ContactManifold<double>& m);

// JSON mirror of the same records plus layout metadata.
std::string manifold_to_json(const ContactManifold<double>& m);

}  // namespace cmg
