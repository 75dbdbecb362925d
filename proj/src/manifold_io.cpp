#include "cmg/manifold_io.hpp"

#include <iomanip>
#include <ostream>

#include <json.hpp>

namespace cmg {

namespace {
const char* kind_name(ContactKind k) {
  return k == ContactKind::kVertexSdf ? "VS" : "EE";
}
const char* mode_name(ContactMode m) {
  switch (m) {
    case ContactMode::kFull: return "full";
    case ContactMode::kNoEe: return "no-ee";
    case ContactMode::kOneSided: return "one-sided";
  }
  return "full";
}
}  // namespace

void write_manifold_csv(std::ostream& os, const ContactManifold<double>& m) {
  os << "index,kind,side,src_a,src_b,px,py,pz,dist,nx,ny,nz,activity\n";
  os << std::setprecision(17);
  for (size_t i = 0; i < m.contacts.size(); ++i) {
    const auto& c = m.contacts[i];
    os << i << ',' << kind_name(c.kind) << ',' << c.side << ',' << c.src_a << ',' << c.src_b
       << ',' << c.point.x << ',' << c.point.y << ',' << c.point.z << ',' << c.dist << ','
       << c.normal.x << ',' << c.normal.y << ',' << c.normal.z << ',' << c.activity << '\n';
  }
}

std::string manifold_to_json(const ContactManifold<double>& m) {
  nlohmann::json j;
  j["layout"] = {{"n1", m.n1}, {"n2", m.n2}, {"m1", m.m1}, {"m2", m.m2},
                 {"mode", mode_name(m.mode)}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : m.contacts) {
    rows.push_back({{"kind", kind_name(c.kind)},
                    {"side", c.side},
                    {"src_a", c.src_a},
                    {"src_b", c.src_b},
                    {"point", {c.point.x, c.point.y, c.point.z}},
                    {"dist", c.dist},
                    {"normal", {c.normal.x, c.normal.y, c.normal.z}},
                    {"activity", c.activity}});
  }
  j["contacts"] = std::move(rows);
  return j.dump(2);
}

}  // namespace cmg
