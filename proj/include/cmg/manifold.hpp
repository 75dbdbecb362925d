#pragma once

// End-to-end contact manifold generation between two posed surfaces:
//
//   1. every vertex is scored by the opposing surface's SDF,
//   2. edges inherit the mean of their endpoint scores,
//   3. soft top-K selection picks the deepest vertices / edges,
//   4. vertex-SDF contacts: distance and normal straight from the SDF,
//   5. edge-edge contacts: regularized box-QP witness points, optional
//      sphere-traced projection, SDF-based sign assignment, and an activity
//      indicator multiplying the colliding / penetrating / nearest-neighbor /
//      clashing soft conditions.
//
// The output length is a function of the scene only (N1 + N2 + 2*M1*M2 in
// full mode), never of the poses, so batches stay shape-uniform.
// Layout: V-S block of surface 1, V-S block of surface 2, then E-E pairs in
// row-major (k, l) order, side 1 before side 2 within each pair.

#include <vector>

#include "cmg/config.hpp"
#include "cmg/surface.hpp"
#include "cmg/witness.hpp"

namespace cmg {

enum class ContactKind { kVertexSdf, kEdgeEdge };

template <class T>
struct ContactPoint {
  Vec3<T> point{};   // world frame
  T dist{};          // signed; negative = penetrating (nonmetric scaling allowed)
  Vec3<T> normal{};  // norm <= 1; sign-scaled for E-E contacts
  T activity{};      // in [0, 1]
  ContactKind kind = ContactKind::kVertexSdf;
  int side = 1;      // surface owning the witness feature
  int src_a = -1;    // vertex index (V-S) or surface-1 edge index (E-E)
  int src_b = -1;    // -1 (V-S) or surface-2 edge index (E-E)
};

template <class T>
struct EeIndicatorMatrices {
  size_t m1 = 0, m2 = 0;  // row-major m1 x m2 unless noted
  std::vector<T> dist;    // unsigned witness distances
  std::vector<T> con;     // colliding (shared by both sides)
  std::vector<T> pen1, pen2;
  std::vector<T> nn1, nn2;  // rows of nn1 sum to 1; columns of nn2 sum to 1
  std::vector<T> clash;     // shared by both sides
  std::vector<T> act1, act2;

  const T& at(const std::vector<T>& m, size_t k, size_t l) const { return m[k * m2 + l]; }
};

template <class T>
struct ContactManifold {
  int n1 = 0, n2 = 0;  // V-S contact counts per side
  int m1 = 0, m2 = 0;  // selected edge counts per side
  ContactMode mode = ContactMode::kFull;
  std::vector<ContactPoint<T>> contacts;
  EeIndicatorMatrices<T> ee;

  size_t expected_size() const {
    switch (mode) {
      case ContactMode::kFull:
        return size_t(n1) + size_t(n2) + 2 * size_t(m1) * size_t(m2);
      case ContactMode::kNoEe:
        return size_t(n1) + size_t(n2);
      case ContactMode::kOneSided:
        return size_t(n1);
    }
    return 0;
  }
};

// --- pipeline stages ------------------------------------------------------------

// Opposing-SDF value per world-frame vertex.
template <class T>
std::vector<T> vertex_penetrations(const std::vector<Vec3<T>>& verts,
                                   const PosedSdf<T>& opposing) {
  std::vector<T> out(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) out[i] = opposing.value(verts[i]);
  return out;
}

// Mean of the two endpoint penetrations.
template <class T>
std::vector<T> edge_penetrations(const std::vector<T>& vertex_pens,
                                 const std::vector<std::array<int, 2>>& edges) {
  std::vector<T> out(edges.size());
  for (size_t i = 0; i < edges.size(); ++i)
    out[i] = (vertex_pens[edges[i][0]] + vertex_pens[edges[i][1]]) * T(0.5);
  return out;
}

template <class T>
struct SelectedVertices {
  std::vector<Vec3<T>> positions;  // soft-averaged payloads
  std::vector<int> source;         // hard argmax attribution per slot
};

template <class T>
struct SelectedEdges {
  std::vector<Vec3<T>> a, b;  // endpoints per selected edge
  std::vector<int> source;
};

namespace detail {

template <class T>
std::vector<int> hard_attribution(const SoftSelect<T>& sel) {
  std::vector<int> src(sel.selected);
  HardBranchScope scope;  // provenance only; never enters the value path
  for (size_t k = 0; k < sel.selected; ++k) {
    size_t best = 0;
    for (size_t i = 1; i < sel.candidates; ++i)
      if (primal(sel(k, i)) > primal(sel(k, best))) best = i;
    src[k] = static_cast<int>(best);
  }
  return src;
}

}  // namespace detail

// Soft top-K of the deepest candidates (scores = negated penetrations).
// K == D is the documented "no selection" case: payloads pass through in
// index order.
template <class T>
SelectedVertices<T> select_topk_vertices(const std::vector<Vec3<T>>& verts,
                                         const std::vector<T>& penetrations, size_t k,
                                         double tau) {
  const size_t d = verts.size();
  if (k < 1 || k > d) throw std::invalid_argument("select_topk: require 1 <= K <= D");
  SelectedVertices<T> out;
  if (k == d) {
    out.positions = verts;
    out.source.resize(d);
    for (size_t i = 0; i < d; ++i) out.source[i] = static_cast<int>(i);
    return out;
  }
  std::vector<T> scores(d);
  for (size_t i = 0; i < d; ++i) scores[i] = -penetrations[i];
  const SoftSelect<T> sel = soft_topk(scores, k, tau);
  out.positions.assign(k, Vec3<T>{});
  for (size_t r = 0; r < k; ++r)
    for (size_t i = 0; i < d; ++i) out.positions[r] += verts[i] * sel(r, i);
  out.source = detail::hard_attribution(sel);
  return out;
}

template <class T>
SelectedEdges<T> select_topk_edges(const std::vector<Vec3<T>>& verts,
                                   const std::vector<std::array<int, 2>>& edges,
                                   const std::vector<T>& edge_pens, size_t k, double tau) {
  const size_t d = edges.size();
  if (k < 1 || k > d) throw std::invalid_argument("select_topk: require 1 <= K <= D");
  SelectedEdges<T> out;
  if (k == d) {
    out.a.resize(d);
    out.b.resize(d);
    out.source.resize(d);
    for (size_t i = 0; i < d; ++i) {
      out.a[i] = verts[edges[i][0]];
      out.b[i] = verts[edges[i][1]];
      out.source[i] = static_cast<int>(i);
    }
    return out;
  }
  std::vector<T> scores(d);
  for (size_t i = 0; i < d; ++i) scores[i] = -edge_pens[i];
  const SoftSelect<T> sel = soft_topk(scores, k, tau);
  out.a.assign(k, Vec3<T>{});
  out.b.assign(k, Vec3<T>{});
  for (size_t r = 0; r < k; ++r)
    for (size_t i = 0; i < d; ++i) {
      out.a[r] += verts[edges[i][0]] * sel(r, i);
      out.b[r] += verts[edges[i][1]] * sel(r, i);
    }
  out.source = detail::hard_attribution(sel);
  return out;
}

// V-S contacts: point = vertex, distance = opposing SDF, normal = smooth-
// normalized opposing normal field, activity = penetration sigmoid.
template <class T>
std::vector<ContactPoint<T>> vs_contacts(const SelectedVertices<T>& selected,
                                         const PosedSdf<T>& opposing,
                                         const SmoothingConfig& cfg, int side) {
  std::vector<ContactPoint<T>> out(selected.positions.size());
  for (size_t i = 0; i < selected.positions.size(); ++i) {
    const Vec3<T>& p = selected.positions[i];
    const SdfSample<T> s = opposing.value_and_normal_source(p);
    ContactPoint<T>& c = out[i];
    c.point = p;
    c.dist = s.value;
    c.normal = normalize_smooth(s.grad, cfg.tau_normal);
    c.activity = sigma_greater(-s.value, 0.0, cfg.tau_pen);
    c.kind = ContactKind::kVertexSdf;
    c.side = side;
    c.src_a = selected.source[i];
    c.src_b = -1;
  }
  return out;
}

template <class T>
struct EeContactBlock {
  std::vector<ContactPoint<T>> contacts;  // 2 * m1 * m2, pair-major
  EeIndicatorMatrices<T> indicators;
};

template <class T>
EeContactBlock<T> ee_contacts(const SelectedEdges<T>& edges1, const SelectedEdges<T>& edges2,
                              const PosedSdf<T>& sdf1, const PosedSdf<T>& sdf2,
                              const SmoothingConfig& cfg) {
  const size_t m1 = edges1.a.size();
  const size_t m2 = edges2.a.size();
  const size_t n = m1 * m2;

  EeContactBlock<T> out;
  auto& ind = out.indicators;
  ind.m1 = m1;
  ind.m2 = m2;
  ind.dist.resize(n);
  ind.con.resize(n);
  ind.pen1.resize(n);
  ind.pen2.resize(n);
  ind.nn1.resize(n);
  ind.nn2.resize(n);
  ind.clash.resize(n);
  ind.act1.resize(n);
  ind.act2.resize(n);

  std::vector<Vec3<T>> wp1(n), wp2(n), nbar(n);
  std::vector<T> sign1(n), sign2(n), cont(n, T(1));

  for (size_t k = 0; k < m1; ++k) {
    for (size_t l = 0; l < m2; ++l) {
      const size_t i = k * m2 + l;
      const EeWitness<T> w =
          ee_witness(edges1.a[k], edges1.b[k], edges2.a[l], edges2.b[l], cfg);
      Vec3<T> p1 = w.p1;
      Vec3<T> p2 = w.p2;
      if (cfg.sphere_trace && cfg.sphere_trace_iters > 0) {
        p1 = sphere_trace_project(sdf1, p1, cfg.sphere_trace_iters, cfg.tau_normal);
        p2 = sphere_trace_project(sdf2, p2, cfg.sphere_trace_iters, cfg.tau_normal);
      }
      const Vec3<T> delta = p1 - p2;
      using std::sqrt;
      const T dist_guarded = sqrt(norm_sq(delta) + T(SmoothingConfig::kEdgeNormalEps));
      const Vec3<T> n_unsigned = delta / dist_guarded;

      const SdfSample<T> own1 = sdf1.value_and_normal_source(p1);
      const SdfSample<T> own2 = sdf2.value_and_normal_source(p2);
      const Vec3<T> n1 = normalize_smooth(own1.grad, cfg.tau_normal);
      const Vec3<T> n2 = normalize_smooth(own2.grad, cfg.tau_normal);

      T g1, g2;
      if (cfg.hard_ops) {
        if constexpr (std::is_same_v<T, double>) {
          g1 = sign_hard(dot(n2, n_unsigned));
          g2 = sign_hard(dot(n1, n_unsigned));
        } else {
          assert(false && "hard operators are not differentiable; use the smooth mode");
          g1 = g2 = T(0);
        }
      } else {
        g1 = sign_s(dot(n2, n_unsigned), cfg.tau_sign);
        g2 = sign_s(dot(n1, n_unsigned), cfg.tau_sign);
      }

      wp1[i] = p1;
      wp2[i] = p2;
      nbar[i] = n_unsigned;
      sign1[i] = g1;
      sign2[i] = g2;
      ind.dist[i] = dist_guarded;
      ind.con[i] = w.gamma_con;
      ind.pen1[i] = sigma_greater(-sdf2.value(p1), 0.0, cfg.tau_pen);
      ind.pen2[i] = sigma_greater(-sdf1.value(p2), 0.0, cfg.tau_pen);
      ind.clash[i] = sigma_greater(-dot(n1, n2), 0.0, cfg.tau_clash);
      if (cfg.containment_safeguard) {
        cont[i] = sigma_greater(-own1.value, 0.0, cfg.tau_cont) *
                  sigma_greater(-own2.value, 0.0, cfg.tau_cont);
      }
    }
  }

  // Nearest-neighbor softmins over the distance matrix: rows for side 1,
  // columns for side 2 (nearest-neighbor search is asymmetric).
  std::vector<T> buffer(std::max(m1, m2));
  for (size_t k = 0; k < m1; ++k) {
    argmin_s(ind.dist.data() + k * m2, m2, cfg.tau_nn, buffer.data());
    for (size_t l = 0; l < m2; ++l) ind.nn1[k * m2 + l] = buffer[l];
  }
  std::vector<T> column(m1);
  for (size_t l = 0; l < m2; ++l) {
    for (size_t k = 0; k < m1; ++k) column[k] = ind.dist[k * m2 + l];
    argmin_s(column.data(), m1, cfg.tau_nn, buffer.data());
    for (size_t k = 0; k < m1; ++k) ind.nn2[k * m2 + l] = buffer[k];
  }

  out.contacts.resize(2 * n);
  for (size_t k = 0; k < m1; ++k) {
    for (size_t l = 0; l < m2; ++l) {
      const size_t i = k * m2 + l;
      ind.act1[i] = ind.con[i] * ind.pen1[i] * ind.nn1[i] * ind.clash[i] * cont[i];
      ind.act2[i] = ind.con[i] * ind.pen2[i] * ind.nn2[i] * ind.clash[i] * cont[i];

      ContactPoint<T>& c1 = out.contacts[2 * i];
      c1.point = wp1[i];
      c1.dist = sign1[i] * ind.dist[i];
      c1.normal = nbar[i] * sign1[i];
      c1.activity = ind.act1[i];
      c1.kind = ContactKind::kEdgeEdge;
      c1.side = 1;
      c1.src_a = edges1.source[k];
      c1.src_b = edges2.source[l];

      ContactPoint<T>& c2 = out.contacts[2 * i + 1];
      c2.point = wp2[i];
      c2.dist = sign2[i] * ind.dist[i];
      c2.normal = nbar[i] * sign2[i];
      c2.activity = ind.act2[i];
      c2.kind = ContactKind::kEdgeEdge;
      c2.side = 2;
      c2.src_a = edges1.source[k];
      c2.src_b = edges2.source[l];
    }
  }
  return out;
}

// --- top level -------------------------------------------------------------------

template <class T>
ContactManifold<T> generate_manifold(const SurfaceModel& model1, const SurfaceModel& model2,
                                     const Pose6<T>& pose1, const Pose6<T>& pose2,
                                     const SmoothingConfig& cfg) {
  const PosedSurface<T> s1 = pose_surface(model1, pose1);
  const PosedSurface<T> s2 = pose_surface(model2, pose2);

  const std::vector<T> pens1 = vertex_penetrations(s1.vertices, s2.sdf);

  ContactManifold<T> out;
  out.mode = cfg.mode;
  out.n1 = model1.effective_vertex_topk();

  const SelectedVertices<T> sel_v1 =
      select_topk_vertices(s1.vertices, pens1, out.n1, cfg.tau_topk_verts);
  auto vs1 = vs_contacts(sel_v1, s2.sdf, cfg, 1);
  out.contacts.insert(out.contacts.end(), vs1.begin(), vs1.end());

  if (cfg.mode != ContactMode::kOneSided) {
    const std::vector<T> pens2 = vertex_penetrations(s2.vertices, s1.sdf);
    out.n2 = model2.effective_vertex_topk();
    const SelectedVertices<T> sel_v2 =
        select_topk_vertices(s2.vertices, pens2, out.n2, cfg.tau_topk_verts);
    auto vs2 = vs_contacts(sel_v2, s1.sdf, cfg, 2);
    out.contacts.insert(out.contacts.end(), vs2.begin(), vs2.end());

    if (cfg.mode == ContactMode::kFull) {
      out.m1 = model1.effective_edge_topk();
      out.m2 = model2.effective_edge_topk();
      const std::vector<T> epens1 = edge_penetrations(pens1, model1.mesh.edges);
      const std::vector<T> epens2 = edge_penetrations(pens2, model2.mesh.edges);
      const SelectedEdges<T> sel_e1 = select_topk_edges(s1.vertices, model1.mesh.edges, epens1,
                                                        out.m1, cfg.tau_topk_edges);
      const SelectedEdges<T> sel_e2 = select_topk_edges(s2.vertices, model2.mesh.edges, epens2,
                                                        out.m2, cfg.tau_topk_edges);
      EeContactBlock<T> ee = ee_contacts(sel_e1, sel_e2, s1.sdf, s2.sdf, cfg);
      out.contacts.insert(out.contacts.end(), ee.contacts.begin(), ee.contacts.end());
      out.ee = std::move(ee.indicators);
    }
  }
  return out;
}

template <class T>
T mean_contact_distance(const ContactManifold<T>& m) {
  T acc = T(0);
  for (const auto& c : m.contacts) acc += c.dist;
  return acc / T(double(m.contacts.size()));
}

template <class T>
T activity_weighted_distance(const ContactManifold<T>& m) {
  T acc = T(0);
  for (const auto& c : m.contacts) acc += c.activity * c.dist;
  return acc;
}

}  // namespace cmg
