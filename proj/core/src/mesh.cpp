#include "graphnls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "graphnls/error.hpp"
#include "graphnls/soliton.hpp"

namespace graphnls {

std::optional<std::size_t> Mesh::dof_vertex(Index dof) const {
  const long v = dof_vertex_.at(static_cast<std::size_t>(dof));
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

double Mesh::min_spacing() const noexcept {
  double out = std::numeric_limits<double>::infinity();
  for (const EdgeMesh& em : edges_) out = std::min(out, em.spacing);
  return out;
}

std::shared_ptr<const Mesh> build_mesh(const MetricGraph& graph, double h, const Truncation& truncation) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::kInvalidArgument, "mesh spacing must be positive");

  const Classification cls = classify_edges(graph);
  if (cls.shortest_bounded && !(h < 0.5 * *cls.shortest_bounded)) {
    std::ostringstream msg;
    msg << "mesh too coarse: h = " << h << " must be below half the shortest bounded edge (" << *cls.shortest_bounded
        << ")";
    throw Error(ErrorKind::kInvalidArgument, msg.str());
  }

  double length = 0.0;
  if (const double* fixed = std::get_if<double>(&truncation)) {
    length = *fixed;
    if (!(length >= 10.0 * h)) throw Error(ErrorKind::kInvalidArgument, "halfline truncation must be at least 10 h");
  } else {
    const auto& a = std::get<AutoTruncation>(truncation);
    length = auto_truncation_length(a.mass, a.p);
  }

  auto mesh = std::shared_ptr<Mesh>(new Mesh(graph));
  mesh->h_ = h;
  mesh->truncation_ = length;
  mesh->vertex_dof_.assign(graph.vertices().size(), -1);

  Index next = 0;
  auto vertex_dof = [&](std::size_t v) {
    if (mesh->vertex_dof_[v] < 0) {
      mesh->vertex_dof_[v] = next++;
      mesh->dirichlet_.push_back(0);
      mesh->dof_vertex_.push_back(static_cast<long>(v));
    }
    return mesh->vertex_dof_[v];
  };
  auto fresh_dof = [&](bool dirichlet) {
    mesh->dirichlet_.push_back(dirichlet ? 1 : 0);
    mesh->dof_vertex_.push_back(-1);
    return next++;
  };

  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const Edge& edge = graph.edge(e);
    EdgeMesh em;
    em.edge = e;
    em.halfline = edge.halfline();
    em.length = edge.halfline() ? length : edge.length;
    const auto intervals = static_cast<std::size_t>(std::ceil(em.length / h - 1e-9));
    em.spacing = em.length / static_cast<double>(intervals);
    em.dofs.resize(intervals + 1);
    em.dofs[0] = vertex_dof(graph.from_vertex(e));
    for (std::size_t k = 1; k < intervals; ++k) em.dofs[k] = fresh_dof(false);
    em.dofs[intervals] = edge.halfline() ? fresh_dof(true) : vertex_dof(graph.to_vertex(e));
    mesh->edges_.push_back(std::move(em));
  }
  mesh->dof_count_ = next;
  return mesh;
}

ComplexGraphFunction to_complex(const GraphFunction& u) {
  return ComplexGraphFunction(u.mesh_ptr(), u.values().cast<std::complex<double>>());
}

GraphFunction interpolate(std::shared_ptr<const Mesh> mesh, std::span<const Placement> placements) {
  GraphFunction out(mesh);
  const double slack = 1e-12;
  for (const Placement& pl : placements) {
    const EdgeMesh& em = mesh->edge(pl.edge);
    if (pl.begin < -slack * em.length || pl.end > em.length * (1.0 + slack) || pl.begin > pl.end) {
      throw Error(ErrorKind::kInvalidArgument,
                  "profile support exceeds edge '" + mesh->graph().edge(pl.edge).id + "'");
    }
    // Within one placement the ends of a self-loop map to one DOF: write once.
    std::vector<std::pair<Index, double>> writes;
    for (std::size_t k = 0; k < em.nodes(); ++k) {
      const double x = em.coordinate(k);
      if (x < pl.begin - slack || x > pl.end + slack) continue;
      if (mesh->dirichlet(em.dofs[k])) continue;
      writes.emplace_back(em.dofs[k], pl.profile(std::clamp(x, pl.begin, pl.end)));
    }
    std::vector<char> seen(static_cast<std::size_t>(mesh->dofs()), 0);
    for (const auto& [dof, value] : writes) {
      if (seen[static_cast<std::size_t>(dof)]) continue;
      seen[static_cast<std::size_t>(dof)] = 1;
      out.values()[dof] += value;
    }
  }
  return out;
}

GraphFunction sample(std::shared_ptr<const Mesh> mesh, const std::function<double(std::size_t, double)>& f) {
  GraphFunction out(mesh);
  std::vector<char> seen(static_cast<std::size_t>(mesh->dofs()), 0);
  for (const EdgeMesh& em : mesh->edges()) {
    for (std::size_t k = 0; k < em.nodes(); ++k) {
      const Index dof = em.dofs[k];
      if (seen[static_cast<std::size_t>(dof)]) continue;
      seen[static_cast<std::size_t>(dof)] = 1;
      out.values()[dof] = mesh->dirichlet(dof) ? 0.0 : f(em.edge, em.coordinate(k));
    }
  }
  return out;
}

namespace {

template <class T>
ArgMax argmax_impl(const BasicGraphFunction<T>& u) {
  ArgMax best;
  best.value = -1.0;
  for (const EdgeMesh& em : u.mesh().edges()) {
    for (std::size_t k = 0; k < em.nodes(); ++k) {
      const double a = std::abs(u.values()[em.dofs[k]]);
      if (a > best.value) {
        best = ArgMax{em.edge, em.coordinate(k), a, em.dofs[k]};
      }
    }
  }
  if (!(best.value > 0.0)) throw Error(ErrorKind::kInvalidArgument, "argmax of the zero function");
  return best;
}

}  // namespace

ArgMax argmax(const GraphFunction& u) { return argmax_impl(u); }
ArgMax argmax(const ComplexGraphFunction& u) { return argmax_impl(u); }

Eigen::SparseMatrix<double> stiffness_matrix(const Mesh& mesh) {
  std::vector<Eigen::Triplet<double>> t;
  for (const EdgeMesh& em : mesh.edges()) {
    const double k = 1.0 / em.spacing;
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      const Index a = em.dofs[i];
      const Index b = em.dofs[i + 1];
      t.emplace_back(a, a, k);
      t.emplace_back(b, b, k);
      t.emplace_back(a, b, -k);
      t.emplace_back(b, a, -k);
    }
  }
  Eigen::SparseMatrix<double> out(mesh.dofs(), mesh.dofs());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Eigen::SparseMatrix<double> mass_matrix(const Mesh& mesh) {
  std::vector<Eigen::Triplet<double>> t;
  for (const EdgeMesh& em : mesh.edges()) {
    const double d = em.spacing / 3.0;
    const double o = em.spacing / 6.0;
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      const Index a = em.dofs[i];
      const Index b = em.dofs[i + 1];
      t.emplace_back(a, a, d);
      t.emplace_back(b, b, d);
      t.emplace_back(a, b, o);
      t.emplace_back(b, a, o);
    }
  }
  Eigen::SparseMatrix<double> out(mesh.dofs(), mesh.dofs());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Eigen::VectorXd lumped_mass(const Mesh& mesh) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.dofs());
  for (const EdgeMesh& em : mesh.edges()) {
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      out[em.dofs[i]] += 0.5 * em.spacing;
      out[em.dofs[i + 1]] += 0.5 * em.spacing;
    }
  }
  return out;
}

void apply_dirichlet_identity(const Mesh& mesh, Eigen::SparseMatrix<double>& a) {
  for (int col = 0; col < a.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
      if (mesh.dirichlet(it.row()) || mesh.dirichlet(it.col())) {
        it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
      }
    }
  }
  a.prune(0.0);
}

}  // namespace graphnls
