#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "graphnls/graph.hpp"

namespace graphnls {

using Index = Eigen::Index;

/// Uniform 1D grid on one edge. Node k sits at coordinate k * spacing and maps
/// to global DOF dofs[k]. Halflines are truncated at `length`.
struct EdgeMesh {
  std::size_t edge = 0;
  double length = 0.0;
  double spacing = 0.0;
  bool halfline = false;
  std::vector<Index> dofs;

  std::size_t nodes() const noexcept { return dofs.size(); }
  std::size_t elements() const noexcept { return dofs.size() - 1; }
  double coordinate(std::size_t k) const noexcept { return static_cast<double>(k) * spacing; }
};

/// Truncation of halflines: a fixed length, or "auto" from the decay rate of
/// the soliton of the given mass and exponent.
struct AutoTruncation {
  double mass = 1.0;
  double p = 4.0;
};
using Truncation = std::variant<double, AutoTruncation>;

/// P1 mesh on a metric graph. Edge-end nodes meeting at a vertex share one
/// global DOF, so every nodal vector is continuous across vertices. The far
/// node of each truncated halfline is a homogeneous Dirichlet DOF.
class Mesh {
 public:
  const MetricGraph& graph() const noexcept { return graph_; }
  double requested_h() const noexcept { return h_; }
  /// Truncation length used for halflines (same for all of them).
  double truncation() const noexcept { return truncation_; }

  std::span<const EdgeMesh> edges() const noexcept { return edges_; }
  const EdgeMesh& edge(std::size_t e) const { return edges_.at(e); }
  Index dofs() const noexcept { return dof_count_; }

  bool dirichlet(Index dof) const { return dirichlet_[static_cast<std::size_t>(dof)] != 0; }
  Index vertex_dof(std::size_t v) const { return vertex_dof_.at(v); }
  /// The vertex a DOF represents, if any.
  std::optional<std::size_t> dof_vertex(Index dof) const;
  double min_spacing() const noexcept;

 private:
  friend std::shared_ptr<const Mesh> build_mesh(const MetricGraph&, double, const Truncation&);
  explicit Mesh(MetricGraph graph) : graph_(std::move(graph)) {}

  MetricGraph graph_;
  double h_ = 0.0;
  double truncation_ = 0.0;
  std::vector<EdgeMesh> edges_;
  Index dof_count_ = 0;
  std::vector<char> dirichlet_;
  std::vector<Index> vertex_dof_;
  std::vector<long> dof_vertex_;
};

/// Throws kInvalidArgument "mesh too coarse" unless h < l/2 for the shortest
/// bounded edge l, and when an explicit truncation is shorter than 10 h.
std::shared_ptr<const Mesh> build_mesh(const MetricGraph& graph, double h, const Truncation& truncation);

template <class T>
class BasicGraphFunction {
 public:
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  BasicGraphFunction() = default;
  explicit BasicGraphFunction(std::shared_ptr<const Mesh> mesh)
      : mesh_(std::move(mesh)), values_(Vector::Zero(mesh_->dofs())) {}
  BasicGraphFunction(std::shared_ptr<const Mesh> mesh, Vector values)
      : mesh_(std::move(mesh)), values_(std::move(values)) {}

  bool empty() const noexcept { return mesh_ == nullptr; }
  const Mesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  const Vector& values() const noexcept { return values_; }
  Vector& values() noexcept { return values_; }

  T at(std::size_t edge, std::size_t node) const { return values_[mesh_->edge(edge).dofs.at(node)]; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  Vector values_;
};

using GraphFunction = BasicGraphFunction<double>;
using ComplexGraphFunction = BasicGraphFunction<std::complex<double>>;

ComplexGraphFunction to_complex(const GraphFunction& u);

/// A closed-form profile placed on [begin, end] of one edge (edge coordinate).
struct Placement {
  std::size_t edge = 0;
  double begin = 0.0;
  double end = 0.0;
  std::function<double(double)> profile;
};

/// Nodal sampling of the placed profiles, zero elsewhere. Placements add up.
GraphFunction interpolate(std::shared_ptr<const Mesh> mesh, std::span<const Placement> placements);

/// Samples f(edge, x) at every node; a vertex takes the value from the first
/// incident edge in input order.
GraphFunction sample(std::shared_ptr<const Mesh> mesh, const std::function<double(std::size_t, double)>& f);

struct ArgMax {
  std::size_t edge = 0;
  double coordinate = 0.0;
  double value = 0.0;
  Index dof = 0;
};

/// Location of max |u|. Ties go to the earliest edge in input order, then the
/// smallest coordinate. Throws kInvalidArgument on the zero function.
ArgMax argmax(const GraphFunction& u);
ArgMax argmax(const ComplexGraphFunction& u);

/// Exact P1 element matrices assembled over the graph. Rows and columns of
/// Dirichlet DOFs are kept; callers mask them.
Eigen::SparseMatrix<double> stiffness_matrix(const Mesh& mesh);
Eigen::SparseMatrix<double> mass_matrix(const Mesh& mesh);
/// Row sums of the mass matrix (Dirichlet DOFs get their row sum too).
Eigen::VectorXd lumped_mass(const Mesh& mesh);

/// Zeroes Dirichlet rows/columns and puts 1 on their diagonal.
void apply_dirichlet_identity(const Mesh& mesh, Eigen::SparseMatrix<double>& a);
template <class T>
void zero_dirichlet(const Mesh& mesh, Eigen::Matrix<T, Eigen::Dynamic, 1>& v) {
  for (Index i = 0; i < mesh.dofs(); ++i) {
    if (mesh.dirichlet(i)) v[i] = T{0};
  }
}

}  // namespace graphnls
