#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bdiv/green.hpp"
#include "bdiv/model.hpp"

namespace bdiv {

// Cartier data of a b-divisor: a Q-linear combination of named primitive
// classes (for geometric-table lookups), the relative degree over the base,
// and the restriction divisor on the skeleton. The restriction has degree
// equal to the relative degree on every cusp component.
struct CartierData {
    std::string id;
    std::vector<std::pair<std::string, Rat>> components;
    Rat relative_degree;
    GraphDivisor restriction;

    static CartierData primitive(std::string id, Rat relative_degree, GraphDivisor restriction);
    static CartierData combine(std::string id,
                               const std::vector<std::pair<const CartierData*, Rat>>& parts);

    void validate(const MetrizedGraph& skeleton) const;
};

// Symmetric table of geometric intersection numbers between primitive Cartier
// classes; products of combinations extend bilinearly. Entries come from
// surface geometry and are supplied, not computed here.
class GeometricTable {
public:
    void set(const std::string& a, const std::string& b, Rat value);
    bool has(const std::string& a, const std::string& b) const;
    Rat primitive_product(const std::string& a, const std::string& b) const;
    Rat product(const CartierData& c1, const CartierData& c2) const;

private:
    std::map<std::pair<std::string, std::string>, Rat> entries_;
};

// Compactified b-divisor: Cartier data plus a piecewise-quadratic metric part
// on the essential skeleton.
struct CompactifiedBDivisor {
    CartierData cartier;
    PwQuad g;
};

CompactifiedBDivisor scale_bdiv(const CompactifiedBDivisor& b, const Rat& s, std::string id);
CompactifiedBDivisor tensor_bdiv(const CompactifiedBDivisor& a, const CompactifiedBDivisor& b,
                                 std::string id);

// Curvature form delta_{R(D)} - Delta g; mass on each cusp component equals
// the relative degree.
GraphMeasure curvature(const CompactifiedBDivisor& b);

// Positive curvature as a distribution: nonnegative Dirac coefficients and
// densities.
bool is_semipositive(const CompactifiedBDivisor& b);

// Admissible data over a possibly disconnected skeleton: one admissible
// structure per cusp component with a common h.
class AdmissibleFamily {
public:
    AdmissibleFamily(GraphPtr graph, GraphDivisor K, Rat h);

    const GraphPtr& graph() const { return graph_; }
    const Rat& h() const { return h_; }
    const GraphDivisor& K() const { return K_; }
    const GraphMeasure& mu() const { return *mu_; }
    int component_count() const { return static_cast<int>(data_.size()); }
    const AdmissibleData& component_data(int c) const { return data_.at(static_cast<size_t>(c)); }

    // Green's function of one marked point with coefficient one per
    // component, assembled over the whole skeleton.
    PwQuad green_for(const GraphDivisor& marks) const;
    // The diagonal y -> g(y, y), assembled per component.
    PwQuad diagonal() const;
    Rat zhang_constant_on(int component) const;

private:
    GraphPtr graph_;
    GraphDivisor K_;
    Rat h_;
    std::optional<GraphMeasure> mu_;
    std::vector<ComponentView> comps_;
    std::vector<AdmissibleData> data_;
};

// Curvature equals relative_degree times mu, exactly.
bool is_admissible(const CompactifiedBDivisor& b, const AdmissibleFamily& family);

// O(P)_a: requires the restriction to be a single point of coefficient one on
// every cusp; the metric part is the Green's function of those points.
CompactifiedBDivisor admissible_bundle(const AdmissibleFamily& family, CartierData cartier);

// omega_a: requires restriction K and relative degree 2h - 2; the metric part
// is minus the diagonal Green's function.
CompactifiedBDivisor admissible_omega(const AdmissibleFamily& family, CartierData cartier);

// The intersection number D1.D2 + g1(R(D2)) + g2(R(D1)) - int g1 Delta g2.
Rat pair_bdiv(const CompactifiedBDivisor& b1, const CompactifiedBDivisor& b2,
              const GeometricTable& table);

// The same number split as the global Cartier product plus one local
// correction per cusp.
struct DeligneDecomposition {
    Rat global;
    std::vector<std::pair<std::string, Rat>> local_by_cusp;
    Rat total;
};
DeligneDecomposition deligne_decomposition(const CompactifiedBDivisor& b1,
                                           const CompactifiedBDivisor& b2,
                                           const GeometricTable& table);

// Trace of b on a model: the Cartier part plus the vertical divisor with
// coefficient g(y) v(y) at every model vertex.
struct Incarnation {
    CartierData cartier;
    VerticalDivisor vertical;
};
Incarnation incarnation(const CompactifiedBDivisor& b, const ModelGraph& m);

// Intersection number of the traces on one model: the table product plus the
// horizontal crossing terms plus the discrete vertical pairing.
Rat finite_level_pair(const CompactifiedBDivisor& b1, const CompactifiedBDivisor& b2,
                      const ModelGraph& m, const GeometricTable& table);

// finite_level_pair along a chain of blow-ups, with the b-limit and the
// height-jump trajectory stage value - limit.
struct ConvergenceReport {
    std::vector<Rat> stage_values;
    Rat limit;
    std::vector<Rat> differences;
};
ConvergenceReport convergence_experiment(const CompactifiedBDivisor& b1,
                                         const CompactifiedBDivisor& b2,
                                         const std::vector<ModelGraph>& tower,
                                         const GeometricTable& table);

// Discrete Dirichlet pairing of the functions sampled at the vertices of the
// subdivision at `cuts`: sum over edges of (df1)(df2)/length. Refining the
// cuts drives it to the integral of f1 against Delta f2.
Rat sampled_dirichlet(const PwQuad& f1, const PwQuad& f2, const std::vector<GraphPoint>& cuts);

// The compactified b-divisor of a vertex function g on an essential model:
// Cartier part -gamma^{-1}(0, g) with the interpolation of g as metric part.
// Its curvature vanishes identically, so adding it to either side leaves the
// pairing unchanged.
struct PrincipalEmbedding {
    CompactifiedBDivisor bdiv;
    VerticalDivisor vertical;  // -g(y) v(y), the model divisor coefficients
};
PrincipalEmbedding principal_embedding(const ModelGraph& m, const VertexFunction& g,
                                       std::string id);

// Table entries for a principal embedding: against itself, and against
// primitive Cartier data whose restriction is supported on positions of the
// model's vertices.
void register_embedding_products(GeometricTable& table, const ModelGraph& m,
                                 const PrincipalEmbedding& embedding,
                                 std::span<const CartierData> others);

}  // namespace bdiv
