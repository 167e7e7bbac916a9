#pragma once

#include "bdiv/pairing.hpp"

namespace bdiv {

// One-parameter family of elliptic curves over a modular curve, described by
// its cusp widths. d is the degree of the discriminant; deg lambda = d/12.
struct EllipticFamily {
    std::vector<long> cusp_widths;

    static EllipticFamily gamma_n(long n, long p);

    Rat d() const;
    Rat deg_lambda() const { return d() / Rat(12); }
    bool uniform() const;
    long uniform_width() const;  // throws unless uniform
};

// Closed form of the Green's function on a circle of circumference l, in the
// euclidean coordinate: (s-t)^2/2l - |s-t|/2 + l/12.
Rat circle_green(const Rat& l, const Rat& s, const Rat& t);

// The family assembled end to end: minimal model (disjoint width-gons, all
// multiplicities one), admissible data with K = 0 and h = 1, the zero-section
// bundle O(O)_a, the theta bundle 8 O(O)_a + 4 Lambda, and the geometric
// table with O.O = -deg lambda, O.Lambda = deg lambda, Lambda.Lambda = 0.
class EllipticSurface {
public:
    explicit EllipticSurface(EllipticFamily fam);

    const EllipticFamily& family_spec() const { return fam_; }
    const ModelGraph& minimal_model() const { return model_; }
    const AdmissibleFamily& family() const { return family_; }
    const GeometricTable& table() const { return table_; }
    const CompactifiedBDivisor& zero_section_bundle() const { return o_a_; }
    const CompactifiedBDivisor& theta_bundle() const { return theta_; }

    // O(O)_a . O(O)_a; vanishes.
    Rat zero_section_self_intersection() const;

    // Self-intersection of the b-extension of the theta bundle: 16 d / 3.
    Rat b_self_intersection() const;

    // Trace self-intersection of the power-th tensor of the theta bundle on a
    // tower model.
    Rat finite_level_theta(long power, const ModelGraph& m) const;

    // The same on the minimal model; for a width-N family with power N this
    // is 16 N (N^2+1) p / 3.
    Rat minimal_model_self_intersection(long power) const;

    struct HeightJumpReport {
        long power;
        std::vector<Rat> stage_values;  // stage 0 is the minimal model
        Rat stage_limit;                // power^2 . 16 d / 3
        Rat b_limit;                    // 16 d / 3
        std::vector<Rat> differences;   // stage value - stage limit
    };

    // Finite-level values along `depth` rounds of blowing up every boundary
    // double point. Uses power = N for uniform width-N families, 1 otherwise.
    HeightJumpReport height_jump(int depth) const;

private:
    EllipticFamily fam_;
    ModelGraph model_;
    AdmissibleFamily family_;
    GeometricTable table_;
    CompactifiedBDivisor o_a_;
    CompactifiedBDivisor theta_;
};

}  // namespace bdiv
