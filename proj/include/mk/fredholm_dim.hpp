#pragma once

// Integer bookkeeping for Fredholm indices, moduli dimensions, bubble-tree
// dimensions and the energy bound. Every dimension is exact integer
// arithmetic and comes with a ledger of the terms that produced it.

#include <cstddef>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mk {

struct CRProblemData {
    int n;    // dim W = 2n
    int chi;  // 1 for the disk, 2 for the sphere
    int mu;   // Maslov index (disk) or 2 c_1 (sphere)
};

class DimensionLedger {
public:
    struct Term {
        std::string label;
        long value;
    };

    DimensionLedger& add(std::string label, long value) {
        terms_.push_back({std::move(label), value});
        total_ += value;
        return *this;
    }

    const std::vector<Term>& terms() const { return terms_; }
    long total() const { return total_; }

private:
    std::vector<Term> terms_;
    long total_ = 0;
};

/// n * chi + mu.
inline int fredholm_index(const CRProblemData& d) {
    if (d.n < 1) throw std::invalid_argument("fredholm_index: n must be >= 1");
    if (d.chi != 1 && d.chi != 2) throw std::invalid_argument("fredholm_index: only disks (chi=1) and spheres (chi=2)");
    return d.n * d.chi + d.mu;
}

inline constexpr int disk_automorphisms = 3;
inline constexpr int sphere_automorphisms = 6;

inline DimensionLedger moduli_dimension(int ind, int marked_interior, int marked_boundary, int aut_dim) {
    if (marked_interior < 0 || marked_boundary < 0) throw std::invalid_argument("moduli_dimension: negative marked point count");
    if (aut_dim != disk_automorphisms && aut_dim != sphere_automorphisms)
        throw std::invalid_argument("moduli_dimension: automorphism dimension must be 3 (disk) or 6 (sphere)");
    if (aut_dim == sphere_automorphisms && marked_boundary != 0)
        throw std::invalid_argument("moduli_dimension: spheres have no boundary marked points");
    DimensionLedger l;
    l.add("fredholm index", ind);
    if (marked_interior) l.add("interior marked points", 2L * marked_interior);
    if (marked_boundary) l.add("boundary marked points", marked_boundary);
    l.add("automorphisms", -aut_dim);
    return l;
}

/// A simple bubble tree: one disk u_0 and k simple spheres B_1..B_k, the
/// limit spheres being m_j-fold covers A_j = m_j B_{i_j}.
struct BubbleTreeData {
    int n = 1;
    int k = 0;
    long c1A_total = 0;  // sum_j m_j c_1(B_{i_j})
    long c1B_total = 0;  // sum_i c_1(B_i)
    std::vector<int> multiplicities;

    struct Cover {
        int sphere;        // index into sphere_c1
        int multiplicity;  // m_j >= 1
    };

    /// Builds the totals from per-sphere first Chern numbers and the list of
    /// covers of the original tree. Every simple sphere must be covered.
    static BubbleTreeData from_spheres(int n, const std::vector<long>& sphere_c1, const std::vector<Cover>& covers) {
        BubbleTreeData b;
        b.n = n;
        b.k = static_cast<int>(sphere_c1.size());
        std::vector<bool> covered(sphere_c1.size(), false);
        for (long c : sphere_c1) {
            if (c < 0) throw std::domain_error("BubbleTreeData: negative c_1 on a holomorphic sphere (not semipositive)");
            b.c1B_total += c;
        }
        for (const auto& cv : covers) {
            if (cv.sphere < 0 || cv.sphere >= b.k) throw std::invalid_argument("BubbleTreeData: cover of unknown sphere");
            if (cv.multiplicity < 1) throw std::invalid_argument("BubbleTreeData: multiplicity must be >= 1");
            covered[static_cast<std::size_t>(cv.sphere)] = true;
            b.c1A_total += cv.multiplicity * sphere_c1[static_cast<std::size_t>(cv.sphere)];
            b.multiplicities.push_back(cv.multiplicity);
        }
        for (bool c : covered)
            if (!c) throw std::invalid_argument("BubbleTreeData: simple sphere not covered by any limit sphere");
        return b;
    }

    /// Mirrors the semipositivity argument: c_1(B) - c_1(A) = sum n_j c_1(B_j)
    /// with non-positive n_j, so the difference cannot be positive.
    void validate() const {
        if (n < 1) throw std::invalid_argument("BubbleTreeData: n must be >= 1");
        if (k < 0) throw std::invalid_argument("BubbleTreeData: negative sphere count");
        for (int m : multiplicities)
            if (m < 1) throw std::invalid_argument("BubbleTreeData: multiplicity must be >= 1");
        if (static_cast<int>(multiplicities.size()) < k)
            throw std::invalid_argument("BubbleTreeData: fewer limit spheres than simple spheres");
        if (k == 0 && (c1A_total != 0 || c1B_total != 0))
            throw std::invalid_argument("BubbleTreeData: Chern numbers given for a tree without spheres");
        if (c1B_total < 0) throw std::domain_error("BubbleTreeData: semipositivity witness violated (c1(B) < 0)");
        if (c1B_total - c1A_total > 0) throw std::domain_error("BubbleTreeData: semipositivity witness violated (c1(B) > c1(A))");
    }
};

inline long bubble_tree_closed_form(const BubbleTreeData& b, bool marked_boundary) {
    return b.n + 1 - 2L * b.k + 2 * (b.c1B_total - b.c1A_total) - (marked_boundary ? 1 : 0);
}

inline DimensionLedger bubble_tree_dimension(const BubbleTreeData& b, bool marked_boundary) {
    b.validate();
    const long n = b.n, k = b.k;
    // The tree glues to a disk of Maslov index 2: 2 = mu(u_0) + 2 c_1(A).
    const long mu_u0 = 2 - 2 * b.c1A_total;
    DimensionLedger l;
    l.add("disk u0: n + mu(u0)", n + mu_u0);
    l.add("simple spheres: sum 2(n + c1(B_j))", 2 * n * k + 2 * b.c1B_total);
    l.add("nodal points Z(2k)", 4 * k);
    l.add("diagonal constraint", -2 * n * k);
    l.add(marked_boundary ? "boundary marked point" : "interior marked point", marked_boundary ? 1 : 2);
    l.add("automorphisms", -(6 * k + 3));
    return l;
}

inline double energy_bound(double f_max) {
    if (!(f_max >= 0.0)) throw std::invalid_argument("energy_bound: f_max must be non-negative");
    return 2.0 * std::numbers::pi * f_max;
}

}  // namespace mk
