#ifndef QUANTOPOS_OBSERVABLES_HPP
#define QUANTOPOS_OBSERVABLES_HPP

#include <string>
#include <vector>

#include "quantopos/matrix.hpp"

namespace quantopos {

struct Observable {
    std::string label;
    Mat matrix;  // hermitian
};

// The classical observable list O with the assignment a -> a_hat.
struct ObservableSet {
    Eigen::Index dim = 0;
    std::vector<Observable> entries;

    size_t size() const { return entries.size(); }
    size_t index_of(const std::string& label) const;  // throws UnknownLabel
    const Mat& matrix_of(size_t i) const { return entries.at(i).matrix; }
    const std::string& label_of(size_t i) const { return entries.at(i).label; }
};

// A pairwise Lie-commuting subset of O, stored as sorted member indices.
struct CommutativeContext {
    std::vector<size_t> members;

    bool contains(size_t i) const;
    bool subset_of(const CommutativeContext& other) const;
    bool operator==(const CommutativeContext& other) const { return members == other.members; }
};

std::string context_label(const ObservableSet& obs, const CommutativeContext& c);

// Throws NonHermitian (naming the label), ParseError on empty/duplicate input.
void validate_observable_set(const ObservableSet& obs, const Tolerance& tol = {});

// Commutativity through the faithful matrix representation.
bool lie_commutes(const ObservableSet& obs, const std::string& a, const std::string& b,
                  const Tolerance& tol = {});

// All pairwise-commuting subsets (including the empty one), ordered by size
// then lexicographically on labels. Guarded at 16 observables.
std::vector<CommutativeContext> enumerate_commutative_subsets(const ObservableSet& obs,
                                                              const Tolerance& tol = {});

bool context_is_commutative(const ObservableSet& obs, const CommutativeContext& c,
                            const Tolerance& tol = {});

struct FaithfulnessReport {
    // label pairs with a_hat == b_hat
    std::vector<std::pair<std::string, std::string>> hat_collisions;
    // label pairs with e^{ik a_hat} == e^{ik b_hat} but a != b
    std::vector<std::pair<std::string, std::string>> exp_collisions;
    // observables whose eigenvalue gaps are integer multiples of 2*pi/k
    std::vector<std::string> spectral_collisions;

    bool faithful() const { return hat_collisions.empty() && exp_collisions.empty(); }
    bool collision_free() const { return spectral_collisions.empty(); }
};

FaithfulnessReport faithfulness_report(const ObservableSet& obs, double k,
                                       const Tolerance& tol = {});

}  // namespace quantopos

#endif
