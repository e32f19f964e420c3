#include "quantopos/observables.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

namespace quantopos {

size_t ObservableSet::index_of(const std::string& label) const {
    for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].label == label) return i;
    }
    throw UnknownLabel("unknown observable label '" + label + "'");
}

bool CommutativeContext::contains(size_t i) const {
    return std::binary_search(members.begin(), members.end(), i);
}

bool CommutativeContext::subset_of(const CommutativeContext& other) const {
    return std::includes(other.members.begin(), other.members.end(), members.begin(),
                         members.end());
}

std::string context_label(const ObservableSet& obs, const CommutativeContext& c) {
    std::vector<std::string> labels;
    for (size_t i : c.members) labels.push_back(obs.label_of(i));
    std::sort(labels.begin(), labels.end());
    std::string out = "{";
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ",";
        out += labels[i];
    }
    return out + "}";
}

void validate_observable_set(const ObservableSet& obs, const Tolerance& tol) {
    if (obs.dim <= 0) throw ParseError("observable set: dim must be positive");
    if (obs.entries.empty()) throw ParseError("observables must be nonempty");
    std::set<std::string> seen;
    for (const Observable& o : obs.entries) {
        if (!seen.insert(o.label).second) {
            throw ParseError("duplicate observable label '" + o.label + "'");
        }
        if (o.matrix.rows() != obs.dim || o.matrix.cols() != obs.dim) {
            throw DimensionMismatch("observable '" + o.label + "' has wrong shape");
        }
        if (!o.matrix.allFinite()) {
            throw ParseError("observable '" + o.label + "' has non-finite entries");
        }
        if (!is_hermitian(o.matrix, tol)) {
            throw NonHermitian("observable '" + o.label + "' is not hermitian");
        }
    }
}

bool lie_commutes(const ObservableSet& obs, const std::string& a, const std::string& b,
                  const Tolerance& tol) {
    const Mat& ma = obs.matrix_of(obs.index_of(a));
    const Mat& mb = obs.matrix_of(obs.index_of(b));
    double scale = std::max(frobenius(ma), frobenius(mb));
    return frobenius(commutator(ma, mb)) < tol.at(scale);
}

bool context_is_commutative(const ObservableSet& obs, const CommutativeContext& c,
                            const Tolerance& tol) {
    for (size_t i = 0; i < c.members.size(); ++i) {
        for (size_t j = i + 1; j < c.members.size(); ++j) {
            const Mat& a = obs.matrix_of(c.members[i]);
            const Mat& b = obs.matrix_of(c.members[j]);
            if (frobenius(commutator(a, b)) >= tol.at(std::max(frobenius(a), frobenius(b)))) {
                return false;
            }
        }
    }
    return true;
}

std::vector<CommutativeContext> enumerate_commutative_subsets(const ObservableSet& obs,
                                                              const Tolerance& tol) {
    size_t n = obs.size();
    if (n > 16) {
        throw TooManyObservables("enumerate_commutative_subsets: more than 16 observables");
    }

    // Pairwise commutation table; a subset qualifies iff it is a clique.
    std::vector<uint32_t> commutes_with(n, 0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j || lie_commutes(obs, obs.label_of(i), obs.label_of(j), tol)) {
                commutes_with[i] |= (1u << j);
            }
        }
    }

    std::vector<CommutativeContext> out;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool clique = true;
        for (size_t i = 0; i < n && clique; ++i) {
            if ((mask & (1u << i)) && (mask & ~commutes_with[i]) != 0) clique = false;
        }
        if (!clique) continue;
        CommutativeContext c;
        for (size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) c.members.push_back(i);
        }
        out.push_back(std::move(c));
    }

    std::stable_sort(out.begin(), out.end(),
                     [&](const CommutativeContext& a, const CommutativeContext& b) {
                         if (a.members.size() != b.members.size()) {
                             return a.members.size() < b.members.size();
                         }
                         std::vector<std::string> la, lb;
                         for (size_t i : a.members) la.push_back(obs.label_of(i));
                         for (size_t i : b.members) lb.push_back(obs.label_of(i));
                         std::sort(la.begin(), la.end());
                         std::sort(lb.begin(), lb.end());
                         return la < lb;
                     });
    return out;
}

FaithfulnessReport faithfulness_report(const ObservableSet& obs, double k, const Tolerance& tol) {
    FaithfulnessReport report;
    size_t n = obs.size();
    std::vector<Mat> exps;
    exps.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        exps.push_back(hermitian_exp(obs.matrix_of(i), k, tol));
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (approx_equal(obs.matrix_of(i), obs.matrix_of(j), tol)) {
                report.hat_collisions.emplace_back(obs.label_of(i), obs.label_of(j));
            }
            if (approx_equal(exps[i], exps[j], tol)) {
                report.exp_collisions.emplace_back(obs.label_of(i), obs.label_of(j));
            }
        }
    }

    // A gap equal to a nonzero integer multiple of 2*pi/k collapses distinct
    // eigenvalues of a_hat onto the same phase of e^{ik a_hat}.
    const double two_pi = 2.0 * M_PI;
    for (size_t i = 0; i < n; ++i) {
        Eigen::SelfAdjointEigenSolver<Mat> es(obs.matrix_of(i));
        const auto& ev = es.eigenvalues();
        bool collision = false;
        for (Eigen::Index p = 0; p < ev.size() && !collision; ++p) {
            for (Eigen::Index q = p + 1; q < ev.size() && !collision; ++q) {
                double gap = std::abs(ev(q) - ev(p));
                if (gap < tol.at(frobenius(obs.matrix_of(i)))) continue;  // equal eigenvalues
                double ratio = gap * k / two_pi;
                double nearest = std::round(ratio);
                if (std::abs(nearest) >= 0.5 && std::abs(ratio - nearest) < 1e-9 * (1 + std::abs(ratio))) {
                    collision = true;
                }
            }
        }
        if (collision) report.spectral_collisions.push_back(obs.label_of(i));
    }
    return report;
}

}  // namespace quantopos
