#ifndef QUANTOPOS_TESTS_FIXTURES_HPP
#define QUANTOPOS_TESTS_FIXTURES_HPP

#include <cmath>

#include "quantopos/bridge.hpp"
#include "quantopos/geometric.hpp"

namespace quantopos::tests {

inline Mat diag2(Complex a, Complex b) {
    Mat m = zero_matrix(2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

inline ObservableSet f1_observables() {
    ObservableSet obs;
    obs.dim = 2;
    obs.entries.push_back({"z", diag2(M_PI / 2, -M_PI / 2)});
    return obs;
}

inline std::vector<NamedGenerators> f2_extras() { return {{"A_x", {pauli_x()}}}; }

inline ObservableSet f3_observables() {
    ObservableSet obs;
    obs.dim = 2;
    obs.entries.push_back({"x", (M_PI / 2) * pauli_x()});
    obs.entries.push_back({"z", (M_PI / 2) * pauli_z()});
    return obs;
}

inline ObservableSet f4_observables() {
    ObservableSet obs;
    obs.dim = 2;
    obs.entries.push_back({"z", diag2(M_PI / 2, -M_PI / 2)});
    obs.entries.push_back({"z'", diag2(M_PI / 3, -M_PI / 3)});
    return obs;
}

// F2 with its three contexts resolved by name.
struct F2 {
    ObservableSet obs;
    ContextPoset poset;
    FinitePoset view;
    size_t ci = 0, dz = 0, ax = 0;
};

inline size_t index_by_name(const ContextPoset& poset, const std::string& name) {
    for (size_t v = 0; v < poset.size(); ++v) {
        if (poset.names[v] == name) return v;
    }
    throw UnknownObject("fixture: no context named " + name);
}

inline F2 make_f2() {
    F2 f;
    f.obs = f1_observables();
    f.poset = build_context_poset(f.obs, f2_extras());
    f.view = f.poset.poset_view();
    f.ci = index_by_name(f.poset, "CI");
    f.dz = index_by_name(f.poset, "V(z)");
    f.ax = index_by_name(f.poset, "A_x");
    return f;
}

// The presheaf Q2 on F2's poset: one point over CI and V(z), two points over
// A_x, all restrictions constant at p.
inline Presheaf make_q2(const F2& f) {
    Presheaf q;
    q.poset = f.view;
    q.elems.resize(3);
    q.res.assign(3, std::vector<std::vector<uint32_t>>(3));
    q.elems[f.ci] = {"p"};
    q.elems[f.dz] = {"d"};
    q.elems[f.ax] = {"q1", "q2"};
    q.res[f.ci][f.ci] = {0};
    q.res[f.dz][f.dz] = {0};
    q.res[f.ax][f.ax] = {0, 1};
    q.res[f.dz][f.ci] = {0};
    q.res[f.ax][f.ci] = {0, 0};
    return q;
}

// Subobjects S2 = ({p},{d},{}) and T2 = ({p},{},{q1}).
inline Subobject make_s2(const F2& f, const Presheaf& q2) {
    Subobject s;
    s.keep.resize(3);
    for (size_t v = 0; v < 3; ++v) s.keep[v] = Bitset(q2.fiber_size(v));
    s.keep[f.ci].set(0);
    s.keep[f.dz].set(0);
    return s;
}

inline Subobject make_t2(const F2& f, const Presheaf& q2) {
    Subobject s;
    s.keep.resize(3);
    for (size_t v = 0; v < 3; ++v) s.keep[v] = Bitset(q2.fiber_size(v));
    s.keep[f.ci].set(0);
    s.keep[f.ax].set(0);
    return s;
}

// The classical presheaf P2 on the chain {} < {z}: one point at the bottom,
// two at the top, both restricting to it.
inline Presheaf make_p2(const ClassicalPoset& chain) {
    if (chain.po.size() != 2) throw ShapeMismatch("P2 expects the two-object chain");
    size_t bottom = chain.contexts[0].members.empty() ? 0 : 1;
    size_t top = 1 - bottom;
    Presheaf p;
    p.poset = chain.po;
    p.elems.resize(2);
    p.res.assign(2, std::vector<std::vector<uint32_t>>(2));
    p.elems[bottom] = {"u"};
    p.elems[top] = {"v1", "v2"};
    p.res[bottom][bottom] = {0};
    p.res[top][top] = {0, 1};
    p.res[top][bottom] = {0, 0};
    return p;
}

}  // namespace quantopos::tests

#endif
