#include "pla/spin_backend.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace pla {

// ---------------------------------------------------------------- groups

GroupTable GroupTable::cyclic(int n) {
    if (n < 1) throw config_error("cyclic group order must be positive");
    GroupTable g;
    g.name = "z" + std::to_string(n);
    g.order = n;
    g.mul.assign(n, std::vector<int>(n));
    g.inv.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) g.mul[a][b] = (a + b) % n;
        g.inv[a] = (n - a) % n;
    }
    g.verify();
    return g;
}

GroupTable GroupTable::z2xz2() {
    GroupTable g;
    g.name = "z2xz2";
    g.order = 4;
    g.mul.assign(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) g.mul[a][b] = a ^ b;
    g.inv = {0, 1, 2, 3};
    g.verify();
    return g;
}

GroupTable GroupTable::s3() {
    // permutations of {0,1,2}: e, (01), (02), (12), (012), (021)
    static const int perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0},
                                    {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
    auto index_of = [&](const int* p) {
        for (int i = 0; i < 6; ++i)
            if (perms[i][0] == p[0] && perms[i][1] == p[1] && perms[i][2] == p[2]) return i;
        return -1;
    };
    GroupTable g;
    g.name = "s3";
    g.order = 6;
    g.mul.assign(6, std::vector<int>(6));
    g.inv.assign(6, 0);
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            int comp[3];
            for (int x = 0; x < 3; ++x) comp[x] = perms[a][perms[b][x]];
            g.mul[a][b] = index_of(comp);
        }
        int invp[3];
        for (int x = 0; x < 3; ++x) invp[perms[a][x]] = x;
        g.inv[a] = index_of(invp);
    }
    g.verify();
    return g;
}

GroupTable GroupTable::from_stream(std::istream& in, const std::string& name) {
    GroupTable g;
    g.name = name;
    if (!(in >> g.order) || g.order < 1) throw config_error("cayley table: bad order line");
    g.mul.assign(g.order, std::vector<int>(g.order));
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b) {
            int v;
            if (!(in >> v) || v < 1 || v > g.order)
                throw config_error("cayley table: entry out of range");
            g.mul[a][b] = v - 1;
        }
    g.inv.assign(g.order, -1);
    g.verify();
    return g;
}

void GroupTable::verify() const {
    const int n = order;
    // identity: detect it (row a with mul[e][b] = b for all b)
    int e = -1;
    for (int a = 0; a < n; ++a) {
        bool ok = true;
        for (int b = 0; b < n; ++b) ok = ok && mul[a][b] == b && mul[b][a] == b;
        if (ok) { e = a; break; }
    }
    if (e == -1) throw config_error("group table: no identity element");
    const_cast<GroupTable*>(this)->identity = e;
    auto& iv = const_cast<GroupTable*>(this)->inv;
    if (static_cast<int>(iv.size()) != n) iv.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        int found = -1;
        for (int b = 0; b < n; ++b)
            if (mul[a][b] == e && mul[b][a] == e) found = b;
        if (found == -1) throw config_error("group table: missing inverse");
        iv[a] = found;
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
                    throw config_error("group table: associativity fails");
}

bool GroupTable::is_subgroup(const std::vector<int>& elems) const {
    std::set<int> h(elems.begin(), elems.end());
    if (h.empty() || !h.count(identity)) return false;
    for (int a : h) {
        if (a < 0 || a >= order) return false;
        if (!h.count(inv[a])) return false;
        for (int b : h)
            if (!h.count(mul[a][b])) return false;
    }
    return true;
}

// ---------------------------------------------------------------- calibration

std::string SpinWeights::str() const {
    std::ostringstream os;
    os << "shaded:" << a_s << "*chi+" << b_s << "*di+" << e_s << "*de+" << c_s
       << ";unshaded:" << a_u << "*chi+" << b_u << "*di+" << e_u << "*de+" << c_u
       << ";disc:" << g << ";ext:" << g0;
    return os.str();
}

namespace {

// columns: a_s b_s e_s c_s a_u b_u e_u c_u g g0
constexpr int NPAR = 10;

std::vector<mpq_class> stats_row(const Tangle& t) {
    std::vector<mpq_class> row(NPAR, 0);
    for (const auto& r : t.regions()) {
        int chi = 2 - r.circuits;
        int base = r.shaded ? 0 : 4;
        row[base + 0] += chi;
        row[base + 1] += r.d_int();
        row[base + 2] += r.d_ext();
        row[base + 3] += 1;
    }
    for (const auto& c : t.discs()) row[8] += c.n;
    row[9] += t.ext().n;
    return row;
}

Tangle loop_tangle(bool minus) {
    return Tangle(Colour(0, minus), {}, {}, {FaceRef::at(0, 0)}, {});
}

struct Probe {
    std::string name;
    std::vector<mpq_class> row;
    mpq_class target;
};

std::vector<Probe> calibration_probes(const CalibrationOptions& opt) {
    std::vector<Probe> ps;
    auto add = [&](const std::string& n, const Tangle& t, long target) {
        ps.push_back({n, stats_row(t), mpq_class(target)});
    };
    // expected value = (bare state sum) * delta^target
    add("empty-0p", empty_tangle(false), 0);
    add("empty-0m", empty_tangle(true), -2);
    add("loop-0p", loop_tangle(false), -1);
    add("loop-0m", loop_tangle(true), -1);
    add("identity-1", identity_tangle(1), 0);
    add("identity-2", identity_tangle(2), 0);
    add("identity-3", identity_tangle(3), 0);
    add("mult-1-pointwise", multiplication_tangle(1), 0);
    add("mult-2-matrix", multiplication_tangle(2), 0);
    add("jones-el-normalization", jones_tangle(2), -1 + opt.jones_target_shift);
    add("trace-normalization", trace_plus_tangle(1), -1);
    // sphericality: homogeneous difference of the two closures
    {
        auto a = stats_row(trace_minus_tangle(1)), b = stats_row(trace_plus_tangle(1));
        for (int i = 0; i < NPAR; ++i) a[i] -= b[i];
        ps.push_back({"sphericality", a, mpq_class(0)});
    }
    return ps;
}

} // namespace

SpinWeights solve_probe_system(const CalibrationOptions& opt) {
    auto probes = calibration_probes(opt);
    const size_t rows = probes.size();
    std::vector<std::vector<mpq_class>> m(rows, std::vector<mpq_class>(NPAR + 1, 0));
    for (size_t i = 0; i < rows; ++i) {
        for (int j = 0; j < NPAR; ++j) m[i][j] = probes[i].row[j];
        m[i][NPAR] = probes[i].target;
    }
    // exact gaussian elimination
    size_t rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < NPAR && rank < rows; ++col) {
        size_t p = rank;
        while (p < rows && m[p][col] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[rank]);
        mpq_class pv = m[rank][col];
        for (auto& x : m[rank]) x /= pv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            mpq_class f = m[r][col];
            for (int j = col; j <= NPAR; ++j) m[r][j] -= f * m[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (size_t r = rank; r < rows; ++r)
        if (m[r][NPAR] != 0) {
            std::string bad;
            for (size_t i = 0; i < probes.size(); ++i) bad += probes[i].name + " ";
            throw config_error("spin calibration failed: inconsistent constraint set {" + bad + "}");
        }

    // solution space must be exactly the bookkeeping gauge:
    //   (b_s += t, g -= t) and (b_u += u, g -= u) leave every evaluation fixed
    if (NPAR - static_cast<int>(rank) != 2)
        throw config_error("spin calibration failed: convention not pinned uniquely "
                           "(solution space dimension " +
                           std::to_string(NPAR - rank) + ", expected the 2 gauge directions)");
    auto in_nullspace = [&](const std::vector<mpq_class>& v) {
        for (size_t r = 0; r < rank; ++r) {
            mpq_class acc(0);
            for (int j = 0; j < NPAR; ++j) acc += m[r][j] * v[j];
            if (acc != 0) return false;
        }
        return true;
    };
    std::vector<mpq_class> gauge1(NPAR, 0), gauge2(NPAR, 0);
    gauge1[1] = 1; gauge1[8] = -1; // b_s up, g down
    gauge2[5] = 1; gauge2[8] = -1; // b_u up, g down
    if (!in_nullspace(gauge1) || !in_nullspace(gauge2))
        throw config_error("spin calibration failed: unexpected non-gauge freedom");

    // particular solution with the free columns set to zero
    std::vector<mpq_class> sol(NPAR, 0);
    for (size_t r = 0; r < rank; ++r) sol[pivot_col[r]] = m[r][NPAR];
    // canonical gauge: b_s = b_u = 0
    for (int i = 0; i < NPAR; ++i) sol[i] -= sol[1] * gauge1[i] + sol[5] * gauge2[i];
    // (the two gauge moves also cancel each other's effect on g when applied at once)
    SpinWeights w;
    w.a_s = sol[0]; w.b_s = sol[1]; w.e_s = sol[2]; w.c_s = sol[3];
    w.a_u = sol[4]; w.b_u = sol[5]; w.e_u = sol[6]; w.c_u = sol[7];
    w.g = sol[8]; w.g0 = sol[9];
    return w;
}

SpinWeights calibrate_spin_convention(int k, const CalibrationOptions& opt) {
    SpinWeights w = solve_probe_system(opt);
    // value-level verification on a probe backend; a consistent-but-wrong target
    // (the negative control) survives the linear solve and dies here
    FieldPtr f = Field::qtower({k});
    SpinBackend probe(GroupTable::cyclic(k), f, w, SpinBackend::unchecked_t{});
    probe.post_calibration_checks();
    return w;
}

// ---------------------------------------------------------------- backend

namespace {

// contraction factor over shaded-region variables, domain k each
struct Factor {
    std::vector<int> scope; // sorted region ids
    std::vector<Scalar> table;
};

} // namespace

SpinBackend::SpinBackend(GroupTable g, FieldPtr field, const CalibrationOptions& opt)
    : group_(std::move(g)), field_(std::move(field)), k_(group_.order) {
    if (k_ < 2) throw config_error("spin backend needs at least two spins");
    delta_ = Scalar::sqrt_rational(mpq_class(k_), field_);
    weights_ = calibrate_spin_convention(k_, opt);
    post_calibration_checks();
}

SpinBackend::SpinBackend(GroupTable g, FieldPtr field, const SpinWeights& w, unchecked_t)
    : group_(std::move(g)), field_(std::move(field)), k_(group_.order),
      delta_(Scalar::sqrt_rational(mpq_class(k_), field_)), weights_(w) {}

std::string SpinBackend::name() const { return "spin(" + group_.name + ")"; }

size_t SpinBackend::dimension(Colour c) const {
    if (c.n == 0) return 1;
    size_t d = 1;
    for (int i = 0; i < c.n; ++i) d *= k_;
    return d;
}

Element SpinBackend::evaluate_connected(const Tangle& t,
                                        const std::vector<Element>& inputs) const {
    // global delta power: region weights are state-independent
    const auto& regions = t.regions();
    mpq_class expo = weights_.g0 * t.ext().n;
    for (const auto& c : t.discs()) expo += weights_.g * c.n;
    for (const auto& r : regions) {
        mpq_class chi = 2 - r.circuits;
        if (r.shaded)
            expo += weights_.a_s * chi + weights_.b_s * r.d_int() + weights_.e_s * r.d_ext() +
                    weights_.c_s;
        else
            expo += weights_.a_u * chi + weights_.b_u * r.d_int() + weights_.e_u * r.d_ext() +
                    weights_.c_u;
    }
    if (expo.get_den() != 1)
        throw check_error("spin evaluate: fractional total delta power " + expo.get_str());
    Scalar global = delta_.pow(expo.get_num().get_si());

    // variables: shaded regions; pinned ones carry the output index
    std::vector<int> pinned; // region ids, in slot order of the external disc
    std::set<int> pinned_set;
    const int n0 = t.ext().n;
    std::vector<int> ext_slot_region(n0 + 1, -1);
    for (int m = 1; m <= n0; ++m) {
        int r = t.slot_region(0, m);
        ext_slot_region[m] = r;
        if (!pinned_set.count(r)) {
            pinned_set.insert(r);
            pinned.push_back(r);
        }
    }

    // factors from the internal discs
    std::vector<Factor> factors;
    for (int d = 1; d <= t.n_discs(); ++d) {
        int nd = t.disc_colour(d).n;
        std::vector<int> slot_region(nd + 1, -1);
        std::vector<int> scope;
        for (int m = 1; m <= nd; ++m) {
            slot_region[m] = t.slot_region(d, m);
            scope.push_back(slot_region[m]);
        }
        std::sort(scope.begin(), scope.end());
        scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
        Factor f;
        f.scope = scope;
        size_t tsize = 1;
        for (size_t i = 0; i < scope.size(); ++i) tsize *= k_;
        f.table.assign(tsize, Scalar::zero(field_));
        std::vector<int> assign(scope.size(), 0);
        while (true) {
            // input coordinate at the tuple induced by the scope assignment
            size_t coord = 0, stride = 1;
            for (int m = 1; m <= nd; ++m) {
                int r = slot_region[m];
                size_t pos = std::lower_bound(scope.begin(), scope.end(), r) - scope.begin();
                coord += stride * assign[pos];
                stride *= k_;
            }
            size_t ti = 0;
            size_t st = 1;
            for (size_t i = 0; i < scope.size(); ++i) {
                ti += st * assign[i];
                st *= k_;
            }
            f.table[ti] = inputs[d - 1].coords[coord];
            size_t kk = 0;
            while (kk < assign.size() && ++assign[kk] == k_) assign[kk++] = 0;
            if (kk == assign.size() || assign.empty()) break;
        }
        factors.push_back(std::move(f));
    }

    // every free shaded region not touched by a factor sums to a bare k
    Scalar bare = Scalar::one(field_);
    std::set<int> in_scope;
    for (const auto& f : factors)
        for (int v : f.scope) in_scope.insert(v);
    std::vector<int> free_vars;
    for (size_t r = 0; r < regions.size(); ++r) {
        if (!regions[r].shaded || pinned_set.count(static_cast<int>(r))) continue;
        if (in_scope.count(static_cast<int>(r))) free_vars.push_back(static_cast<int>(r));
        else bare = bare * Scalar::integer(k_, field_);
    }

    // greedy variable elimination
    auto merge_scopes = [&](const std::vector<const Factor*>& fs, int drop) {
        std::set<int> s;
        for (const auto* f : fs)
            for (int v : f->scope) s.insert(v);
        s.erase(drop);
        return std::vector<int>(s.begin(), s.end());
    };
    std::vector<int> order = free_vars;
    while (!order.empty()) {
        // choose the variable whose elimination yields the smallest merged scope
        size_t best = 0;
        size_t best_size = SIZE_MAX;
        for (size_t i = 0; i < order.size(); ++i) {
            std::vector<const Factor*> fs;
            for (const auto& f : factors)
                if (std::binary_search(f.scope.begin(), f.scope.end(), order[i]))
                    fs.push_back(&f);
            size_t sz = merge_scopes(fs, order[i]).size();
            if (sz < best_size) {
                best_size = sz;
                best = i;
            }
        }
        int v = order[best];
        order.erase(order.begin() + best);

        std::vector<Factor> keep;
        std::vector<const Factor*> merge;
        for (auto& f : factors) {
            if (std::binary_search(f.scope.begin(), f.scope.end(), v)) merge.push_back(&f);
            else keep.push_back(f);
        }
        if (merge.empty()) {
            bare = bare * Scalar::integer(k_, field_);
            factors = std::move(keep);
            continue;
        }
        std::vector<int> ns = merge_scopes(merge, v);
        Factor nf;
        nf.scope = ns;
        size_t tsize = 1;
        for (size_t i = 0; i < ns.size(); ++i) tsize *= k_;
        nf.table.assign(tsize, Scalar::zero(field_));
        std::vector<int> assign(ns.size(), 0);
        while (true) {
            Scalar acc = Scalar::zero(field_);
            for (int sv = 0; sv < k_; ++sv) {
                Scalar prod = Scalar::one(field_);
                bool zero = false;
                for (const auto* f : merge) {
                    size_t ti = 0, st = 1;
                    for (int w : f->scope) {
                        int val;
                        if (w == v) val = sv;
                        else {
                            size_t pos = std::lower_bound(ns.begin(), ns.end(), w) - ns.begin();
                            val = assign[pos];
                        }
                        ti += st * val;
                        st *= k_;
                    }
                    const Scalar& cell = f->table[ti];
                    if (cell.is_zero()) { zero = true; break; }
                    prod = prod * cell;
                }
                if (!zero) acc += prod;
            }
            size_t ti = 0, st = 1;
            for (size_t i = 0; i < ns.size(); ++i) {
                ti += st * assign[i];
                st *= k_;
            }
            nf.table[ti] = acc;
            size_t kk = 0;
            while (kk < assign.size() && ++assign[kk] == k_) assign[kk++] = 0;
            if (kk == assign.size() || assign.empty()) break;
        }
        keep.push_back(std::move(nf));
        factors = std::move(keep);
    }

    // assemble the output over the pinned assignments
    Element out = zero(t.ext());
    std::vector<int> assign(pinned.size(), 0);
    while (true) {
        Scalar val = bare;
        bool zero = false;
        for (const auto& f : factors) {
            size_t ti = 0, st = 1;
            for (int w : f.scope) {
                int val_w = 0;
                for (size_t i = 0; i < pinned.size(); ++i)
                    if (pinned[i] == w) val_w = assign[i];
                ti += st * val_w;
                st *= k_;
            }
            const Scalar& cell = f.table[ti];
            if (cell.is_zero()) { zero = true; break; }
            val = val * cell;
        }
        if (!zero) {
            size_t coord = 0, stride = 1;
            for (int m = 1; m <= n0; ++m) {
                int r = ext_slot_region[m];
                int v = 0;
                for (size_t i = 0; i < pinned.size(); ++i)
                    if (pinned[i] == r) v = assign[i];
                coord += stride * v;
                stride *= k_;
            }
            out.coords[coord] += val * global;
        }
        size_t kk = 0;
        while (kk < assign.size() && ++assign[kk] == k_) assign[kk++] = 0;
        if (kk == assign.size() || assign.empty()) break;
    }
    return out;
}

Element SpinBackend::star(const Element& x) const {
    if (x.colour.n == 0) return x;
    int n = x.colour.n;
    Element out = zero(x.colour);
    size_t dim = dimension(x.colour);
    for (size_t i = 0; i < dim; ++i) {
        if (x.coords[i].is_zero()) continue;
        // reverse the spin tuple
        size_t rest = i, j = 0;
        std::vector<int> tup(n);
        for (int m = 0; m < n; ++m) {
            tup[m] = static_cast<int>(rest % k_);
            rest /= k_;
        }
        size_t stride = 1;
        for (int m = n - 1; m >= 0; --m) {
            j += stride * tup[m];
            stride *= k_;
        }
        out.coords[j] += x.coords[i];
    }
    return out;
}

Scalar SpinBackend::matrix_entry(const Element& x, int i, int j) const {
    if (x.colour.n != 2) throw config_error("matrix_entry: 2-boxes only");
    return x.coords[j + k_ * i];
}

Element SpinBackend::from_matrix(const std::vector<std::vector<Scalar>>& m) const {
    Element out = zero(Colour(2));
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j) out.coords[j + k_ * i] = m[i][j];
    return out;
}

Element SpinBackend::subgroup_projection_candidate(const std::vector<int>& subgroup) const {
    if (!group_.is_subgroup(subgroup))
        throw config_error("subgroup_projection_candidate: not a subgroup");
    Element out = zero(Colour(2));
    Scalar w = Scalar::rational(1, static_cast<long>(subgroup.size()), field_);
    std::set<int> h(subgroup.begin(), subgroup.end());
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
            if (h.count(group_.mul[i][group_.inv[j]])) out.coords[j + k_ * i] = w;
    return out;
}

void SpinBackend::post_calibration_checks() const {
    auto fail = [&](const std::string& what) {
        throw config_error("spin calibration verification failed: " + what +
                           " [rule " + weights_.str() + "]");
    };
    // closed circles, nested up to depth 3, both shadings at depth 1
    if (!(evaluate(Tangle(Colour(0), {}, {}, {FaceRef::at(0, 0)}, {}), {}).coords[0] == delta_))
        fail("loop in an unshaded region");
    if (!(evaluate(Tangle(Colour(0, true), {}, {}, {FaceRef::at(0, 0)}, {}), {}).coords[0] ==
          delta_))
        fail("loop in a shaded region");
    {
        Tangle two(Colour(0), {}, {}, {FaceRef::at(0, 0), FaceRef::loop(0, 1)}, {});
        Tangle three(Colour(0), {}, {},
                     {FaceRef::at(0, 0), FaceRef::loop(0, 1), FaceRef::loop(1, 1)}, {});
        if (!(evaluate(two, {}).coords[0] == delta_.pow(2))) fail("nested circles (2)");
        if (!(evaluate(three, {}).coords[0] == delta_.pow(3))) fail("nested circles (3)");
    }
    // identity action and trace normalization
    for (int n = 1; n <= 2; ++n) {
        Element one = unit(n);
        for (size_t i = 0; i < dimension(Colour(n)); ++i) {
            Element e = basis_element(Colour(n), i);
            if (!(evaluate(identity_tangle(n), {e}) == e)) fail("identity action");
        }
        if (!trace(one).is_one()) fail("trace normalization");
    }
    // P1 multiplication is pointwise
    for (int a = 0; a < k_; ++a)
        for (int b = 0; b < k_; ++b) {
            Element ea = basis_element(Colour(1), a), eb = basis_element(Colour(1), b);
            Element prod = multiply(ea, eb);
            Element want = zero(Colour(1));
            if (a == b) want.coords[a] = Scalar::one(field_);
            if (!(prod == want)) fail("pointwise multiplication on P1");
        }
    // P2 multiplication is matrix multiplication in the spin-pair basis
    {
        auto unit_m = [&](int i, int j) {
            Element e = zero(Colour(2));
            e.coords[j + k_ * i] = Scalar::one(field_);
            return e;
        };
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        Element prod = multiply(unit_m(i, j), unit_m(a, b));
                        Element want = zero(Colour(2));
                        if (j == a) want.coords[b + k_ * i] = Scalar::one(field_);
                        if (!(prod == want)) fail("matrix multiplication on P2");
                    }
    }
    // jones element: projection with trace delta^(-2)
    {
        Element ej = evaluate(jones_tangle(2), {});
        Element e = el_scale(delta_.inv(), ej);
        if (!(multiply(e, e) == e)) fail("jones element idempotency");
        if (!(trace(e) == delta_.pow(-2))) fail("jones element trace");
    }
    // sphericality on P1
    for (int s = 0; s < k_; ++s) {
        Element e = basis_element(Colour(1), s);
        if (!(trace(e) == trace_left(e))) fail("sphericality");
    }
}

BackendPtr spin_backend(const GroupTable& g, const FieldPtr& field,
                        const CalibrationOptions& opt) {
    return std::make_shared<SpinBackend>(g, field, opt);
}

} // namespace pla
