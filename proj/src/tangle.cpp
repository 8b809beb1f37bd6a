#include "pla/tangle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace pla {

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) {
            p[x] = p[p[x]];
            x = p[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a < b) std::swap(a, b); // keep smaller root, deterministic
        p[a] = b;
        return true;
    }
};

bool corner_shaded(const Colour& c, int interval) {
    if (c.n == 0) return c.minus;
    return interval % 2 == 1;
}

} // namespace

int Region::d_ext() const {
    int k = 0;
    for (const auto& c : corners)
        if (c.disc == 0) ++k;
    return k;
}

int Region::d_int() const {
    int k = 0;
    for (const auto& c : corners)
        if (c.disc != 0) ++k;
    return k;
}

// ---------------------------------------------------------------- Tangle

Tangle::Tangle(Colour ext, std::vector<Colour> discs,
               const std::vector<std::pair<Dart, Dart>>& strings,
               std::vector<FaceRef> loop_ambients,
               std::vector<std::pair<FaceRef, FaceRef>> island_merges)
    : ext_(ext), discs_(std::move(discs)), loop_ambients_(std::move(loop_ambients)),
      island_merges_(std::move(island_merges)) {
    for (const auto& c : discs_)
        if (c.n < 1) throw tangle_error("internal discs must have colour >= 1");
    offset_.assign(n_discs() + 2, 0);
    offset_[1] = ext_.points();
    for (int d = 1; d <= n_discs(); ++d) offset_[d + 1] = offset_[d] + discs_[d - 1].points();
    int total = offset_[n_discs() + 1];
    pair_.assign(total, -1);
    for (const auto& [a, b] : strings) {
        if (a.disc < 0 || a.disc > n_discs() || b.disc < 0 || b.disc > n_discs())
            throw tangle_error("string endpoint on a nonexistent disc");
        if (a.point < 1 || a.point > disc_colour(a.disc).points() || b.point < 1 ||
            b.point > disc_colour(b.disc).points())
            throw tangle_error("string endpoint out of range");
        int fa = flat(a), fb = flat(b);
        if (fa == fb) throw tangle_error("string with both ends at one point");
        if (pair_[fa] != -1 || pair_[fb] != -1) throw tangle_error("marked point used twice");
        pair_[fa] = fb;
        pair_[fb] = fa;
    }
    for (int f = 0; f < total; ++f)
        if (pair_[f] == -1) throw tangle_error("marked point not covered by a string");
    validate();
}

Dart Tangle::undart(int f) const {
    int d = 0;
    while (offset_[d + 1] <= f) ++d;
    return Dart{d, f - offset_[d] + 1};
}

Dart Tangle::partner(Dart d) const { return undart(pair_[flat(d)]); }

std::vector<std::pair<Dart, Dart>> Tangle::strings() const {
    std::vector<std::pair<Dart, Dart>> out;
    for (int f = 0; f < static_cast<int>(pair_.size()); ++f)
        if (pair_[f] > f) out.push_back({undart(f), undart(pair_[f])});
    return out;
}

int Tangle::n_strings() const { return static_cast<int>(pair_.size()) / 2; }

int Tangle::face_of(const FaceRef& ref) const {
    if (ref.kind == FaceRef::Kind::corner) {
        auto it = corner_face_.find(Corner{ref.a, ref.b});
        if (it == corner_face_.end()) throw tangle_error("face reference to a nonexistent corner");
        return it->second;
    }
    if (ref.a < 0 || ref.a >= n_loops() || ref.b < 0 || ref.b > 1)
        throw tangle_error("face reference to a nonexistent loop side");
    return loop_face_[ref.a][ref.b];
}

void Tangle::validate() {
    const int total = static_cast<int>(pair_.size());
    const int b = n_discs();

    // dart components over discs
    UnionFind comp(b + 1);
    for (int f = 0; f < total; ++f) comp.unite(undart(f).disc, undart(pair_[f]).disc);

    // faces: orbits of sigma(alpha(.)) where sigma steps to the next point in
    // rotation (= numbering) order around the disc
    auto sigma = [&](int f) {
        Dart d = undart(f);
        int pts = disc_colour(d.disc).points();
        d.point = d.point % pts + 1;
        return flat(d);
    };
    faces_.clear();
    corner_face_.clear();
    std::vector<int> face_of_dart(total, -1);
    for (int f0 = 0; f0 < total; ++f0) {
        if (face_of_dart[f0] != -1) continue;
        Face face;
        int cur = f0;
        do {
            face_of_dart[cur] = static_cast<int>(faces_.size());
            face.darts.push_back(cur);
            Dart p = undart(pair_[cur]);
            int pts = disc_colour(p.disc).points();
            face.corners.push_back(Corner{p.disc, p.point % pts});
            cur = sigma(pair_[cur]);
        } while (cur != f0);
        std::sort(face.corners.begin(), face.corners.end());
        face.component = comp.find(undart(f0).disc);
        faces_.push_back(std::move(face));
    }
    // isolated colour-0 discs contribute a virtual face (only the external disc
    // can have colour 0)
    if (ext_.n == 0) {
        Face face;
        face.corners.push_back(Corner{0, 0});
        face.component = comp.find(0);
        faces_.push_back(std::move(face));
    }
    int n_disc_faces = static_cast<int>(faces_.size());
    for (int i = 0; i < n_disc_faces; ++i)
        for (const auto& c : faces_[i].corners) {
            if (corner_face_.count(c)) throw tangle_error("corner on two faces (broken map)");
            corner_face_[c] = i;
        }

    // per-component Euler characteristic (genus-0 certificate)
    {
        std::map<int, std::array<int, 3>> vef; // component -> V, E, F
        for (int d = 0; d <= b; ++d) vef[comp.find(d)][0]++;
        for (int f = 0; f < total; ++f)
            if (pair_[f] > f) vef[comp.find(undart(f).disc)][1]++;
        for (int i = 0; i < n_disc_faces; ++i) vef[faces_[i].component][2]++;
        for (const auto& [c, v] : vef)
            if (v[0] - v[1] + v[2] != 2)
                throw tangle_error("genus error: component fails Euler characteristic 2");
    }

    // two faces per free loop
    loop_face_.clear();
    for (int l = 0; l < n_loops(); ++l) {
        int base = static_cast<int>(faces_.size());
        faces_.push_back(Face{{}, {}, -1});
        faces_.push_back(Face{{}, {}, -1});
        loop_face_.push_back({base, base + 1});
    }

    // regions: faces merged by loop and island placements
    UnionFind reg(faces_.size());
    for (int l = 0; l < n_loops(); ++l) reg.unite(loop_face_[l][0], face_of(loop_ambients_[l]));
    for (const auto& [f1, f2] : island_merges_) reg.unite(face_of(f1), face_of(f2));

    std::map<int, std::vector<int>> reg_faces;
    for (int i = 0; i < static_cast<int>(faces_.size()); ++i) reg_faces[reg.find(i)].push_back(i);

    struct Tok {
        int kind, a, b;
        bool operator<(const Tok& o) const { return std::tie(kind, a, b) < std::tie(o.kind, o.a, o.b); }
    };
    std::vector<std::pair<Tok, int>> order; // min token -> class root
    for (const auto& [root, members] : reg_faces) {
        Tok best{2, 0, 0};
        bool have = false;
        for (int i : members) {
            if (i < n_disc_faces) {
                for (const auto& c : faces_[i].corners) {
                    Tok t{0, c.disc, c.interval};
                    if (!have || t < best) { best = t; have = true; }
                }
            } else {
                int l = (i - n_disc_faces) / 2, s = (i - n_disc_faces) % 2;
                Tok t{1, l, s};
                if (!have || t < best) { best = t; have = true; }
            }
        }
        if (!have) throw tangle_error("region without any identifying token");
        order.push_back({best, root});
    }
    std::sort(order.begin(), order.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    regions_.clear();
    corner_region_.clear();
    loop_region_.assign(n_loops(), {-1, -1});
    std::map<int, int> root_to_region;
    for (const auto& [tok, root] : order) {
        (void)tok;
        Region r;
        r.circuits = static_cast<int>(reg_faces[root].size());
        for (int i : reg_faces[root]) {
            if (i < n_disc_faces) {
                for (const auto& c : faces_[i].corners) r.corners.push_back(c);
            } else {
                int l = (i - n_disc_faces) / 2, s = (i - n_disc_faces) % 2;
                r.loop_sides.push_back({l, s});
            }
        }
        std::sort(r.corners.begin(), r.corners.end());
        std::sort(r.loop_sides.begin(), r.loop_sides.end());
        int id = static_cast<int>(regions_.size());
        root_to_region[root] = id;
        for (const auto& c : r.corners) corner_region_[c] = id;
        for (const auto& [l, s] : r.loop_sides) loop_region_[l][s] = id;
        regions_.push_back(std::move(r));
    }

    // global Euler identity for the full placed picture:
    // (b+1) + sum_R (2 - circuits(R)) - n_strings == 2
    {
        int lhs = b + 1 - n_strings();
        for (const auto& r : regions_) lhs += 2 - r.circuits;
        if (lhs != 2) throw tangle_error("genus error: placement data fails the global Euler identity");
    }

    // connectivity of the whole picture
    {
        UnionFind conn(faces_.size());
        for (const auto& [root, members] : reg_faces)
            for (int i : members) conn.unite(root, i);
        std::map<int, int> comp_face;
        for (int i = 0; i < n_disc_faces; ++i) {
            auto it = comp_face.find(faces_[i].component);
            if (it == comp_face.end()) comp_face[faces_[i].component] = i;
            else conn.unite(it->second, i);
        }
        for (int l = 0; l < n_loops(); ++l) conn.unite(loop_face_[l][0], loop_face_[l][1]);
        int root0 = faces_.empty() ? -1 : conn.find(0);
        for (int i = 0; i < static_cast<int>(faces_.size()); ++i)
            if (conn.find(i) != root0)
                throw tangle_error("disconnected picture: a component or loop is not placed");
    }

    // shading: fixed by corner parity (interval odd = shaded, colour-0 sign for
    // the external circle), propagated across loops, checked for consistency
    {
        std::vector<int> shade(regions_.size(), -1);
        for (size_t i = 0; i < regions_.size(); ++i)
            for (const auto& c : regions_[i].corners) {
                int s = corner_shaded(disc_colour(c.disc), c.interval) ? 1 : 0;
                if (shade[i] == -1) shade[i] = s;
                else if (shade[i] != s)
                    throw tangle_error("shading conflict inside a region");
            }
        bool changed = true;
        while (changed) {
            changed = false;
            for (int l = 0; l < n_loops(); ++l) {
                int r0 = loop_region_[l][0], r1 = loop_region_[l][1];
                for (int k = 0; k < 2; ++k) {
                    int a = k ? r1 : r0, bb = k ? r0 : r1;
                    if (shade[a] != -1) {
                        int want = 1 - shade[a];
                        if (shade[bb] == -1) { shade[bb] = want; changed = true; }
                        else if (shade[bb] != want)
                            throw tangle_error("shading conflict across a free loop");
                    }
                }
            }
        }
        for (size_t i = 0; i < regions_.size(); ++i) {
            if (shade[i] == -1) throw tangle_error("undetermined shading (unanchored loop)");
            regions_[i].shaded = shade[i] == 1;
        }
    }
}

int Tangle::region_at(const FaceRef& ref) const {
    if (ref.kind == FaceRef::Kind::corner) return region_of_corner(ref.a, ref.b);
    if (ref.a < 0 || ref.a >= n_loops() || ref.b < 0 || ref.b > 1)
        throw tangle_error("region_at: bad loop side");
    return loop_region_[ref.a][ref.b];
}

int Tangle::region_of_corner(int disc, int interval) const {
    auto it = corner_region_.find(Corner{disc, interval});
    if (it == corner_region_.end()) throw tangle_error("region_of_corner: no such corner");
    return it->second;
}

int Tangle::slot_interval(int disc, int slot) const {
    int n = disc_colour(disc).n;
    if (slot < 1 || slot > n) throw tangle_error("slot out of range");
    return disc == 0 ? 2 * (n - slot) + 1 : 2 * slot - 1;
}

int Tangle::slot_region(int disc, int slot) const {
    return region_of_corner(disc, slot_interval(disc, slot));
}

std::string Tangle::signature() const {
    std::ostringstream os;
    os << "e" << ext_.n << (ext_.minus ? "-" : "+") << ";d";
    for (const auto& c : discs_) os << c.n << ",";
    os << ";s";
    for (const auto& [a, b] : strings()) {
        Dart x = a, y = b;
        if (std::tie(y.disc, y.point) < std::tie(x.disc, x.point)) std::swap(x, y);
        os << x.disc << "." << x.point << "-" << y.disc << "." << y.point << ",";
    }
    // recursive region naming so loop order does not matter
    std::vector<std::string> rsig(regions_.size());
    std::function<std::string(int)> name = [&](int r) -> std::string {
        if (!rsig[r].empty()) return rsig[r];
        const Region& R = regions_[r];
        if (!R.corners.empty()) {
            rsig[r] = "c" + std::to_string(R.corners[0].disc) + "." +
                      std::to_string(R.corners[0].interval);
            return rsig[r];
        }
        for (const auto& [l, s] : R.loop_sides)
            if (s == 1) {
                rsig[r] = "in(" + name(loop_region_[l][0]) + ")";
                return rsig[r];
            }
        rsig[r] = "?";
        return rsig[r];
    };
    std::vector<std::string> loops;
    for (int l = 0; l < n_loops(); ++l)
        loops.push_back("[" + name(loop_region_[l][0]) + "|" + name(loop_region_[l][1]) + "]");
    std::sort(loops.begin(), loops.end());
    os << ";l";
    for (const auto& s : loops) os << s;
    // the region partition itself (corner content + circuits + shading)
    os << ";r";
    for (const auto& R : regions_) {
        os << "{";
        for (const auto& c : R.corners) os << c.disc << "." << c.interval << ",";
        os << "#" << R.circuits << (R.shaded ? "s" : "u") << "}";
    }
    return os.str();
}

// ---------------------------------------------------------------- invariants

int loop_count(const Tangle& t) {
    std::vector<std::pair<Dart, Dart>> edges = t.strings();
    // caps and cups across every shaded interval
    for (int d = 0; d <= t.n_discs(); ++d) {
        int n = t.disc_colour(d).n;
        for (int i = 1; i + 1 <= 2 * n; i += 2) edges.push_back({Dart{d, i}, Dart{d, i + 1}});
    }
    std::map<Dart, int> idx;
    for (const auto& [a, b] : edges) {
        if (!idx.count(a)) idx[a] = static_cast<int>(idx.size());
        if (!idx.count(b)) idx[b] = static_cast<int>(idx.size());
    }
    UnionFind uf(idx.size());
    for (const auto& [a, b] : edges) uf.unite(idx[a], idx[b]);
    std::set<int> roots;
    for (size_t i = 0; i < idx.size(); ++i) roots.insert(uf.find(static_cast<int>(i)));
    return static_cast<int>(roots.size()) + t.n_loops();
}

int c_of(const Tangle& t) {
    int c = (t.ext().n + 1) / 2;
    for (const auto& col : t.discs()) c += col.n / 2;
    return c - loop_count(t);
}

Scalar alpha(const Tangle& t, const Scalar& indexQ) {
    auto root = indexQ.sqrt();
    if (!root) throw config_error("alpha: sqrt of the index is not in the scalar field");
    return root->pow(c_of(t));
}

bool prop32_check(const Tangle& T, int i, const Tangle& S, const Scalar& indexQ) {
    Tangle comp = compose(T, i, S);
    auto root = indexQ.sqrt();
    if (!root) throw config_error("prop32_check: sqrt of the index is not in the scalar field");
    Scalar lhs = alpha(T, indexQ) * alpha(S, indexQ) / alpha(comp, indexQ);
    int e = S.ext().n - loop_count(T) - loop_count(S) + loop_count(comp);
    Scalar rhs = root->pow(e);
    return lhs == rhs;
}

// ---------------------------------------------------------------- compose

Tangle compose(const Tangle& T, int disc_index, const Tangle& S) {
    const int bT = T.n_discs(), bS = S.n_discs();
    if (disc_index < 1 || disc_index > bT) throw config_error("compose: no such disc");
    const Colour glue = T.discs()[disc_index - 1];
    if (S.ext().n == 0)
        throw config_error("compose: colour-0 fillers are not supported (colour-0 slots do not occur)");
    if (!(S.ext() == glue)) throw config_error("compose: colour mismatch at the glued disc");
    const int m2 = glue.points();

    auto mapT = [&](int d) { return d < disc_index ? d : d - 1; }; // d != disc_index
    auto mapS = [&](int d) { return bT - 1 + d; };                 // d >= 1

    std::vector<Colour> discs;
    for (int d = 1; d <= bT; ++d)
        if (d != disc_index) discs.push_back(T.discs()[d - 1]);
    for (int d = 1; d <= bS; ++d) discs.push_back(S.discs()[d - 1]);

    // splice strings through the glued circle; the physical slots of the two
    // numbering conventions run in opposite directions, so T's disc point p
    // meets S's boundary point 2m+1-p
    auto flip = [&](int p) { return m2 + 1 - p; };
    std::set<Dart> seenT, seenS;
    auto is_glueT = [&](Dart d) { return d.disc == disc_index; };
    auto is_glueS = [&](Dart d) { return d.disc == 0; };
    auto trans = [&](bool inS, Dart d) {
        return inS ? Dart{mapS(d.disc), d.point} : Dart{mapT(d.disc), d.point};
    };
    std::vector<std::pair<Dart, Dart>> strings;
    auto walk_from = [&](bool inS, Dart a) {
        (inS ? seenS : seenT).insert(a);
        bool side = inS;
        Dart cur = side ? S.partner(a) : T.partner(a);
        (side ? seenS : seenT).insert(cur);
        while (side ? is_glueS(cur) : is_glueT(cur)) {
            side = !side;
            cur = side ? Dart{0, flip(cur.point)} : Dart{disc_index, flip(cur.point)};
            (side ? seenS : seenT).insert(cur);
            cur = side ? S.partner(cur) : T.partner(cur);
            (side ? seenS : seenT).insert(cur);
        }
        strings.push_back({trans(inS, a), trans(side, cur)});
    };
    for (int d = 0; d <= bT; ++d) {
        if (d == disc_index) continue;
        for (int p = 1; p <= T.disc_colour(d).points(); ++p)
            if (!seenT.count(Dart{d, p})) walk_from(false, Dart{d, p});
    }
    for (int d = 1; d <= bS; ++d)
        for (int p = 1; p <= S.disc_colour(d).points(); ++p)
            if (!seenS.count(Dart{d, p})) walk_from(true, Dart{d, p});

    // leftover pure glue cycles become free loops
    std::vector<std::vector<int>> new_loop_points;
    for (int p = 1; p <= m2; ++p) {
        Dart start{disc_index, p};
        if (seenT.count(start)) continue;
        std::vector<int> pts;
        bool side = false;
        Dart cur = start;
        while (!(side ? seenS.count(cur) : seenT.count(cur))) {
            (side ? seenS : seenT).insert(cur);
            if (!side) pts.push_back(cur.point);
            Dart nxt = side ? S.partner(cur) : T.partner(cur);
            (side ? seenS : seenT).insert(nxt);
            side = !side;
            cur = side ? Dart{0, flip(nxt.point)} : Dart{disc_index, flip(nxt.point)};
        }
        new_loop_points.push_back(std::move(pts));
    }

    // Face classes of the composite: boundary circuits of T and S fuse across
    // the dissolved circle. T's disc-i interval j lies between points j, j+1 =
    // S's points 2m+1-j, 2m-j, which flank S's external interval 2m-j.
    const int nfT = static_cast<int>(T.faces_.size());
    const int nfS = static_cast<int>(S.faces_.size());
    UnionFind fc(nfT + nfS);
    for (int j = 0; j < m2; ++j)
        fc.unite(T.corner_face_.at(Corner{disc_index, j}),
                 nfT + S.corner_face_.at(Corner{0, (m2 - j) % m2}));

    const int nLT = T.n_loops(), nLS = S.n_loops();
    const int newbase = nLT + nLS;

    // surviving token of each face class: a corner off the glued circle, or an
    // old loop side; classes without one are circuits of the new loops
    std::map<int, FaceRef> token;
    auto offer = [&](int cls, const FaceRef& ref) {
        auto it = token.find(cls);
        if (it == token.end() || ref < it->second) token[cls] = ref;
    };
    for (int f = 0; f < nfT; ++f) {
        int cls = fc.find(f);
        for (const auto& c : T.faces_[f].corners)
            if (c.disc != disc_index) offer(cls, FaceRef::at(mapT(c.disc), c.interval));
    }
    for (int f = 0; f < nfS; ++f) {
        int cls = fc.find(nfT + f);
        for (const auto& c : S.faces_[f].corners)
            if (c.disc != 0) offer(cls, FaceRef::at(mapS(c.disc), c.interval));
    }
    for (int l = 0; l < nLT; ++l)
        for (int s = 0; s < 2; ++s) offer(fc.find(T.loop_face_[l][s]), FaceRef::loop(l, s));
    for (int l = 0; l < nLS; ++l)
        for (int s = 0; s < 2; ++s)
            offer(fc.find(nfT + S.loop_face_[l][s]), FaceRef::loop(nLT + l, s));

    // token propagation: across old merge records (same region) and across the
    // new loops (whose far side is addressed as the loop interior)
    struct NewLoop {
        std::array<int, 2> cls{-1, -1};
        FaceRef ambient = FaceRef::at(0, 0);
        bool placed = false;
    };
    std::vector<NewLoop> nl(new_loop_points.size());
    std::map<int, std::vector<std::pair<int, int>>> loop_adj; // class -> (loop, other)
    for (size_t l = 0; l < new_loop_points.size(); ++l) {
        int p = new_loop_points[l][0];
        int ca = fc.find(T.corner_face_.at(Corner{disc_index, (p - 1 + m2) % m2}));
        int cb = fc.find(T.corner_face_.at(Corner{disc_index, p % m2}));
        if (ca == cb) throw check_error("compose: a new loop bounds one circuit on both sides");
        loop_adj[ca].push_back({static_cast<int>(l), cb});
        loop_adj[cb].push_back({static_cast<int>(l), ca});
        nl[l].cls = {ca, cb};
    }

    struct RecEdge {
        int ca, cb;
        bool consumed = false;
    };
    std::vector<RecEdge> recs;
    std::map<int, std::vector<int>> rec_adj;
    auto face_class = [&](bool inS, const FaceRef& ref) {
        const Tangle& t = inS ? S : T;
        return fc.find((inS ? nfT : 0) + t.face_of(ref));
    };
    auto add_rec = [&](bool inS, const std::pair<FaceRef, FaceRef>& m) {
        int ca = face_class(inS, m.first), cb = face_class(inS, m.second);
        if (ca == cb) return;
        rec_adj[ca].push_back(static_cast<int>(recs.size()));
        rec_adj[cb].push_back(static_cast<int>(recs.size()));
        recs.push_back({ca, cb, false});
    };
    for (const auto& m : T.island_merges()) add_rec(false, m);
    for (const auto& m : S.island_merges()) add_rec(true, m);

    std::deque<int> work;
    for (const auto& [cls, ref] : token) work.push_back(cls);
    while (!work.empty()) {
        int cls = work.front();
        work.pop_front();
        for (const auto& [l, other] : loop_adj[cls]) {
            if (nl[l].placed) continue;
            nl[l].placed = true;
            nl[l].ambient = token.at(cls);
            if (nl[l].cls[0] != cls) std::swap(nl[l].cls[0], nl[l].cls[1]);
            if (!token.count(other)) {
                token[other] = FaceRef::loop(newbase + l, 1);
                work.push_back(other);
            }
        }
        for (int e : rec_adj[cls]) {
            if (recs[e].consumed) continue;
            int other = recs[e].ca == cls ? recs[e].cb : recs[e].ca;
            if (!token.count(other)) {
                token[other] = token.at(cls);
                recs[e].consumed = true;
                work.push_back(other);
            }
        }
    }
    for (const auto& x : nl)
        if (!x.placed) throw check_error("compose: unreachable glue circuit");

    auto resolve = [&](bool inS, const FaceRef& ref) -> FaceRef {
        int cls = face_class(inS, ref);
        auto it = token.find(cls);
        if (it == token.end()) throw check_error("compose: reference into an unaddressable circuit");
        // keep direct references stable where they survive verbatim
        if (ref.kind == FaceRef::Kind::corner) {
            bool on_glue = inS ? ref.a == 0 : ref.a == disc_index;
            if (!on_glue) return FaceRef::at(inS ? mapS(ref.a) : mapT(ref.a), ref.b);
        } else {
            return FaceRef::loop(inS ? nLT + ref.a : ref.a, ref.b);
        }
        return it->second;
    };

    std::vector<FaceRef> loop_ambients;
    for (int l = 0; l < nLT; ++l) loop_ambients.push_back(resolve(false, T.loop_ambients()[l]));
    for (int l = 0; l < nLS; ++l) loop_ambients.push_back(resolve(true, S.loop_ambients()[l]));
    for (const auto& x : nl) loop_ambients.push_back(x.ambient);

    std::vector<std::pair<FaceRef, FaceRef>> merges;
    for (const auto& e : recs) {
        if (e.consumed) continue;
        merges.push_back({token.at(e.ca), token.at(e.cb)});
    }

    Tangle out(T.ext(), discs, strings, loop_ambients, merges);
    return out;
}

// ---------------------------------------------------------------- insertion

InsertResult insert_on_strings(const Tangle& t) {
    const int b = t.n_discs();
    std::vector<Colour> discs = t.discs();
    std::vector<std::pair<Dart, Dart>> strings;
    std::vector<int> new_discs;

    auto interval_after_shaded = [&](Dart d) {
        int pts = t.disc_colour(d.disc).points();
        return (d.point % pts) % 2 == 1;
    };

    int next = b;
    for (const auto& [a, c] : t.strings()) {
        ++next;
        discs.push_back(Colour(1));
        new_discs.push_back(next);
        bool sa = interval_after_shaded(a), sc = interval_after_shaded(c);
        if (sa == sc) throw check_error("insert_on_strings: inconsistent string shading");
        strings.push_back({a, Dart{next, sa ? 2 : 1}});
        strings.push_back({Dart{next, sc ? 2 : 1}, c});
    }

    // every free loop becomes a one-disc island; its star side faces the
    // unshaded side of the ambient region
    std::vector<int> loop_disc(t.n_loops());
    std::vector<bool> loop_amb_shaded(t.n_loops());
    for (int l = 0; l < t.n_loops(); ++l) {
        ++next;
        discs.push_back(Colour(1));
        new_discs.push_back(next);
        loop_disc[l] = next;
        loop_amb_shaded[l] = t.regions()[t.region_at(FaceRef::loop(l, 0))].shaded;
        strings.push_back({Dart{next, 1}, Dart{next, 2}});
    }
    auto outer_interval = [&](int l) { return loop_amb_shaded[l] ? 1 : 0; };
    auto inner_interval = [&](int l) { return loop_amb_shaded[l] ? 0 : 1; };

    std::function<FaceRef(const FaceRef&)> remap = [&](const FaceRef& ref) -> FaceRef {
        if (ref.kind == FaceRef::Kind::corner) return ref;
        if (ref.b == 1) return FaceRef::at(loop_disc[ref.a], inner_interval(ref.a));
        return remap(t.loop_ambients()[ref.a]);
    };

    std::vector<std::pair<FaceRef, FaceRef>> merges;
    for (const auto& [f1, f2] : t.island_merges()) merges.push_back({remap(f1), remap(f2)});
    for (int l = 0; l < t.n_loops(); ++l)
        merges.push_back({FaceRef::at(loop_disc[l], outer_interval(l)),
                          remap(t.loop_ambients()[l])});

    return InsertResult{Tangle(t.ext(), discs, strings, {}, merges), new_discs};
}

// ---------------------------------------------------------------- surround

Tangle surround_frame(int n) {
    if (n < 1) throw config_error("surround_frame: colour must be >= 1");
    std::vector<Colour> discs(n, Colour(2));
    discs.push_back(Colour(n));
    const int x = n + 1;
    std::vector<std::pair<Dart, Dart>> strings;
    for (int j = 1; j <= n; ++j) {
        strings.push_back({Dart{x, 2 * j - 1}, Dart{j, 2}});
        strings.push_back({Dart{x, 2 * j}, Dart{j, 1}});
        strings.push_back({Dart{j, 4}, Dart{0, 2 * (n - j) + 1}});
        strings.push_back({Dart{j, 3}, Dart{0, 2 * (n - j) + 2}});
    }
    return Tangle(Colour(n), discs, strings);
}

SurroundResult surround_flat(const Tangle& t) {
    int n = t.ext().n;
    if (n == 0) return {t, 0};
    return {compose(surround_frame(n), n + 1, t), n};
}

// ---------------------------------------------------------------- builders

Tangle identity_tangle(int n) {
    if (n < 1) throw config_error("identity_tangle: colour must be >= 1");
    std::vector<std::pair<Dart, Dart>> s;
    for (int a = 1; a <= n; ++a) {
        s.push_back({Dart{0, a}, Dart{1, 2 * n + 1 - a}});
        s.push_back({Dart{0, 2 * n + 1 - a}, Dart{1, a}});
    }
    return Tangle(Colour(n), {Colour(n)}, s);
}

Tangle multiplication_tangle(int n) {
    if (n < 1) throw config_error("multiplication_tangle: colour must be >= 1");
    std::vector<std::pair<Dart, Dart>> s;
    for (int p = 1; p <= n; ++p) {
        s.push_back({Dart{0, p}, Dart{1, 2 * n + 1 - p}});
        s.push_back({Dart{1, p}, Dart{2, 2 * n + 1 - p}});
        s.push_back({Dart{2, p}, Dart{0, 2 * n + 1 - p}});
    }
    return Tangle(Colour(n), {Colour(n), Colour(n)}, s);
}

Tangle inclusion_tangle(int n) {
    if (n < 1) throw config_error("inclusion_tangle: colour must be >= 1");
    std::vector<std::pair<Dart, Dart>> s;
    for (int p = 1; p <= n; ++p) {
        s.push_back({Dart{0, p}, Dart{1, 2 * n + 1 - p}});
        s.push_back({Dart{0, 2 * n + 3 - p}, Dart{1, p}});
    }
    s.push_back({Dart{0, n + 1}, Dart{0, n + 2}});
    return Tangle(Colour(n + 1), {Colour(n)}, s);
}

Tangle cond_expectation_tangle(int n) {
    if (n < 1) throw config_error("cond_expectation_tangle: colour must be >= 1");
    if (n == 1) return trace_plus_tangle(1);
    std::vector<std::pair<Dart, Dart>> s;
    for (int p = 1; p <= n - 1; ++p) {
        s.push_back({Dart{0, p}, Dart{1, 2 * n + 1 - p}});
        s.push_back({Dart{0, 2 * n - 1 - p}, Dart{1, p}});
    }
    s.push_back({Dart{1, n}, Dart{1, n + 1}});
    return Tangle(Colour(n - 1), {Colour(n)}, s);
}

Tangle jones_tangle(int n) {
    if (n < 2) throw config_error("jones_tangle: colour must be >= 2");
    std::vector<std::pair<Dart, Dart>> s;
    for (int p = 1; p <= n - 2; ++p) s.push_back({Dart{0, p}, Dart{0, 2 * n + 1 - p}});
    s.push_back({Dart{0, n - 1}, Dart{0, n}});
    s.push_back({Dart{0, n + 1}, Dart{0, n + 2}});
    return Tangle(Colour(n), {}, s);
}

Tangle rotation_tangle(int n) {
    if (n < 1) throw config_error("rotation_tangle: colour must be >= 1");
    // identity shifted by one strand: ext point ((2n+2-j) mod 2n)+1 meets disc point j
    std::vector<std::pair<Dart, Dart>> s;
    for (int j = 1; j <= 2 * n; ++j) {
        int a = (2 * n + 2 - j) % (2 * n) + 1;
        s.push_back({Dart{0, a}, Dart{1, j}});
    }
    return Tangle(Colour(n), {Colour(n)}, s);
}

Tangle trace_plus_tangle(int n) {
    if (n < 1) throw config_error("trace_plus_tangle: colour must be >= 1");
    std::vector<std::pair<Dart, Dart>> s;
    for (int p = 1; p <= n; ++p) s.push_back({Dart{1, p}, Dart{1, 2 * n + 1 - p}});
    return Tangle(Colour(0), {Colour(n)}, s, {},
                  {{FaceRef::at(1, 0), FaceRef::at(0, 0)}});
}

Tangle trace_minus_tangle(int n) {
    if (n < 1) throw config_error("trace_minus_tangle: colour must be >= 1");
    std::vector<std::pair<Dart, Dart>> s;
    for (int p = 1; p <= n; ++p) s.push_back({Dart{1, p}, Dart{1, 2 * n + 1 - p}});
    // closure around the left: the outer region touches the disc's right side,
    // shaded iff n is odd
    return Tangle(Colour(0, n % 2 == 1), {Colour(n)}, s, {},
                  {{FaceRef::at(1, n), FaceRef::at(0, 0)}});
}

Tangle unit_tangle(int n) {
    if (n < 1) throw config_error("unit_tangle: colour must be >= 1");
    std::vector<std::pair<Dart, Dart>> s;
    for (int p = 1; p <= n; ++p) s.push_back({Dart{0, p}, Dart{0, 2 * n + 1 - p}});
    return Tangle(Colour(n), {}, s);
}

Tangle empty_tangle(bool minus) { return Tangle(Colour(0, minus), {}, {}); }

Tangle free_loop_tangle() {
    return Tangle(Colour(0), {}, {}, {FaceRef::at(0, 0)}, {});
}

} // namespace pla
