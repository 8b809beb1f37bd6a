#include "pla/tl_backend.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace pla {

namespace {

// match each pending interval internally; arcs from the interval head split it
void enumerate_rec(std::vector<std::pair<int, int>> todo, TLDiagram& cur,
                   std::vector<TLDiagram>& out) {
    while (!todo.empty() && todo.back().first >= todo.back().second) todo.pop_back();
    if (todo.empty()) {
        out.push_back(cur);
        return;
    }
    auto [lo, hi] = todo.back();
    todo.pop_back();
    for (int j = lo + 1; j < hi; j += 2) {
        cur[lo] = j;
        cur[j] = lo;
        auto next = todo;
        next.push_back({lo + 1, j});
        next.push_back({j + 1, hi});
        enumerate_rec(std::move(next), cur, out);
        cur[lo] = cur[j] = -1;
    }
}

} // namespace

std::vector<TLDiagram> noncrossing_matchings(int n) {
    std::vector<TLDiagram> out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    TLDiagram cur(2 * n, -1);
    enumerate_rec({{0, 2 * n}}, cur, out);
    return out;
}

bool is_noncrossing(const TLDiagram& m) {
    int n2 = static_cast<int>(m.size());
    for (int a = 0; a < n2; ++a)
        for (int c = a + 1; c < n2; ++c) {
            int b = m[a], d = m[c];
            if (a < c && c < b && b < d) return false;
        }
    return true;
}

namespace {

class TLBackend final : public Backend {
public:
    TLBackend(std::string name, FieldPtr field, Scalar delta, Scalar counter_factor)
        : name_(std::move(name)), field_(std::move(field)), delta_(std::move(delta)),
          counter_factor_(std::move(counter_factor)) {}

    std::string name() const override { return name_; }
    const FieldPtr& field() const override { return field_; }
    Scalar delta() const override { return delta_; }

    size_t dimension(Colour c) const override { return diagrams(c.n).size(); }

    Element evaluate_connected(const Tangle& t,
                               const std::vector<Element>& inputs) const override {
        Colour out_c = t.ext();
        Element out = zero(out_c);
        const auto& out_diagrams = diagrams(out_c.n);
        std::map<TLDiagram, size_t> out_index;
        for (size_t i = 0; i < out_diagrams.size(); ++i) out_index[out_diagrams[i]] = i;

        // expand multilinearly over the supports of the inputs
        std::vector<std::vector<size_t>> support(t.n_discs());
        for (int d = 1; d <= t.n_discs(); ++d) {
            for (size_t i = 0; i < inputs[d - 1].coords.size(); ++i)
                if (!inputs[d - 1].coords[i].is_zero()) support[d - 1].push_back(i);
            if (support[d - 1].empty()) return out;
        }
        std::vector<size_t> pick(t.n_discs(), 0);
        while (true) {
            Scalar coeff = Scalar::one(field_);
            for (int d = 1; d <= t.n_discs(); ++d)
                coeff = coeff * inputs[d - 1].coords[support[d - 1][pick[d - 1]]];

            // union-find over darts: tangle strings plus the diagram arcs
            std::map<Dart, int> id;
            auto idx = [&](Dart x) {
                auto it = id.find(x);
                if (it == id.end()) {
                    int v = static_cast<int>(id.size());
                    id[x] = v;
                    return v;
                }
                return it->second;
            };
            std::vector<std::pair<int, int>> edges;
            for (const auto& [a, bb] : t.strings()) edges.push_back({idx(a), idx(bb)});
            for (int d = 1; d <= t.n_discs(); ++d) {
                int pts = static_cast<int>(t.disc_colour(d).points());
                const TLDiagram& dia =
                    diagrams(t.disc_colour(d).n)[support[d - 1][pick[d - 1]]];
                // diagram labels live on the external boundary; an internal disc
                // sees them mirrored (point p carries boundary label 2n+1-p)
                for (int p = 0; p < pts; ++p)
                    if (dia[p] > p)
                        edges.push_back({idx(Dart{d, pts - p}), idx(Dart{d, pts - dia[p]})});
            }
            std::vector<int> uf(id.size());
            std::iota(uf.begin(), uf.end(), 0);
            std::function<int(int)> find = [&](int x) {
                while (uf[x] != x) x = uf[x] = uf[uf[x]];
                return x;
            };
            for (auto [a, bb] : edges) uf[find(a)] = find(bb);

            // read off the boundary matching and count closed components
            std::map<int, std::vector<int>> cls;
            for (const auto& [dart, i] : id)
                cls[find(i)].push_back(dart.disc == 0 ? dart.point : -1);
            TLDiagram result(2 * out_c.n, -1);
            int loops = 0;
            for (auto& [root, pts] : cls) {
                std::vector<int> ext;
                for (int p : pts)
                    if (p > 0) ext.push_back(p);
                if (ext.empty()) ++loops;
                else if (ext.size() == 2) {
                    result[ext[0] - 1] = ext[1] - 1;
                    result[ext[1] - 1] = ext[0] - 1;
                } else {
                    throw check_error("tl evaluate: boundary component with odd ends");
                }
            }
            if (!is_noncrossing(result))
                throw check_error("tl evaluate: crossing output diagram (broken tangle)");
            auto it = out_index.find(result);
            if (it == out_index.end()) throw check_error("tl evaluate: unknown output diagram");
            out.coords[it->second] +=
                coeff * delta_.pow(loops) * counter_factor_.pow(t.n_loops());

            size_t k = 0;
            while (k < pick.size() && ++pick[k] == support[k].size()) pick[k++] = 0;
            if (k == pick.size() || pick.empty()) break;
        }
        return out;
    }

    Element star(const Element& x) const override {
        int n = x.colour.n;
        const auto& dias = diagrams(n);
        std::map<TLDiagram, size_t> index;
        for (size_t i = 0; i < dias.size(); ++i) index[dias[i]] = i;
        Element out = zero(x.colour);
        for (size_t i = 0; i < x.coords.size(); ++i) {
            if (x.coords[i].is_zero()) continue;
            TLDiagram r(2 * n);
            for (int p = 0; p < 2 * n; ++p) r[2 * n - 1 - p] = 2 * n - 1 - dias[i][p];
            out.coords[index.at(r)] += x.coords[i];
        }
        return out;
    }

private:
    std::string name_;
    FieldPtr field_;
    Scalar delta_, counter_factor_;
    mutable std::map<int, std::vector<TLDiagram>> cache_;

    const std::vector<TLDiagram>& diagrams(int n) const {
        auto it = cache_.find(n);
        if (it == cache_.end()) it = cache_.emplace(n, noncrossing_matchings(n)).first;
        return it->second;
    }
};

} // namespace

BackendPtr tl_backend_generic() {
    FieldPtr f = Field::ratfunc();
    Scalar d = Scalar::delta(f);
    return std::make_shared<TLBackend>("tl(generic)", f, d, d);
}

BackendPtr tl_backend_sqrt(long d, const FieldPtr& field) {
    Scalar del = Scalar::sqrt_rational(mpq_class(d), field);
    return std::make_shared<TLBackend>("tl(sqrt:" + std::to_string(d) + ")", field, del, del);
}

BackendPtr tl_backend_generic_corrupted() {
    FieldPtr f = Field::ratfunc();
    Scalar d = Scalar::delta(f);
    return std::make_shared<TLBackend>("tl(corrupted)", f, d, d + Scalar::one(f));
}

} // namespace pla
