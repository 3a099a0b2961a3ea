#include "g2gauge/clifford.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "g2gauge/errors.hpp"

namespace g2gauge {

namespace {

struct GammaEntry {
    int row, col, sign;
};

// Entry (r, c, s) means gamma[i](r, c) = s * i, 1-based.
const std::array<std::array<GammaEntry, 8>, 7> kGammaData = {{
    {{{1, 8, +1}, {2, 3, +1}, {3, 2, -1}, {4, 7, +1}, {5, 6, -1}, {6, 5, +1}, {7, 4, -1}, {8, 1, -1}}},
    {{{1, 3, -1}, {2, 8, +1}, {3, 1, +1}, {4, 6, +1}, {5, 7, +1}, {6, 4, -1}, {7, 5, -1}, {8, 2, -1}}},
    {{{1, 2, +1}, {2, 1, -1}, {3, 8, +1}, {4, 5, -1}, {5, 4, +1}, {6, 7, +1}, {7, 6, -1}, {8, 3, -1}}},
    {{{1, 7, -1}, {2, 6, -1}, {3, 5, +1}, {4, 8, +1}, {5, 3, -1}, {6, 2, +1}, {7, 1, +1}, {8, 4, -1}}},
    {{{1, 6, +1}, {2, 7, -1}, {3, 4, -1}, {4, 3, +1}, {5, 8, +1}, {6, 1, -1}, {7, 2, +1}, {8, 5, -1}}},
    {{{1, 5, -1}, {2, 4, +1}, {3, 7, -1}, {4, 2, -1}, {5, 1, +1}, {6, 8, +1}, {7, 3, +1}, {8, 6, -1}}},
    {{{1, 4, +1}, {2, 5, +1}, {3, 6, +1}, {4, 1, -1}, {5, 2, -1}, {6, 3, -1}, {7, 8, +1}, {8, 7, -1}}},
}};

struct SigmaTerm {
    int i, j, sign;
};

// V_k = sigma(i1,j1) + s2 * sigma(i2,j2), likewise W_k.
const std::array<std::array<SigmaTerm, 2>, 7> kVData = {{
    {{{5, 6, +1}, {1, 2, +1}}},
    {{{5, 7, +1}, {1, 3, +1}}},
    {{{3, 6, +1}, {1, 4, -1}}},
    {{{3, 7, +1}, {1, 5, -1}}},
    {{{2, 5, +1}, {1, 6, +1}}},
    {{{3, 5, +1}, {1, 7, +1}}},
    {{{6, 7, +1}, {2, 3, +1}}},
}};

const std::array<std::array<SigmaTerm, 2>, 7> kWData = {{
    {{{4, 7, +1}, {1, 2, -1}}},
    {{{4, 6, +1}, {1, 3, +1}}},
    {{{2, 7, +1}, {1, 4, +1}}},
    {{{2, 6, +1}, {1, 5, -1}}},
    {{{3, 4, +1}, {1, 6, +1}}},
    {{{2, 4, +1}, {1, 7, -1}}},
    {{{4, 5, +1}, {2, 3, -1}}},
}};

Mat8 zero8() { return Mat8(8, 8); }

Mat8 build_gamma(std::size_t idx) {
    Mat8 m = zero8();
    for (const GammaEntry& e : kGammaData[idx]) {
        m.at(std::size_t(e.row - 1), std::size_t(e.col - 1)) =
            GaussianRational{Rational(0), Rational(e.sign)};
    }
    return m;
}

void check_generators(const SpinGenerators& g) {
    const Mat8 id = Mat8::identity(8);
    for (int i = 1; i <= 7; ++i) {
        for (int j = i; j <= 7; ++j) {
            Mat8 anti = g.g(i) * g.g(j) + g.g(j) * g.g(i);
            Mat8 want = zero8();
            if (i == j) want = id * GaussianRational{Rational(2), Rational(0)};
            if (!(anti == want)) {
                std::ostringstream os;
                os << "generator anticommutator failed at (" << i << "," << j << ")";
                throw ConstructionFailure(os.str());
            }
        }
    }
    Mat8 prod = g.g(1);
    for (int i = 2; i <= 6; ++i) prod = prod * g.g(i);
    prod = prod * GaussianRational::i();
    if (!(prod == g.g(7)))
        throw ConstructionFailure("seventh generator is not i times the product of the first six");
}

Mat8 bracket(const Mat8& a, const Mat8& b) { return a * b - b * a; }

std::vector<GaussianRational> vectorize(const Mat8& m) {
    std::vector<GaussianRational> v;
    v.reserve(64);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) v.push_back(m.at(r, c));
    return v;
}

Rational real_entry(const GaussianRational& z, const char* where) {
    if (!z.is_real()) throw ConstructionFailure(std::string(where) + ": entry not real");
    return z.re;
}

}  // namespace

Mat8 SpinGenerators::sigma(int i, int j) const {
    Mat8 b = bracket(g(i), g(j));
    GaussianRational quarter{Rational(1, 4), Rational(0)};
    return b * quarter;
}

Mat8 SpinGenerators::gamma3(int i, int j, int k) const {
    struct Perm {
        int a, b, c, sign;
    };
    const std::array<Perm, 6> perms = {{{i, j, k, +1},
                                        {j, k, i, +1},
                                        {k, i, j, +1},
                                        {j, i, k, -1},
                                        {i, k, j, -1},
                                        {k, j, i, -1}}};
    Mat8 sum = zero8();
    for (const Perm& p : perms) {
        Mat8 term = g(p.a) * g(p.b) * g(p.c);
        sum = sum + term * GaussianRational{Rational(p.sign), Rational(0)};
    }
    return sum * GaussianRational{Rational(1, 6), Rational(0)};
}

SpinGenerators gamma_matrices() {
    SpinGenerators g;
    for (std::size_t i = 0; i < 7; ++i) g.gamma[i] = build_gamma(i);
    check_generators(g);
    return g;
}

SpinGenerators gamma_matrices_corrupted() {
    SpinGenerators g;
    for (std::size_t i = 0; i < 7; ++i) g.gamma[i] = build_gamma(i);
    g.gamma[0].at(0, 7) = -g.gamma[0].at(0, 7);
    check_generators(g);
    return g;
}

bool spin7_bracket_check(const SpinGenerators& g) {
    // [Sigma_ij, Gamma_k] = delta_jk Gamma_i - delta_ik Gamma_j
    for (int i = 1; i <= 7; ++i) {
        for (int j = 1; j <= 7; ++j) {
            if (i == j) continue;
            Mat8 s = g.sigma(i, j);
            for (int k = 1; k <= 7; ++k) {
                Mat8 lhs = bracket(s, g.g(k));
                Mat8 rhs = zero8();
                if (j == k) rhs = rhs + g.g(i);
                if (i == k) rhs = rhs - g.g(j);
                if (!(lhs == rhs)) return false;
            }
        }
    }
    return true;
}

std::string G2Basis::generator_name(std::size_t idx) {
    std::ostringstream os;
    os << (idx < 7 ? 'V' : 'W') << (idx % 7 + 1);
    return os.str();
}

G2Basis g2_basis(const SpinGenerators& g) {
    G2Basis b;
    for (std::size_t k = 0; k < 7; ++k) {
        const auto& vd = kVData[k];
        const auto& wd = kWData[k];
        auto combine = [&](const std::array<SigmaTerm, 2>& d) {
            Mat8 m = g.sigma(d[0].i, d[0].j) * GaussianRational{Rational(d[0].sign), Rational(0)};
            m = m + g.sigma(d[1].i, d[1].j) * GaussianRational{Rational(d[1].sign), Rational(0)};
            return m;
        };
        b.V[k] = combine(vd);
        b.W[k] = combine(wd);
    }
    return b;
}

bool BracketExpansion::is_zero() const {
    return std::all_of(coeff.begin(), coeff.end(),
                       [](const Rational& r) { return r.is_zero(); });
}

std::map<std::pair<std::size_t, std::size_t>, BracketExpansion> commutator_table(
    const G2Basis& b) {
    // Real span matrix, columns = vectorized generators.
    Matrix<Rational> span(64, 14);
    for (std::size_t k = 0; k < 14; ++k) {
        auto v = vectorize(b.generator(k));
        for (std::size_t r = 0; r < 64; ++r)
            span.at(r, k) = real_entry(v[r], "basis generator");
    }
    std::map<std::pair<std::size_t, std::size_t>, BracketExpansion> table;
    for (std::size_t a = 0; a < 14; ++a) {
        for (std::size_t c = a + 1; c < 14; ++c) {
            Mat8 br = bracket(b.generator(a), b.generator(c));
            auto v = vectorize(br);
            std::vector<Rational> rhs(64);
            for (std::size_t r = 0; r < 64; ++r)
                rhs[r] = real_entry(v[r], "bracket");
            auto sol = span.solve(rhs);
            if (!sol) {
                std::ostringstream os;
                os << "[" << G2Basis::generator_name(a) << ","
                   << G2Basis::generator_name(c) << "] leaves the span";
                throw NotInSpan(os.str());
            }
            BracketExpansion e;
            std::copy(sol->begin(), sol->end(), e.coeff.begin());
            Mat8 rebuilt = zero8();
            for (std::size_t k = 0; k < 14; ++k)
                rebuilt = rebuilt + b.generator(k) *
                                        GaussianRational{e.coeff[k], Rational(0)};
            if (!(rebuilt == br))
                throw NotInSpan("bracket expansion failed reconstruction");
            table[{a, c}] = e;
        }
    }
    return table;
}

std::size_t closure_dimension(const std::vector<Mat8>& seed) {
    std::vector<Mat8> basis;
    auto rank_of = [](const std::vector<Mat8>& mats) {
        Matrix<GaussianRational> m(mats.size(), 64);
        for (std::size_t r = 0; r < mats.size(); ++r) {
            auto v = vectorize(mats[r]);
            for (std::size_t c = 0; c < 64; ++c) m.at(r, c) = v[c];
        }
        return m.rank();
    };
    auto try_add = [&](const Mat8& m) {
        if (m.is_zero()) return false;
        basis.push_back(m);
        if (rank_of(basis) == basis.size()) return true;
        basis.pop_back();
        return false;
    };
    for (const Mat8& m : seed) try_add(m);
    bool grew = true;
    while (grew) {
        grew = false;
        std::size_t n = basis.size();
        for (std::size_t a = 0; a < n && !grew; ++a)
            for (std::size_t c = a + 1; c < n && !grew; ++c)
                grew = try_add(bracket(basis[a], basis[c]));
    }
    return basis.size();
}

Spinor invariant_spinor(const G2Basis& b) {
    Matrix<Rational> stack(112, 8);
    for (std::size_t k = 0; k < 14; ++k) {
        const Mat8& m = b.generator(k);
        for (std::size_t r = 0; r < 8; ++r)
            for (std::size_t c = 0; c < 8; ++c)
                stack.at(8 * k + r, c) = real_entry(m.at(r, c), "basis generator");
    }
    auto null = stack.nullspace();
    if (null.size() != 1) {
        std::ostringstream os;
        os << "common nullspace has dimension " << null.size() << ", expected 1";
        throw WrongNullity(os.str());
    }
    // Scale to coprime integers with positive leading entry.
    std::vector<Rational> rep = null.front();
    BigInt den = 1;
    for (const Rational& r : rep)
        den = boost::multiprecision::lcm(den, r.denominator());
    std::vector<BigInt> ints;
    for (const Rational& r : rep)
        ints.push_back(r.numerator() * (den / r.denominator()));
    BigInt g = 0;
    for (const BigInt& n : ints) g = boost::multiprecision::gcd(g, n);
    if (g == 0) throw WrongNullity("nullspace vector is zero");
    for (BigInt& n : ints) n /= g;
    for (const BigInt& n : ints) {
        if (n == 0) continue;
        if (n < 0)
            for (BigInt& m : ints) m = -m;
        break;
    }
    Spinor eta;
    Rational norm(0);
    for (std::size_t i = 0; i < 8; ++i) {
        Rational re{ints[i], BigInt(1)};
        eta.vec[i] = GaussianRational{re, Rational(0)};
        norm += re * re;
    }
    eta.norm_sq = norm;
    return eta;
}

std::map<IndexTuple, Rational> psi_table(const Spinor& eta, const SpinGenerators& g) {
    std::map<IndexTuple, Rational> table;
    for (int i = 1; i <= 7; ++i) {
        for (int j = i + 1; j <= 7; ++j) {
            for (int k = j + 1; k <= 7; ++k) {
                Mat8 m = g.gamma3(i, j, k);
                GaussianRational acc;
                for (std::size_t r = 0; r < 8; ++r) {
                    GaussianRational row;
                    for (std::size_t c = 0; c < 8; ++c)
                        row += m.at(r, c) * eta.vec[c];
                    acc += eta.vec[r].conj() * row;
                }
                GaussianRational val = GaussianRational::i() * acc /
                                       GaussianRational{eta.norm_sq, Rational(0)};
                if (!val.is_real()) {
                    std::ostringstream os;
                    os << "component (" << i << "," << j << "," << k
                       << ") is not real: " << val.str();
                    throw NonRealCoefficient(os.str());
                }
                if (!val.re.is_zero()) table[IndexTuple::of({i, j, k})] = val.re;
            }
        }
    }
    return table;
}

KForm psi_form(const Spinor& eta, const SpinGenerators& g) {
    KForm f(3);
    for (const auto& [tuple, value] : psi_table(eta, g)) {
        KForm term = KForm::monomial(Poly::constant(value * Rational(6)), tuple);
        f += term;
    }
    return f;
}

KForm frame_relabel(const KForm& w, const FramePermutation& perm) {
    std::array<bool, 8> seen{};
    for (int i = 1; i <= 7; ++i) {
        int img = perm[std::size_t(i)];
        if (img < 1 || img > 7 || seen[std::size_t(img)])
            throw Error("frame relabeling is not a permutation of 1..7");
        seen[std::size_t(img)] = true;
    }
    KForm out(w.degree(), w.ring());
    for (const auto& [tuple, coeff] : w.terms()) {
        std::vector<int> mapped;
        for (int i : tuple.indices()) mapped.push_back(perm[std::size_t(i)]);
        int sign = 1;
        for (std::size_t a = 0; a < mapped.size(); ++a)
            for (std::size_t b = a + 1; b < mapped.size(); ++b)
                if (mapped[a] > mapped[b]) sign = -sign;
        std::sort(mapped.begin(), mapped.end());
        KForm term = KForm::monomial(coeff * Rational(sign), IndexTuple::of(mapped));
        out += term;
    }
    return out;
}

RelabelResolution resolve_frame_relabel(const KForm& psi, const KForm& phi0) {
    RelabelResolution res;
    res.stated = {0, 1, 2, 3, 6, 7, 4, 5};
    KForm target = phi0 * Rational(6);
    std::array<int, 7> perm07 = {1, 2, 3, 4, 5, 6, 7};
    do {
        FramePermutation p{};
        for (std::size_t i = 0; i < 7; ++i) p[i + 1] = perm07[i];
        if (frame_relabel(psi, p) == target) res.successes.push_back(p);
    } while (std::next_permutation(perm07.begin(), perm07.end()));
    res.resolved = !res.successes.empty();
    if (res.resolved) res.canonical = res.successes.front();
    FramePermutation inv{};
    for (int i = 1; i <= 7; ++i) inv[std::size_t(res.stated[std::size_t(i)])] = i;
    res.stated_forward_works = frame_relabel(psi, res.stated) == target;
    res.stated_inverse_works = frame_relabel(psi, inv) == target;
    return res;
}

std::array<G2RewriteRow, 7> g2_rewrite(const SpinConnection& omega,
                                       const G2Basis& b,
                                       const SpinGenerators& g) {
    std::array<G2RewriteRow, 7> rows;
    for (int s = 1; s <= 7; ++s) {
        Matrix<Rational> slab(7, 7);
        for (int i = 1; i <= 7; ++i)
            for (int j = 1; j <= 7; ++j)
                slab.at(std::size_t(i - 1), std::size_t(j - 1)) = omega.get(s, i, j);
        auto residuals = asd_slab_residuals(slab);
        for (std::size_t r = 0; r < 7; ++r) {
            if (!residuals[r].is_zero()) {
                std::ostringstream os;
                os << "slab " << s << " violates the rotation-subalgebra relations "
                   << "(residual " << (r + 1) << " = " << residuals[r].str() << ")";
                throw NotInG2(os.str());
            }
        }
        auto om = [&](int i, int j) { return omega.get(s, i, j); };
        G2RewriteRow row;
        row.c = {om(5, 6), om(5, 7), om(3, 6), om(3, 7), om(2, 5), om(3, 5), om(6, 7)};
        row.d = {om(4, 7), om(4, 6), om(2, 7), om(2, 6), om(3, 4), om(2, 4), om(4, 5)};
        Mat8 lhs = zero8();
        for (int i = 1; i <= 7; ++i)
            for (int j = i + 1; j <= 7; ++j)
                lhs = lhs + g.sigma(i, j) * GaussianRational{om(i, j), Rational(0)};
        Mat8 rhs = zero8();
        for (std::size_t k = 0; k < 7; ++k) {
            rhs = rhs + b.V[k] * GaussianRational{row.c[k], Rational(0)};
            rhs = rhs + b.W[k] * GaussianRational{row.d[k], Rational(0)};
        }
        if (!(lhs == rhs))
            throw MismatchWithReference("slab rewrite does not reproduce the spin term");
        rows[std::size_t(s - 1)] = row;
    }
    return rows;
}

}  // namespace g2gauge
