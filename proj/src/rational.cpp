#include "chevalley/rational.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace chevalley {

std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << '/' << denominator(q);
    return os.str();
}

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw Error("parse", "empty rational");
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
            if (d == 0) throw Error("parse", "zero denominator in '" + raw + "'");
            return Rational(n, d);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
            bool neg = !ip.empty() && ip[0] == '-';
            if (neg || (!ip.empty() && ip[0] == '+')) ip = ip.substr(1);
            if (ip.empty()) ip = "0";
            BigInt den = 1;
            for (size_t i = 0; i < fp.size(); ++i) den *= 10;
            BigInt num = BigInt(ip) * den + (fp.empty() ? BigInt(0) : BigInt(fp));
            Rational q(num, den);
            return neg ? Rational(-q) : q;
        }
        return Rational(BigInt(s));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error("parse", "not a rational: '" + raw + "'");
    }
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

bool is_integer(const Rational& q) { return denominator(q) == 1; }

QMat to_q(const IMat& a) {
    QMat q(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (long long v : a[i]) q[i].push_back(Rational(v));
    return q;
}

QMat transpose(const QMat& a) {
    if (a.empty()) return {};
    QMat t(a[0].size(), QVec(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

QMat matmul(const QMat& a, const QMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat c(n, QVec(m));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

QVec matvec(const QMat& a, const QVec& v) {
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

QMat inverse(const QMat& a) {
    size_t n = a.size();
    QMat m = a, inv(n, QVec(n));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) throw Error("singular", "matrix is singular");
        std::swap(m[c], m[piv]);
        std::swap(inv[c], inv[piv]);
        Rational d = m[c][c];
        for (size_t j = 0; j < n; ++j) {
            m[c][j] /= d;
            inv[c][j] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

bool solve(const QMat& a, const QVec& b, QVec& x) {
    try {
        x = matvec(inverse(a), b);
        return true;
    } catch (const Error&) {
        return false;
    }
}

namespace {

void swap_rows(IMat& m, size_t i, size_t j) { std::swap(m[i], m[j]); }
void swap_cols(IMat& m, size_t i, size_t j) {
    for (auto& row : m) std::swap(row[i], row[j]);
}
void add_row(IMat& m, size_t dst, size_t src, long long f) {
    for (size_t k = 0; k < m[dst].size(); ++k) m[dst][k] += f * m[src][k];
}
void add_col(IMat& m, size_t dst, size_t src, long long f) {
    for (auto& row : m) row[dst] += f * row[src];
}
IMat identity(size_t n) {
    IMat id(n, IVec(n, 0));
    for (size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
}

}  // namespace

// Plain elimination; entries stay tiny for Cartan-sized inputs.
Smith smith_normal_form(const IMat& a) {
    size_t n = a.size(), m = n ? a[0].size() : 0;
    Smith s{identity(n), a, identity(m)};
    IMat& D = s.D;
    for (size_t t = 0; t < std::min(n, m); ++t) {
        for (;;) {
            // smallest nonzero in the trailing block goes to (t,t)
            size_t bi = n, bj = m;
            for (size_t i = t; i < n; ++i)
                for (size_t j = t; j < m; ++j)
                    if (D[i][j] != 0 && (bi == n || std::llabs(D[i][j]) < std::llabs(D[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == n) return s;
            swap_rows(D, t, bi);
            swap_rows(s.U, t, bi);
            swap_cols(D, t, bj);
            swap_cols(s.V, t, bj);
            bool clean = true;
            for (size_t i = t + 1; i < n; ++i) {
                long long q = D[i][t] / D[t][t];
                if (q) {
                    add_row(D, i, t, -q);
                    add_row(s.U, i, t, -q);
                }
                if (D[i][t]) clean = false;
            }
            for (size_t j = t + 1; j < m; ++j) {
                long long q = D[t][j] / D[t][t];
                if (q) {
                    add_col(D, j, t, -q);
                    add_col(s.V, j, t, -q);
                }
                if (D[t][j]) clean = false;
            }
            if (!clean) continue;
            // divisibility of the rest of the block
            bool divides = true;
            for (size_t i = t + 1; i < n && divides; ++i)
                for (size_t j = t + 1; j < m; ++j)
                    if (D[i][j] % D[t][t]) {
                        add_row(D, t, i, 1);
                        add_row(s.U, t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (D[t][t] < 0) {
            for (auto& v : D[t]) v = -v;
            for (auto& v : s.U[t]) v = -v;
        }
    }
    return s;
}

IMat lattice_basis(IMat rows) {
    if (rows.empty()) return {};
    size_t m = rows[0].size();
    size_t r = 0;
    for (size_t c = 0; c < m && r < rows.size(); ++c) {
        for (;;) {
            size_t piv = rows.size();
            for (size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (piv == rows.size() || std::llabs(rows[i][c]) < std::llabs(rows[piv][c])))
                    piv = i;
            if (piv == rows.size()) break;
            std::swap(rows[r], rows[piv]);
            bool done = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                long long q = rows[i][c] / rows[r][c];
                if (q)
                    for (size_t k = 0; k < m; ++k) rows[i][k] -= q * rows[r][k];
                if (rows[i][c]) done = false;
            }
            if (done) {
                if (rows[r][c] < 0)
                    for (auto& v : rows[r]) v = -v;
                ++r;
                break;
            }
        }
    }
    rows.resize(r);
    return rows;
}

}  // namespace chevalley
