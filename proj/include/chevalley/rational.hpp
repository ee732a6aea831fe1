#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chevalley {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;
using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
};

std::string to_string(const Rational& q);      // "p/q" or "p"
Rational parse_rational(const std::string& s); // accepts "p/q", "p", or a decimal like "0.25"
double to_double(const Rational& q);
bool is_integer(const Rational& q);

QMat to_q(const IMat& a);
QMat transpose(const QMat& a);
QMat matmul(const QMat& a, const QMat& b);
QVec matvec(const QMat& a, const QVec& v);
QMat inverse(const QMat& a);                  // throws Error("singular") if singular
bool solve(const QMat& a, const QVec& b, QVec& x); // square systems only

// U * A * V = D, D diagonal with d_i | d_{i+1}; U, V unimodular.
struct Smith {
    IMat U, D, V;
};
Smith smith_normal_form(const IMat& a);

// Row-style HNF basis of the Z-span of the given rows (nonzero rows only).
IMat lattice_basis(IMat rows);

}  // namespace chevalley
