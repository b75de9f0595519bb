#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dimwit::sdp {

struct BlockSpec {
    int size = 1;
    bool diagonal = false;
};

// Upper-triangle entry (row <= col) of a symmetric block matrix; 0-indexed.
struct SparseEntry {
    int block = 0;
    int row = 0;
    int col = 0;
    double value = 0.0;
};

using SparseSym = std::vector<SparseEntry>;
using BlockMatrix = std::vector<Eigen::MatrixXd>;

/// max <C,X>  s.t.  <A_i,X> = b_i,  X psd (block diagonal).
/// Dual: min b'y  s.t.  Z = sum y_i A_i - C psd.
struct Problem {
    std::vector<BlockSpec> blocks;
    SparseSym C;
    std::vector<SparseSym> A;
    Eigen::VectorXd b;

    int numConstraints() const { return static_cast<int>(A.size()); }
    void validate() const;
};

enum class Status { Optimal, PrimalInfeasible, DualInfeasible, SlowProgress, IterLimit };

std::string statusName(Status s);

struct Options {
    double tolerance = 1e-8;
    int maxIter = 200;
    int verbosity = 0;
};

struct Solution {
    Status status = Status::IterLimit;
    BlockMatrix X;
    Eigen::VectorXd y;
    BlockMatrix Z;
    double primalObj = 0.0;
    double dualObj = 0.0;
    double primalResidual = 0.0;  // ||b - A(X)|| / (1 + ||b||)
    double dualResidual = 0.0;    // ||C + Z - A'y||_F / (1 + ||C||_F)
    double relativeGap = 0.0;
    int iterations = 0;
};

Solution solve(const Problem& p, const Options& opts = {});

// Block-dense helpers.
BlockMatrix toDense(const std::vector<BlockSpec>& blocks, const SparseSym& m);
double inner(const SparseSym& a, const BlockMatrix& x);

/// Linear matrix inequality in free variables:
///   max c'y + c0  s.t.  G0 + sum_k y_k G_k psd,  E y = e.
/// Equalities are removed by elimination before solving; the remaining
/// problem is solved as the dual of a standard-form SDP.
struct LmiProblem {
    struct Row {
        std::vector<std::pair<int, double>> coeffs;
        double rhs = 0.0;
    };

    int numVars = 0;
    std::vector<BlockSpec> blocks;
    SparseSym constant;
    std::vector<SparseSym> terms;  // [k]
    Eigen::VectorXd objective;
    double objectiveConstant = 0.0;
    std::vector<Row> equalities;
};

/// Status follows the LMI: an infeasible LMI is reported as DualInfeasible
/// (the standard-form dual), an unbounded one as PrimalInfeasible.
struct LmiSolution {
    Status status = Status::IterLimit;
    double value = 0.0;  // objective at y, including c0
    Eigen::VectorXd y;
    Solution raw;
};

struct Elimination {
    Eigen::VectorXd offset;     // y = offset + basis * z
    Eigen::MatrixXd basis;      // numVars x free
    bool inconsistent = false;  // E y = e has no solution
};

Problem toStandardForm(const LmiProblem& lmi, Elimination& elim, double& valueOffset);
LmiSolution solveLmi(const LmiProblem& lmi, const Options& opts = {});

/// Minimal Frobenius-norm correction D such that point + D satisfies the
/// equality constraints and is psd, via an auxiliary arrow-block SDP.
/// Intended for small problems.
double feasibilityDistance(const Problem& p, const BlockMatrix& point, const Options& opts = {});

// Sparse text format (SDPA .dat-s layout, 1-indexed):
//   m / nBlocks / block sizes (negative = diagonal) / b_1..b_m /
//   then "matno block i j value" lines, matno 0 = C, i <= j.
void writeSparse(std::ostream& out, const Problem& p);
Problem readSparse(std::istream& in);

}  // namespace dimwit::sdp
