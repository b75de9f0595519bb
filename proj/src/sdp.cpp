#include "dimwit/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "dimwit/error.hpp"

namespace dimwit::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepFraction = 0.8;
constexpr double kRayRatio = 1e8;
constexpr int kRefinePasses = 3;
constexpr int kStagnationWindow = 40;

struct Triplet {
    int row;
    int col;
    double value;
};

// Both triangles of every constraint matrix, grouped by block, so that
// Tr(A Y) = sum value * Y(col,row).
struct ExpandedMatrix {
    std::vector<std::vector<Triplet>> byBlock;
    double frobenius = 0.0;
};

ExpandedMatrix expand(const SparseSym& m, int numBlocks) {
    ExpandedMatrix out;
    out.byBlock.resize(static_cast<std::size_t>(numBlocks));
    std::map<std::tuple<int, int, int>, double> merged;
    for (const SparseEntry& e : m) {
        const int r = std::min(e.row, e.col);
        const int c = std::max(e.row, e.col);
        merged[{e.block, r, c}] += e.value;
    }
    double sq = 0.0;
    for (const auto& [key, v] : merged) {
        if (v == 0.0) continue;
        const auto [blk, r, c] = key;
        auto& list = out.byBlock[static_cast<std::size_t>(blk)];
        list.push_back({r, c, v});
        sq += v * v;
        if (r != c) {
            list.push_back({c, r, v});
            sq += v * v;
        }
    }
    out.frobenius = std::sqrt(sq);
    return out;
}

double traceProduct(const ExpandedMatrix& a, const BlockMatrix& y) {
    double sum = 0.0;
    for (std::size_t blk = 0; blk < a.byBlock.size(); ++blk)
        for (const Triplet& t : a.byBlock[blk]) sum += t.value * y[blk](t.col, t.row);
    return sum;
}

BlockMatrix zeros(const std::vector<BlockSpec>& blocks) {
    BlockMatrix out;
    for (const BlockSpec& b : blocks) out.push_back(Eigen::MatrixXd::Zero(b.size, b.size));
    return out;
}

BlockMatrix scaledIdentity(const std::vector<BlockSpec>& blocks, double tau) {
    BlockMatrix out;
    for (const BlockSpec& b : blocks) out.push_back(tau * Eigen::MatrixXd::Identity(b.size, b.size));
    return out;
}

double frobenius(const BlockMatrix& m) {
    double sq = 0.0;
    for (const auto& blk : m) sq += blk.squaredNorm();
    return std::sqrt(sq);
}

double innerDense(const BlockMatrix& a, const BlockMatrix& b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += a[k].cwiseProduct(b[k]).sum();
    return sum;
}

bool allFinite(const BlockMatrix& m) {
    for (const auto& blk : m)
        if (!blk.allFinite()) return false;
    return true;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Largest alpha with x + alpha * dx psd (infinite if dx keeps it psd).
double maxStep(const BlockMatrix& x, const BlockMatrix& dx) {
    double alpha = kInf;
    for (std::size_t k = 0; k < x.size(); ++k) {
        Eigen::LLT<Eigen::MatrixXd> llt(x[k]);
        if (llt.info() != Eigen::Success) return 0.0;
        const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(x[k].rows(), x[k].cols()));
        const Eigen::MatrixXd w = symmetrize(linv * dx[k] * linv.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w, Eigen::EigenvaluesOnly);
        const double lmin = eig.eigenvalues()(0);
        if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
    }
    return alpha;
}

bool inverseSpd(const Eigen::MatrixXd& m, Eigen::MatrixXd& inv) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return false;
    inv = symmetrize(llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols())));
    return inv.allFinite();
}

class Solver {
public:
    Solver(const Problem& p, const Options& opts) : p_(p), opts_(opts) {
        nb_ = static_cast<int>(p.blocks.size());
        m_ = p.numConstraints();
        for (const SparseSym& a : p.A) A_.push_back(expand(a, nb_));
        C_ = toDense(p.blocks, p.C);
        normB_ = p.b.norm();
        normC_ = frobenius(C_);
        for (const BlockSpec& b : p.blocks) n_ += b.size;
    }

    Solution run() {
        const double tau = 1.0 + (m_ > 0 ? p_.b.cwiseAbs().maxCoeff() : 0.0);
        X_ = scaledIdentity(p_.blocks, tau);
        Z_ = scaledIdentity(p_.blocks, tau);
        y_ = Eigen::VectorXd::Zero(m_);

        Solution sol;
        int stalled = 0;
        // Best iterate seen so far; returned when the run ends without
        // meeting the tolerance (late iterations can lose accuracy).
        Solution best;
        double bestMerit = kInf;
        double lastDrop = kInf;
        int lastDropIter = 0;
        auto keep = [&](const Solution& s, double merit) {
            if (merit >= bestMerit) return;
            bestMerit = merit;
            best = s;
            best.X = X_;
            best.Z = Z_;
            best.y = y_;
        };
        for (int iter = 0;; ++iter) {
            sol.iterations = iter;
            evaluate(sol);
            if (opts_.verbosity > 0) {
                std::ostringstream line;
                line << "iter " << iter << " pobj " << sol.primalObj << " dobj " << sol.dualObj << " rp "
                     << sol.primalResidual << " rd " << sol.dualResidual << " gap " << sol.relativeGap;
                log(line.str());
            }
            if (sol.primalResidual < opts_.tolerance && sol.dualResidual < opts_.tolerance &&
                sol.relativeGap < opts_.tolerance) {
                sol.status = Status::Optimal;
                sol.X = X_;
                sol.Z = Z_;
                sol.y = y_;
                return sol;
            }
            if (detectInfeasibility(sol)) {
                sol.X = X_;
                sol.Z = Z_;
                sol.y = y_;
                return sol;
            }
            const double merit = std::max({sol.primalResidual, sol.dualResidual, sol.relativeGap});
            keep(sol, merit);
            // Stagnation: no tenfold improvement of the worst measure for a while.
            if (merit < 0.1 * lastDrop) {
                lastDrop = merit;
                lastDropIter = iter;
            } else if (iter - lastDropIter >= kStagnationWindow) {
                best.status = Status::SlowProgress;
                break;
            }
            if (iter >= opts_.maxIter) {
                best.status = Status::IterLimit;
                break;
            }
            if (!step(stalled)) {
                evaluate(sol);
                keep(sol, std::max({sol.primalResidual, sol.dualResidual, sol.relativeGap}));
                best.status = Status::SlowProgress;
                break;
            }
        }
        best.iterations = sol.iterations;
        return best;
    }

private:
    void log(const std::string& s) const {
        if (opts_.verbosity > 0) std::fprintf(stderr, "[sdp] %s\n", s.c_str());
    }

    Eigen::VectorXd applyA(const BlockMatrix& y) const {
        Eigen::VectorXd out(m_);
        for (int i = 0; i < m_; ++i) out(i) = traceProduct(A_[static_cast<std::size_t>(i)], y);
        return out;
    }

    BlockMatrix applyAt(const Eigen::VectorXd& y) const {
        BlockMatrix out = zeros(p_.blocks);
        for (int i = 0; i < m_; ++i) {
            const double yi = y(i);
            if (yi == 0.0) continue;
            const ExpandedMatrix& a = A_[static_cast<std::size_t>(i)];
            for (std::size_t blk = 0; blk < a.byBlock.size(); ++blk)
                for (const Triplet& t : a.byBlock[blk]) out[blk](t.row, t.col) += yi * t.value;
        }
        return out;
    }

    BlockMatrix dualResidual() const {
        BlockMatrix aty = applyAt(y_);
        BlockMatrix rd(static_cast<std::size_t>(nb_));
        for (int k = 0; k < nb_; ++k) rd[k] = C_[k] + Z_[k] - aty[k];
        return rd;
    }

    void evaluate(Solution& sol) const {
        sol.primalObj = innerDense(C_, X_);
        sol.dualObj = m_ > 0 ? p_.b.dot(y_) : 0.0;
        const Eigen::VectorXd rp = p_.b - applyA(X_);
        sol.primalResidual = rp.norm() / (1.0 + normB_);
        sol.dualResidual = frobenius(dualResidual()) / (1.0 + normC_);
        sol.relativeGap =
            std::abs(sol.primalObj - sol.dualObj) / (1.0 + std::abs(sol.primalObj) + std::abs(sol.dualObj));
    }

    bool detectInfeasibility(Solution& sol) const {
        // Improving ray for the primal: A(X) ~ 0 relative to <C,X> > 0
        // certifies that the dual constraints cannot hold.
        const double ax = applyA(X_).norm();
        if (sol.primalObj > 0.0 && sol.primalObj > kRayRatio * std::max(1.0, ax)) {
            sol.status = Status::DualInfeasible;
            return true;
        }
        // Improving ray for the dual: b'y < 0 with A'y - Z ~ 0 relative to it.
        BlockMatrix rd = dualResidual();
        for (int k = 0; k < nb_; ++k) rd[k] = C_[k] - rd[k];
        if (sol.dualObj < 0.0 && -sol.dualObj > kRayRatio * std::max(1.0, frobenius(rd))) {
            sol.status = Status::PrimalInfeasible;
            return true;
        }
        return false;
    }

    Eigen::MatrixXd schur(const BlockMatrix& zinv) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m_, m_);
        for (int blk = 0; blk < nb_; ++blk) {
            const Eigen::MatrixXd& x = X_[blk];
            const Eigen::MatrixXd& zi = zinv[blk];
            const int n = p_.blocks[blk].size;
            Eigen::MatrixXd t(n, n);
            for (int j = 0; j < m_; ++j) {
                const auto& ej = A_[static_cast<std::size_t>(j)].byBlock[static_cast<std::size_t>(blk)];
                if (ej.empty()) continue;
                // T = X A_j Z^{-1}, built column group by column group of A_j.
                t.setZero();
                for (const Triplet& e : ej) t.noalias() += e.value * x.col(e.row) * zi.row(e.col);
                for (int i = 0; i < m_; ++i) {
                    const auto& ei = A_[static_cast<std::size_t>(i)].byBlock[static_cast<std::size_t>(blk)];
                    double s = 0.0;
                    for (const Triplet& e : ei) s += e.value * t(e.col, e.row);
                    M(i, j) += s;
                }
            }
        }
        return 0.5 * (M + M.transpose());
    }

    Eigen::VectorXd solveSchur(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs) const {
        Eigen::LLT<Eigen::MatrixXd> llt(M);
        if (llt.info() == Eigen::Success) return llt.solve(rhs);
        return M.ldlt().solve(rhs);
    }

    // One Mehrotra predictor-corrector step; false when no progress is possible.
    bool step(int& stalled) {
        BlockMatrix zinv(static_cast<std::size_t>(nb_));
        for (int k = 0; k < nb_; ++k) {
            if (!inverseSpd(Z_[k], zinv[k])) return false;
        }
        const BlockMatrix rd = dualResidual();
        const double mu = innerDense(X_, Z_) / n_;

        const Eigen::MatrixXd M = schur(zinv);
        BlockMatrix xrz(static_cast<std::size_t>(nb_));
        for (int k = 0; k < nb_; ++k) xrz[k] = X_[k] * rd[k] * zinv[k];
        const Eigen::VectorXd base = -p_.b + applyA(xrz);

        const Eigen::VectorXd rp = p_.b - applyA(X_);
        auto fromDy = [&](double sigmaMu, const BlockMatrix* corr, const Eigen::VectorXd& dy, BlockMatrix& dX,
                          BlockMatrix& dZ) {
            dZ = applyAt(dy);
            dX.resize(static_cast<std::size_t>(nb_));
            for (int k = 0; k < nb_; ++k) {
                dZ[k] -= rd[k];
                dZ[k] = symmetrize(dZ[k]);
                Eigen::MatrixXd d = sigmaMu * zinv[k] - X_[k] - symmetrize(X_[k] * dZ[k] * zinv[k]);
                if (corr) d -= symmetrize((*corr)[k]);
                dX[k] = symmetrize(d);
            }
        };
        auto direction = [&](double sigmaMu, const BlockMatrix* corr, Eigen::VectorXd& dy, BlockMatrix& dX,
                             BlockMatrix& dZ) {
            Eigen::VectorXd rhs = base;
            if (sigmaMu != 0.0) rhs += sigmaMu * applyA(zinv);
            if (corr) rhs -= applyA(*corr);
            dy = solveSchur(M, rhs);
            fromDy(sigmaMu, corr, dy, dX, dZ);
            // Iterative refinement against the exact operator: A(dX) must
            // equal the primal residual.
            for (int pass = 0; pass < kRefinePasses; ++pass) {
                const Eigen::VectorXd r = rp - applyA(dX);
                if (!(r.norm() > 1e-14 * (1.0 + normB_))) break;
                dy -= solveSchur(M, r);
                fromDy(sigmaMu, corr, dy, dX, dZ);
            }
        };

        Eigen::VectorXd dyA;
        BlockMatrix dXA;
        BlockMatrix dZA;
        direction(0.0, nullptr, dyA, dXA, dZA);
        const double apA = std::min(1.0, kStepFraction * maxStep(X_, dXA));
        const double adA = std::min(1.0, kStepFraction * maxStep(Z_, dZA));
        double muAff = 0.0;
        for (int k = 0; k < nb_; ++k)
            muAff += (X_[k] + apA * dXA[k]).cwiseProduct(Z_[k] + adA * dZA[k]).sum();
        muAff /= n_;
        const double sigma = std::clamp(std::pow(std::max(muAff, 0.0) / mu, 3.0), 0.0, 1.0);

        BlockMatrix corr(static_cast<std::size_t>(nb_));
        for (int k = 0; k < nb_; ++k) corr[k] = dXA[k] * dZA[k] * zinv[k];
        Eigen::VectorXd dy;
        BlockMatrix dX;
        BlockMatrix dZ;
        direction(sigma * mu, &corr, dy, dX, dZ);
        if (!dy.allFinite() || !allFinite(dX) || !allFinite(dZ)) return false;

        // Step fraction grows with the previous progress.
        const double gamma = kStepFraction;
        const double ap = std::min(1.0, gamma * maxStep(X_, dX));
        const double ad = std::min(1.0, gamma * maxStep(Z_, dZ));
        lastAp_ = ap;
        lastAd_ = ad;
        if (std::max(ap, ad) < 1e-9) {
            if (++stalled >= 3) return false;
        } else {
            stalled = 0;
        }
        if (opts_.verbosity > 1) {
            std::ostringstream line;
            line << "  mu " << mu << " sigma " << sigma << " ap " << ap << " ad " << ad;
            log(line.str());
        }
        for (int k = 0; k < nb_; ++k) {
            X_[k] = symmetrize(X_[k] + ap * dX[k]);
            Z_[k] = symmetrize(Z_[k] + ad * dZ[k]);
        }
        y_ += ad * dy;
        return true;
    }

    const Problem& p_;
    Options opts_;
    int nb_ = 0;
    int m_ = 0;
    int n_ = 0;
    std::vector<ExpandedMatrix> A_;
    BlockMatrix C_;
    double normB_ = 0.0;
    double normC_ = 0.0;
    BlockMatrix X_;
    BlockMatrix Z_;
    Eigen::VectorXd y_;
    double lastAp_ = 0.0;
    double lastAd_ = 0.0;
};

void checkEntry(const std::vector<BlockSpec>& blocks, const SparseEntry& e) {
    require(e.block >= 0 && e.block < static_cast<int>(blocks.size()), ErrorCode::Shape, "entry block out of range");
    const BlockSpec& b = blocks[static_cast<std::size_t>(e.block)];
    require(e.row >= 0 && e.col >= 0 && e.row < b.size && e.col < b.size, ErrorCode::Shape,
            "entry index out of range");
    require(e.row <= e.col, ErrorCode::Shape, "entries must lie in the upper triangle (row <= col)");
    require(!b.diagonal || e.row == e.col, ErrorCode::Shape, "off-diagonal entry in a diagonal block");
    require(std::isfinite(e.value), ErrorCode::Domain, "non-finite SDP data");
}

}  // namespace

std::string statusName(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::PrimalInfeasible: return "primal_infeasible";
        case Status::DualInfeasible: return "dual_infeasible";
        case Status::SlowProgress: return "slow_progress";
        case Status::IterLimit: return "iter_limit";
    }
    return "unknown";
}

void Problem::validate() const {
    require(!blocks.empty(), ErrorCode::Shape, "SDP has no blocks");
    for (const BlockSpec& b : blocks) require(b.size >= 1, ErrorCode::Shape, "SDP block size must be positive");
    require(b.size() == static_cast<Eigen::Index>(A.size()), ErrorCode::Shape,
            "SDP right-hand side length differs from constraint count");
    require(b.allFinite(), ErrorCode::Domain, "non-finite SDP right-hand side");
    for (const SparseEntry& e : C) checkEntry(blocks, e);
    for (const SparseSym& a : A)
        for (const SparseEntry& e : a) checkEntry(blocks, e);
}

BlockMatrix toDense(const std::vector<BlockSpec>& blocks, const SparseSym& m) {
    BlockMatrix out = zeros(blocks);
    for (const SparseEntry& e : m) {
        auto& blk = out[static_cast<std::size_t>(e.block)];
        blk(e.row, e.col) += e.value;
        if (e.row != e.col) blk(e.col, e.row) += e.value;
    }
    return out;
}

double inner(const SparseSym& a, const BlockMatrix& x) {
    double sum = 0.0;
    for (const SparseEntry& e : a) {
        const auto& blk = x[static_cast<std::size_t>(e.block)];
        sum += e.row == e.col ? e.value * blk(e.row, e.col) : e.value * (blk(e.row, e.col) + blk(e.col, e.row));
    }
    return sum;
}

Solution solve(const Problem& p, const Options& opts) {
    p.validate();
    return Solver(p, opts).run();
}

Problem toStandardForm(const LmiProblem& lmi, Elimination& elim, double& valueOffset) {
    const int nv = lmi.numVars;
    require(static_cast<int>(lmi.terms.size()) == nv && lmi.objective.size() == nv, ErrorCode::Shape,
            "LMI variable count mismatch");

    // Reduced row echelon form of E y = e with partial pivoting.
    const int ne = static_cast<int>(lmi.equalities.size());
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(ne, nv);
    Eigen::VectorXd e(ne);
    for (int r = 0; r < ne; ++r) {
        for (const auto& [k, v] : lmi.equalities[static_cast<std::size_t>(r)].coeffs) {
            require(k >= 0 && k < nv, ErrorCode::Shape, "equality references unknown variable");
            E(r, k) += v;
        }
        e(r) = lmi.equalities[static_cast<std::size_t>(r)].rhs;
    }
    std::vector<int> pivots;
    int row = 0;
    const double eps = 1e-12 * std::max(1.0, E.size() ? E.cwiseAbs().maxCoeff() : 0.0);
    for (int col = 0; col < nv && row < ne; ++col) {
        Eigen::Index best = 0;
        const double mag = E.col(col).segment(row, ne - row).cwiseAbs().maxCoeff(&best);
        if (mag <= eps) continue;
        best += row;
        E.row(row).swap(E.row(best));
        std::swap(e(row), e(best));
        const double piv = E(row, col);
        E.row(row) /= piv;
        e(row) /= piv;
        for (int r = 0; r < ne; ++r) {
            if (r == row || E(r, col) == 0.0) continue;
            const double f = E(r, col);
            E.row(r) -= f * E.row(row);
            e(r) -= f * e(row);
        }
        pivots.push_back(col);
        ++row;
    }
    elim.inconsistent = false;
    for (int r = row; r < ne; ++r)
        if (std::abs(e(r)) > 1e-9 * std::max(1.0, e.cwiseAbs().maxCoeff())) elim.inconsistent = true;

    std::vector<int> pivotRow(static_cast<std::size_t>(nv), -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) pivotRow[static_cast<std::size_t>(pivots[r])] = static_cast<int>(r);
    std::vector<int> freeVars;
    for (int k = 0; k < nv; ++k)
        if (pivotRow[static_cast<std::size_t>(k)] < 0) freeVars.push_back(k);
    const int nf = static_cast<int>(freeVars.size());

    elim.offset = Eigen::VectorXd::Zero(nv);
    elim.basis = Eigen::MatrixXd::Zero(nv, nf);
    for (int j = 0; j < nf; ++j) elim.basis(freeVars[static_cast<std::size_t>(j)], j) = 1.0;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        const int pv = pivots[r];
        elim.offset(pv) = e(static_cast<Eigen::Index>(r));
        for (int j = 0; j < nf; ++j)
            elim.basis(pv, j) = -E(static_cast<Eigen::Index>(r), freeVars[static_cast<std::size_t>(j)]);
    }

    // Substitute: G0' = G0 + sum offset_k G_k, G'_j = sum_k basis(k,j) G_k.
    auto accumulate = [&](std::map<std::tuple<int, int, int>, double>& acc, const SparseSym& m, double f) {
        if (f == 0.0) return;
        for (const SparseEntry& en : m) {
            const int r = std::min(en.row, en.col);
            const int c = std::max(en.row, en.col);
            acc[{en.block, r, c}] += f * en.value;
        }
    };
    auto flush = [](const std::map<std::tuple<int, int, int>, double>& acc, double sign) {
        SparseSym out;
        for (const auto& [key, v] : acc) {
            if (std::abs(v) <= 1e-15) continue;
            out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), sign * v});
        }
        return out;
    };

    Problem p;
    p.blocks = lmi.blocks;
    std::map<std::tuple<int, int, int>, double> c0;
    accumulate(c0, lmi.constant, 1.0);
    for (int k = 0; k < nv; ++k) accumulate(c0, lmi.terms[static_cast<std::size_t>(k)], elim.offset(k));
    p.C = flush(c0, -1.0);

    valueOffset = lmi.objectiveConstant + lmi.objective.dot(elim.offset);
    p.b.resize(nf);
    for (int j = 0; j < nf; ++j) {
        std::map<std::tuple<int, int, int>, double> gj;
        double cj = 0.0;
        for (int k = 0; k < nv; ++k) {
            const double f = elim.basis(k, j);
            if (f == 0.0) continue;
            accumulate(gj, lmi.terms[static_cast<std::size_t>(k)], f);
            cj += f * lmi.objective(k);
        }
        p.A.push_back(flush(gj, 1.0));
        p.b(j) = -cj;
    }
    return p;
}

LmiSolution solveLmi(const LmiProblem& lmi, const Options& opts) {
    Elimination elim;
    double offset = 0.0;
    Problem full = toStandardForm(lmi, elim, offset);
    LmiSolution out;
    if (elim.inconsistent) {
        out.status = Status::DualInfeasible;
        return out;
    }

    // Variables that no longer touch the LMI are either irrelevant or make
    // the objective unbounded.
    Problem p;
    p.blocks = full.blocks;
    p.C = full.C;
    std::vector<int> kept;
    for (int j = 0; j < full.numConstraints(); ++j) {
        if (full.A[static_cast<std::size_t>(j)].empty()) {
            if (std::abs(full.b(j)) > 1e-12) {
                out.status = Status::PrimalInfeasible;
                return out;
            }
            continue;
        }
        kept.push_back(j);
        p.A.push_back(full.A[static_cast<std::size_t>(j)]);
    }
    p.b.resize(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) p.b(static_cast<Eigen::Index>(j)) = full.b(kept[j]);

    out.raw = solve(p, opts);
    out.status = out.raw.status;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(full.numConstraints());
    for (std::size_t j = 0; j < kept.size(); ++j) z(kept[j]) = out.raw.y(static_cast<Eigen::Index>(j));
    out.y = elim.offset + elim.basis * z;
    // -<C,X> upper-bounds the LMI objective by weak duality; at optimality it
    // agrees with -b'y to the solver tolerance.
    out.value = offset - out.raw.primalObj;
    return out;
}

double feasibilityDistance(const Problem& p, const BlockMatrix& point, const Options& opts) {
    p.validate();
    require(point.size() == p.blocks.size(), ErrorCode::Shape, "point has wrong block count");
    // Variables: t, then one per upper-triangle entry of every block (the
    // correction D). Arrow block [[t, v'], [v, t I]] with v the scaled
    // entries of D encodes t >= ||D||_F.
    struct Slot {
        int block;
        int row;
        int col;
    };
    std::vector<Slot> slots;
    for (std::size_t blk = 0; blk < p.blocks.size(); ++blk) {
        const BlockSpec& b = p.blocks[blk];
        require(point[blk].rows() == b.size && point[blk].cols() == b.size, ErrorCode::Shape,
                "point block has wrong size");
        for (int i = 0; i < b.size; ++i)
            for (int j = i; j < b.size; ++j)
                if (!b.diagonal || i == j) slots.push_back({static_cast<int>(blk), i, j});
    }
    const int ns = static_cast<int>(slots.size());
    LmiProblem lmi;
    lmi.numVars = 1 + ns;
    lmi.blocks = p.blocks;
    const int arrow = static_cast<int>(lmi.blocks.size());
    lmi.blocks.push_back({1 + ns, false});
    lmi.terms.resize(static_cast<std::size_t>(lmi.numVars));
    lmi.objective = Eigen::VectorXd::Zero(lmi.numVars);
    lmi.objective(0) = -1.0;

    for (std::size_t blk = 0; blk < p.blocks.size(); ++blk) {
        const BlockSpec& b = p.blocks[blk];
        for (int i = 0; i < b.size; ++i)
            for (int j = i; j < b.size; ++j)
                if (point[blk](i, j) != 0.0) lmi.constant.push_back({static_cast<int>(blk), i, j, point[blk](i, j)});
    }
    for (int r = 0; r <= ns; ++r) lmi.terms[0].push_back({arrow, r, r, 1.0});
    for (int s = 0; s < ns; ++s) {
        const Slot& sl = slots[static_cast<std::size_t>(s)];
        auto& term = lmi.terms[static_cast<std::size_t>(1 + s)];
        term.push_back({sl.block, sl.row, sl.col, 1.0});
        // An off-diagonal slot contributes twice to ||D||_F^2.
        term.push_back({arrow, 0, 1 + s, sl.row == sl.col ? 1.0 : std::sqrt(2.0)});
    }
    for (int i = 0; i < p.numConstraints(); ++i) {
        LmiProblem::Row row;
        const BlockMatrix ai = toDense(p.blocks, p.A[static_cast<std::size_t>(i)]);
        for (int s = 0; s < ns; ++s) {
            const Slot& sl = slots[static_cast<std::size_t>(s)];
            const double v = ai[sl.block](sl.row, sl.col) * (sl.row == sl.col ? 1.0 : 2.0);
            if (v != 0.0) row.coeffs.push_back({1 + s, v});
        }
        row.rhs = p.b(i) - inner(p.A[static_cast<std::size_t>(i)], point);
        lmi.equalities.push_back(std::move(row));
    }
    const LmiSolution sol = solveLmi(lmi, opts);
    require(sol.status == Status::Optimal, ErrorCode::Solver,
            "feasibility-distance SDP did not converge: " + statusName(sol.status));
    return std::max(0.0, -sol.value);
}

void writeSparse(std::ostream& out, const Problem& p) {
    p.validate();
    out.precision(17);
    out << p.numConstraints() << "\n" << p.blocks.size() << "\n";
    for (std::size_t k = 0; k < p.blocks.size(); ++k)
        out << (k ? " " : "") << (p.blocks[k].diagonal ? -p.blocks[k].size : p.blocks[k].size);
    out << "\n";
    for (int i = 0; i < p.numConstraints(); ++i) out << (i ? " " : "") << p.b(i);
    out << "\n";
    auto emit = [&](int matno, const SparseSym& m) {
        for (const SparseEntry& e : m) {
            if (e.value == 0.0) continue;
            out << matno << " " << e.block + 1 << " " << std::min(e.row, e.col) + 1 << " "
                << std::max(e.row, e.col) + 1 << " " << e.value << "\n";
        }
    };
    emit(0, p.C);
    for (int i = 0; i < p.numConstraints(); ++i) emit(i + 1, p.A[static_cast<std::size_t>(i)]);
}

Problem readSparse(std::istream& in) {
    // Skips comment lines starting with '"' or '*', as SDPA does.
    std::string text;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && (line[first] == '"' || line[first] == '*')) continue;
        for (char& ch : line)
            if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
        text += line + "\n";
    }
    std::istringstream ss(text);
    int m = 0;
    int nblocks = 0;
    if (!(ss >> m >> nblocks) || m < 0 || nblocks < 1) fail(ErrorCode::Parse, "bad sparse SDP header");
    Problem p;
    for (int k = 0; k < nblocks; ++k) {
        int s = 0;
        if (!(ss >> s) || s == 0) fail(ErrorCode::Parse, "bad block size");
        p.blocks.push_back({std::abs(s), s < 0});
    }
    p.b.resize(m);
    for (int i = 0; i < m; ++i)
        if (!(ss >> p.b(i))) fail(ErrorCode::Parse, "bad right-hand side");
    p.A.resize(static_cast<std::size_t>(m));
    int matno = 0;
    int blk = 0;
    int i = 0;
    int j = 0;
    double v = 0.0;
    while (ss >> matno) {
        if (!(ss >> blk >> i >> j >> v)) fail(ErrorCode::Parse, "truncated entry line");
        if (matno < 0 || matno > m) fail(ErrorCode::Parse, "entry references unknown matrix");
        const SparseEntry e{blk - 1, std::min(i, j) - 1, std::max(i, j) - 1, v};
        (matno == 0 ? p.C : p.A[static_cast<std::size_t>(matno - 1)]).push_back(e);
    }
    if (!ss.eof()) fail(ErrorCode::Parse, "unreadable token in sparse SDP");
    p.validate();
    return p;
}

}  // namespace dimwit::sdp
