#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dimwit/scenario.hpp"
#include "dimwit/sdp.hpp"

namespace dimwit::npa {

enum class Party { A = 0, B = 1 };

/// Projector E^outcome_setting of one party. The last outcome of every
/// setting is never stored; it is replaced by I minus the others.
struct Symbol {
    Party party = Party::A;
    int setting = 0;
    int outcome = 0;
    auto operator<=>(const Symbol&) const = default;
};

using Word = std::vector<Symbol>;

// Alice's symbols first, then runs collapsed (PP = P) and annihilated
// (distinct outcomes of one setting). std::nullopt means the zero operator.
std::optional<Word> canonicalize(const Word& w);
Word adjoint(const Word& w);  // canonical input -> canonical adjoint
std::string wordName(const Word& w);

enum class Level { One, OnePlusAB, Two, Three };

Level parseLevel(const std::string& s);
std::string levelName(Level level);

/// Sparse affine expression over moment variables.
struct LinearForm {
    std::map<int, double> coeffs;
    double constant = 0.0;

    LinearForm& operator+=(const LinearForm& o);
    LinearForm& operator*=(double f);
    double evaluate(const Eigen::VectorXd& y) const;
};

LinearForm operator+(LinearForm lhs, const LinearForm& rhs);
LinearForm operator-(LinearForm lhs, const LinearForm& rhs);
LinearForm operator*(double f, LinearForm form);

enum class Relation { Equal, GreaterEqual };

struct LinearConstraint {
    LinearForm lhs;
    Relation relation = Relation::GreaterEqual;
    double rhs = 0.0;
};

/// Entry of the moment matrix: a variable id (or one of the two constants)
/// and whether the entry holds the complex conjugate of that moment.
struct MomentRef {
    static constexpr int kZero = -1;
    static constexpr int kOne = -2;
    int var = kZero;
    bool conjugate = false;
};

struct MomentProblem {
    DiScenario scenario;
    Level level = Level::One;
    bool complexMoments = false;

    std::vector<Word> words;                    // rows/columns
    std::vector<std::vector<MomentRef>> index;  // [i][j]
    std::vector<Word> variables;                // representative word per id
    std::vector<bool> selfAdjoint;              // imaginary part vanishes
    std::vector<LinearConstraint> constraints;
    LinearForm objective;

    int size() const { return static_cast<int>(words.size()); }
    int numVars() const { return static_cast<int>(variables.size()); }
    std::optional<int> variableOf(const Word& w) const;

    // Affine forms of probabilities through completeness.
    LinearForm probability(int a, int b, int x, int y) const;
    LinearForm marginalA(int a, int x) const;
    LinearForm marginalB(int b, int y) const;

    std::map<Word, int> lookup;  // canonical representative -> id
};

MomentProblem buildMomentProblem(const DiScenario& scen, Level level, bool complexMoments = false);

// Witness or Bell constraint sum alpha P + C {>=,=} s; s = -inf is a no-op.
void addWitnessValueConstraint(MomentProblem& mp, const BellFunctional& f, double s,
                               Relation relation = Relation::GreaterEqual);
// <E^0_x> = 1/d for every x.
void addTheorem1Marginals(MomentProblem& mp, int d);
// P(a,b|x,y) = P(!a,!b|x,y) for every a,b,x,y (binary scenarios).
void addSymmetryConstraints(MomentProblem& mp);
// Generic append with duplicate removal.
void addConstraint(MomentProblem& mp, LinearConstraint c);

enum class GuessMode { DI, Theorem1, Theorem2 };

// DI: P(a,b|x0,y0); Theorem1: d * P(0,b|x0,y0); Theorem2: P(0,b) + P(1,!b).
void setGuessingObjective(MomentProblem& mp, GuessMode mode, int a, int b, int x0, int y0, int d = 2);
void setObjective(MomentProblem& mp, const BellFunctional& f);

sdp::LmiProblem toLmi(const MomentProblem& mp);
sdp::Problem toSdp(const MomentProblem& mp);
void writeSparse(std::ostream& out, const MomentProblem& mp);

struct MomentSolution {
    sdp::Status status = sdp::Status::IterLimit;
    double value = 0.0;
    Eigen::VectorXd moments;
    sdp::Solution raw;

    bool optimal() const { return status == sdp::Status::Optimal; }
};

MomentSolution solve(const MomentProblem& mp, const sdp::Options& opts = {});

DiDistribution distributionFromMoments(const MomentProblem& mp, const Eigen::VectorXd& y);

/// How far the distribution is from the constrained relaxation: the larger
/// of its linear-constraint violation and max(0, -t) where t is the best
/// lower eigenvalue bound of a moment matrix extending the distribution.
double feasibilityResidual(const MomentProblem& mp, const DiDistribution& p, const sdp::Options& opts = {});

}  // namespace dimwit::npa
