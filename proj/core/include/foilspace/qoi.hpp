#pragma once

#include "foilspace/geometry.hpp"
#include "foilspace/sampling.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace foilspace::qoi {

// Scalar quantity of interest on normalized inputs x in [-1, 1]^m.
// Implementations are deterministic and safe to call concurrently.
class QoiEvaluator {
public:
    virtual ~QoiEvaluator() = default;

    virtual std::string name() const = 0;
    virtual int dimension() const = 0;
    virtual std::string description() const = 0;
    // Throws EvaluationError if the point cannot be evaluated.
    virtual double evaluate(const Eigen::VectorXd& x) const = 0;
};

using EvaluatorPtr = std::shared_ptr<const QoiEvaluator>;

// 1/2 x^T H x + v^T x + c. Throws ContractViolation for asymmetric H.
EvaluatorPtr synthetic_quadratic(Eigen::MatrixXd H, Eigen::VectorXd v, double c);

enum class RidgeProfile { Linear, Quadratic, Exp };

std::string_view to_string(RidgeProfile profile);
RidgeProfile ridge_profile_from_string(std::string_view name);
double ridge_profile(RidgeProfile profile, double y);

// g(w^T x / |w|) + noise * eta(x), where eta is a standard normal derived from a
// hash of x's bit pattern and noise_seed, so repeated calls agree bitwise.
EvaluatorPtr ridge(Eigen::VectorXd w, RidgeProfile profile, double noise = 0.0,
                   std::uint64_t noise_seed = 0);

enum class Parameterization { Parsec, Cst };

std::string_view to_string(Parameterization p);
Parameterization parameterization_from_string(std::string_view name);

// Decodes a normalized parameter vector into surfaces through the box.
geometry::AirfoilSurfacePair decode(Parameterization p, const sampling::ParameterBox& box,
                                    const Eigen::VectorXd& normalized);

// Validity options appropriate to the decoded design (sharp trailing edge for
// CST and for PARSEC with x5 = x6 = 0).
geometry::ValidityOptions validity_options(Parameterization p, const sampling::ParameterBox& box,
                                           const Eigen::VectorXd& normalized);

struct SurrogateCoefficients {
    double kappa0 = 0.002;
    double kappa1 = 0.35;
    int grid_size = 201;
};

struct SurrogateOutputs {
    double lift = 0.0;
    double drag = 0.0;
};

// Thin-airfoil zero-angle lift 2 * integral_0^pi c'(l(theta)) (cos theta - 1) d theta
// of the mean camber line c = (s_U + s_L)/2, l = (1 - cos theta)/2.
double lift_like(const geometry::AirfoilSurfacePair& pair, int grid_size = 201);

// kappa0 + kappa1 * (max thickness)^2 over a t-uniform grid.
double drag_like(const geometry::AirfoilSurfacePair& pair, const SurrogateCoefficients& k = {});

// Qualitative desk-scale stand-in for lift/drag; not a flow solver.
// Infeasible shapes throw EvaluationError whose message carries the validity report.
SurrogateOutputs panel_outputs(const geometry::AirfoilSurfacePair& pair,
                               const geometry::ValidityOptions& validity,
                               const SurrogateCoefficients& k = {});

struct PanelPair {
    EvaluatorPtr lift;
    EvaluatorPtr drag;
};

PanelPair panel_surrogate(Parameterization p, sampling::ParameterBox box,
                          SurrogateCoefficients k = {});

// Rows of (x, f) from an external source. f is absent for unevaluated design sets.
class DatasetQoi final : public QoiEvaluator {
public:
    DatasetQoi(Eigen::MatrixXd X, std::optional<Eigen::VectorXd> f, double tolerance = 1e-12,
               std::string provenance = {});

    std::string name() const override { return "dataset"; }
    int dimension() const override { return static_cast<int>(X_.cols()); }
    std::string description() const override;
    // Looks x up among the rows (max-norm within tolerance).
    double evaluate(const Eigen::VectorXd& x) const override;

    const Eigen::MatrixXd& X() const { return X_; }
    bool has_outputs() const { return f_.has_value(); }
    const Eigen::VectorXd& f() const;
    const std::string& provenance() const { return provenance_; }

private:
    Eigen::MatrixXd X_;
    std::optional<Eigen::VectorXd> f_;
    double tolerance_;
    std::string provenance_;
};

// Strict CSV load: header x1..xm[,f]; malformed rows throw ParseError with the
// line number; duplicate x with conflicting f throws ParseError.
// `#` comment lines are kept as provenance.
std::shared_ptr<DatasetQoi> load_dataset(const std::filesystem::path& path, double tolerance = 1e-12);

void write_dataset(const std::filesystem::path& path, const Eigen::MatrixXd& X,
                   const Eigen::VectorXd& f, const std::vector<std::string>& comments = {});

struct ExportRecord {
    long row = 0;
    std::string file;
    bool feasible = false;
};

// One closed coordinate-loop file per row plus manifest.csv {row, file, feasible}.
// Rows that fail to decode are recorded as infeasible without a loop file.
std::vector<ExportRecord> export_designs(const Eigen::MatrixXd& X, Parameterization p,
                                         const sampling::ParameterBox& box,
                                         const std::filesystem::path& directory,
                                         int grid_size = 201,
                                         const std::vector<std::string>& comments = {});

struct Manifest {
    std::vector<ExportRecord> records;
    Eigen::MatrixXd X;
};

// Reads manifest.csv written by export_designs.
Manifest load_manifest(const std::filesystem::path& path);

struct BatchResult {
    Eigen::MatrixXd X;  // rows that evaluated successfully, input order
    Eigen::VectorXd f;
    std::vector<long> kept_rows;
    std::vector<long> failed_rows;
    std::vector<std::string> failure_messages;
};

// Row-order-preserving batch evaluation; failures are excluded and recorded.
BatchResult evaluate_batch(const QoiEvaluator& qoi, const Eigen::MatrixXd& X);

}  // namespace foilspace::qoi
