#pragma once

#include "spinsq/params.hpp"
#include "spinsq/report.hpp"
#include "spinsq/studies.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace spinsq {

// Escalated regime warning (--strict).
class RegimeViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode { ok = 0, usage_or_config = 2, numerical = 3, regime = 4 };

struct RunConfig {
    std::string model = "effective";  // three-level | effective | corrected | adiabatic
    std::string study;                // steady | bistability | variance | spectrum | decompose | optimize | transfer | validate
    EffectiveParams effective;
    std::optional<ThreeLevelParams> three_level;
    std::optional<double> I2;          // default: 4 I2 = 1 + delta^2
    double omega_ratio = 0.0;          // corrected model
    double omega_max = 400.0;
    int n_omega = 801;
    std::optional<double> I2_max;      // bistability sweep
    int n_points = 201;
    std::string regime = "open";
    double residual_tol = 1e-10;
    bool strict = false;
    std::filesystem::path out;

    void validate() const;
};

RunConfig config_from_file(const std::filesystem::path& ini);

Artifacts execute(const RunConfig& cfg);
Artifacts reproduce(const std::string& target);

// SPINSQ_OUT_ROOT if set, otherwise ./spinsq-out
std::filesystem::path default_output_root();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinsq
