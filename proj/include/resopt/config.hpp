#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "resopt/scenarios.hpp"

namespace resopt {

/// Config-file problem with position information; what() carries
/// "file:line: message".
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parsed run configuration. Keys absent from the file keep baseline
/// defaults and are reported in notices; unknown sections or keys are
/// hard errors.
struct RunConfig {
    ModelParams params;
    SolverChoice method = SolverChoice::Direct;
    AdjointMode adjoint_mode = AdjointMode::CorrectedFromHamiltonian;
    double tol = 1e-6;        // fbsm control tolerance and direct gradient tolerance
    int fbsm_max_iters = 1000;
    int direct_max_iters = 5000;
    double relaxation = 0.5;
    std::vector<std::string> notices;  // defaulted keys, one line each

    SweepConfig sweep_config() const;
    DirectConfig direct_config() const;
};

/// Parse an INI-style file with sections [model], [econ], [sim],
/// [solver]. '#' and ';' start comments. Throws ConfigError on syntax
/// errors, unknown sections or keys, and unparsable values.
RunConfig load_config(const std::string& path);

/// Same grammar, from an in-memory string ("name" only labels errors).
RunConfig parse_config(const std::string& text, const std::string& name = "<config>");

}  // namespace resopt
