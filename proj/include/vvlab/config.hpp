#pragma once

#include <map>
#include <string>
#include <vector>

#include "vvlab/diagnostics.hpp"
#include "vvlab/initial_data.hpp"
#include "vvlab/nonlocal.hpp"
#include "vvlab/pressure_law.hpp"
#include "vvlab/solver.hpp"

namespace vvlab {

/// Run configuration parsed from an ini-style file ("[section]" headers,
/// "key = value" lines, '#' comments) or a JSON object of objects.
class RunConfig {
public:
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text, bool json = false);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key, double dflt) const;
    int get_int(const std::string& key, int dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;
    std::vector<double> get_list(const std::string& key) const;

    // empty when valid; human-readable messages otherwise
    std::vector<std::string> validate() const;

    PressureLaw make_law() const;
    NonlocalConfig make_nonlocal() const;
    RawInitialData make_raw() const;
    MollifyOptions make_mollify_options() const;
    SolverConfig make_solver_config() const;
    DiagnosticsOptions make_diagnostics_options(const RawInitialData& raw) const;

    std::vector<double> epsilon_ladder() const;  // single value or ladder
    double alpha() const { return get_double("approx.alpha", 1.0); }
    double p_exponent() const { return get_double("approx.p_exponent", 0.0); }
    int n_cells() const { return get_int("solver.n_cells", 256); }
    int n_outputs() const { return get_int("solver.n_outputs", 40); }
    unsigned long seed() const {
        return static_cast<unsigned long>(get_double("run.seed", 12345));
    }
    int workers() const;
    std::string output_dir() const { return get_string("output.directory", "out"); }
    bool plots() const { return get_bool("output.plots", true); }

    const std::map<std::string, std::string>& raw_values() const { return values_; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace vvlab
