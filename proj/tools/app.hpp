// Front-end layer shared by the command-line tool and the acceptance runner:
// run configuration and hypothesis validation, the instance built from it,
// verification suites, and the cached artifact pipeline.
#pragma once

#include "gt/interpolation.hpp"

#include <json.hpp>

#include <map>
#include <optional>

namespace gt::app {

using json = nlohmann::json;
using SpacePtr = std::shared_ptr<const FormSpace>;

struct RunConfig {
    long d_k = 4;          // 0: smallest admissible field
    long p = 3;
    long n_plus = 1;
    long n_minus = 11;
    int k = 2;
    int n_max = 3;         // tower depth
    int precision = 0;     // p-adic precision M; 0 means n + 4 at level n
    long branch = -1;      // chi_t index; -1 means every branch
    long aux = 0;          // auxiliary prime for the algebra; 0 means p
    std::string eigenvalues;   // "q:a,q:a" pins the eigenform; empty selects automatically
    double tol = 1e-6;
    std::string out = "artifacts";
    int jobs = 1;

    // Fields that determine the mathematics (not n_max, output paths or jobs).
    json core_json() const;
    json to_json() const;
    int precision_at(int n) const { return precision > 0 ? precision : n + 4; }
};

// Checks every hypothesis before any computation and resolves d_k = 0.
// Throws ConfigError naming the violated hypothesis.
void validate(RunConfig& c);
std::vector<std::pair<long, Rational>> parse_eigenvalues(const std::string& s);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

// Level-N newforms with a known eta-product expansion (N, k) -> factors.
std::optional<std::vector<std::pair<long, int>>> eta_factors(long N, int k);
std::optional<NewformData> analytic_form(long N, int k, long X);

// All characters of G_n: for each branch t the tame character and the wild
// twists of conductor p^s, 2 <= s <= n, in canonical order.
std::vector<TowerCharacter> all_characters(const RingClassGroup& G);

class Instance {
   public:
    explicit Instance(RunConfig c);
    const RunConfig& config() const { return c_; }
    const QuadField& field() const { return K_; }
    AlgebraPtr algebra() const { return B_; }
    SpacePtr space() const { return S_; }     // level N+
    SpacePtr pspace() const { return Sp_; }   // level p N+
    const AutoForm& form() const { return f_; }
    const AutoForm& stabilized() const { return fd_; }
    const UnitRoot& unit_root() const { return *fd_.stabilization; }
    const GrossPoints& gross_points() const { return *gp_; }
    long level() const { return c_.n_plus * c_.n_minus; }
    std::vector<long> good_primes(long bound) const;

    const ThetaElement& theta(int n, int m = 0) const;
    PadicContext padic(int n) const { return padic_context(*gp_, unit_root(), c_.precision_at(n)); }
    json hypotheses() const;

   private:
    RunConfig c_;
    QuadField K_;
    AlgebraPtr B_;
    SpacePtr S_, Sp_;
    AutoForm f_, fd_;
    std::unique_ptr<GrossPoints> gp_;
    mutable std::map<std::pair<int, int>, ThetaElement> theta_cache_;
};

// sum_i c_i zeta_m^i as text.
std::string cyclo_str(const CycloNum<KQ>& v);

// Theta element in the exchange format {level, p, precision_M, group,
// weight_index, coeffs: [{elt, value, padic}]}.
json theta_json(const ThetaElement& th, const PadicContext& ctx);

struct SuiteResult {
    std::string name;
    bool ok = true;
    bool skipped = false;
    std::string counterexample;
    json detail;
    json to_json() const;
};
const std::vector<std::string>& suite_names();
SuiteResult run_suite(const Instance& I, const std::string& name);

// Central value report for the character with the given index in all_characters(G_n).
json lvalue_report(const Instance& I, int n, size_t char_index, double tol);

struct CacheError : ConfigError {
    using ConfigError::ConfigError;
};
struct PipelineResult {
    json stages;
    bool ok = true;
};
// classes.json -> brandt/*.json -> eigenform.json -> tower.json -> theta_n*.json
// -> report.json; files whose key matches are reused, a file whose embedded
// hash does not match its content raises CacheError unless rebuild is set.
PipelineResult run_pipeline(const RunConfig& c, bool rebuild);

}  // namespace gt::app
