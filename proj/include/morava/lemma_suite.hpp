#pragma once

// Machine checks of the finite computations behind the permanence results:
// vanishing of specific slices, degree tables, generator and differential
// lists at (p, n) = (7, 4), and the degree bookkeeping of the Moore-spectrum
// arguments. Every vanishing claim is backed by a computed dimension or an
// empty cochain basis.

#include "morava/fp_linalg.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morava {

using json = nlohmann::json;

enum class LemmaId {
    zero,
    lan,
    lanc,
    e2ex,
    hs_bound,
    int_identities,
    ext_reduction,
    degree_table,
    gen_e,
    diff_list,
    htpy,
    ph_shift,
    d_squared,
    duality,
};

/// snake_case tag used in reports ("zero", "hs_bound", "int", ...).
std::string_view lemma_tag(LemmaId id);
/// kebab-case command name ("lemma-zero", "hs-bound", "int", ...).
std::string_view lemma_command(LemmaId id);
std::optional<LemmaId> parse_lemma_command(std::string_view name);
const std::vector<LemmaId>& all_lemmas();

struct Counterexample {
    json input;
    json expected;
    json got;
};

struct LemmaReport {
    LemmaId id = LemmaId::zero;
    json params = json::object();
    std::vector<json> details;
    std::vector<Counterexample> counterexamples;

    bool passed() const { return counterexamples.empty(); }
    void fail(json input, json expected, json got);
    /// Records a failure unless expected == got.
    bool expect(const json& input, const json& expected, const json& got);
    json to_json() const;
};

struct SuiteOptions {
    unsigned jobs = 1;
    // Full residue sweeps run only when e(n) is at most this bound.
    Int sweep_limit = 512;
    std::size_t random_samples = 1000;
    std::uint64_t seed = 0x5eed;
};

struct DegreeRow {
    GeneratorId generator;
    Int reduced = 0;
    Int signed_reduced = 0; // representative in (-e(n)/2, e(n)/2]
};
using DegreeTable = std::vector<DegreeRow>;

DegreeTable degree_table(const PrimeContext& ctx);

/// dim E_2^{s,t}(W_n) = dim H^{s, t mod period} of the complex; t is a full
/// internal degree and classes with t not divisible by q vanish.
Int e2_Wn(const ExteriorComplex& complex, Int s, Int t);
Int e2_Wn(const PrimeContext& ctx, Int s, Int t);

struct PhElement {
    std::vector<Int> exponents; // of p, v_1, ..., v_{n-1}
    std::string description;    // e.g. "p v_1^2", or "1"
    Int degree = 0;
};

PhElement ph_element(const PrimeContext& ctx, std::span<const Int> ideal_exponents);

LemmaReport verify_lemma_zero(const PrimeContext& ctx);
LemmaReport verify_gen_e(const PrimeContext& ctx);
LemmaReport verify_diff_list(const PrimeContext& ctx);
LemmaReport verify_degree_table(const PrimeContext& ctx);
LemmaReport verify_lan(const PrimeContext& ctx, const SuiteOptions& opts = {});
LemmaReport verify_lanc(const PrimeContext& ctx, const SuiteOptions& opts = {});
LemmaReport verify_e2ex(const PrimeContext& ctx, const SuiteOptions& opts = {});
LemmaReport verify_hs_bound(const PrimeContext& ctx, const SuiteOptions& opts = {});
LemmaReport verify_int(const PrimeContext& ctx);
LemmaReport verify_ext_reduction(const PrimeContext& ctx);
LemmaReport verify_htpy(const PrimeContext& ctx, std::span<const Int> exponents);
LemmaReport verify_ph_shift(const PrimeContext& ctx, std::span<const Int> exponents);
LemmaReport verify_d_squared(const PrimeContext& ctx, const SuiteOptions& opts = {});
LemmaReport verify_duality(const PrimeContext& ctx, const SuiteOptions& opts = {});

/// Dispatch by id. Exponents default to all ones (length n) where needed.
LemmaReport run_lemma(LemmaId id, const PrimeContext& ctx, const SuiteOptions& opts,
    std::optional<std::vector<Int>> exponents = std::nullopt);

} // namespace morava
