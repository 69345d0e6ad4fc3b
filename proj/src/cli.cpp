#include "morava/cli.hpp"

#include "morava/lemma_suite.hpp"
#include "morava/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace morava::cli {

namespace {

    // Usage or parameter error detected after parsing.
    struct UsageError : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    struct Options {
        Int p = 0;
        int n = 0;
        std::optional<Int> s;
        std::optional<Int> t;
        std::string format = "json";
        bool raw = false;
        Int scan_limit = 512;
        unsigned jobs = default_jobs();
        std::string exponents;
        std::optional<Int> s_min;
        std::optional<Int> s_max;
        std::string lemma;
    };

    struct Output {
        json params = json::object();
        json payload;
        int status = 0;
        // Set when the subcommand has a tabular rendering.
        std::function<void(std::ostream&)> tsv;
    };

    json degree_fields(const PrimeContext& ctx, Int t_reduced)
    {
        const Int r = mod_floor(t_reduced, ctx.e_n());
        return {{"t_reduced", r}, {"t_reduced_signed", signed_rep(r, ctx.e_n())}, {"t_internal", r * ctx.q},
            {"t_internal_signed", signed_rep(r * ctx.q, ctx.period)}};
    }

    json generator_list(const PrimeContext& ctx, Monomial m)
    {
        json out = json::array();
        for (int idx : m.members())
            out.push_back(GeneratorId::from_index(idx, ctx.n).label());
        return out;
    }

    json cochain_json(const PrimeContext& ctx, const Cochain& x)
    {
        json out = json::array();
        for (const auto& [m, c] : x.terms())
            out.push_back(json::array({generator_list(ctx, m), c}));
        return out;
    }

    std::vector<Int> parse_exponents(const PrimeContext& ctx, const std::string& text, std::size_t max_len)
    {
        if (text.empty())
            return std::vector<Int>(static_cast<std::size_t>(ctx.n), 1);
        std::vector<Int> out;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stoll(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw UsageError("--exponents expects a comma-separated list of integers, got '" + text + "'");
            }
        }
        if (out.empty() || out.size() > max_len)
            throw UsageError("--exponents needs between 1 and " + std::to_string(max_len) + " entries");
        return out;
    }

    Int require_s(const Options& o)
    {
        if (!o.s)
            throw UsageError("--s is required");
        return *o.s;
    }

    // Reduced degree from --t, honoring --raw. Empty when a raw degree is
    // not a multiple of q (such classes carry no cochains).
    std::optional<Int> reduced_t(const PrimeContext& ctx, const Options& o)
    {
        if (!o.t)
            throw UsageError("--t is required");
        if (o.raw)
            return InternalDegree(ctx, *o.t).reduced();
        return mod_floor(*o.t, ctx.e_n());
    }

    Output cmd_cohomology(const PrimeContext& ctx, const Options& o)
    {
        Output out;
        const Int s = require_s(o);
        if (s < 0)
            throw UsageError("--s must be nonnegative");
        const auto t = reduced_t(ctx, o);
        json payload = {{"p", ctx.p}, {"n", ctx.n}, {"s", s}};
        if (!t) {
            payload.update({{"t_reduced", nullptr}, {"t_internal", mod_floor(*o.t, ctx.period)},
                {"t_internal_signed", signed_rep(*o.t, ctx.period)}, {"dim", 0}, {"cochain_dim", 0},
                {"mechanism", "degree_not_divisible_by_q"}, {"representatives", json::array()}});
        } else if (s > ctx.generator_count()) {
            payload.update(degree_fields(ctx, *t));
            payload.update({{"dim", 0}, {"cochain_dim", 0}, {"mechanism", "beyond_top_degree"},
                {"representatives", json::array()}});
        } else {
            const ExteriorComplex complex(ctx);
            const auto slice = build_slice(complex, static_cast<int>(s), *t);
            payload.update(degree_fields(ctx, *t));
            if (!slice.dense()) {
                payload.update({{"dim", cohomology_dim(slice, o.jobs)}, {"cochain_dim", slice.basis_mid.size()},
                    {"representatives", nullptr}, {"note", "slice too large for representatives"}});
                out.payload = payload;
                return out;
            }
            const auto h = cohomology(slice);
            json reps = json::array();
            for (const auto& r : h.representatives)
                reps.push_back(cochain_json(ctx, r));
            payload.update({{"dim", h.dim}, {"cochain_dim", slice.basis_mid.size()}, {"rank_in", h.rank_in},
                {"dim_ker_out", h.dim_ker_out}, {"representatives", reps}});
        }
        out.payload = payload;
        return out;
    }

    Output cmd_basis(const PrimeContext& ctx, const Options& o)
    {
        Output out;
        const Int s = require_s(o);
        if (s < 0 || s > ctx.generator_count())
            throw UsageError("--s must lie in [0, n^2]");
        const auto t = reduced_t(ctx, o);
        std::vector<Monomial> basis;
        if (t)
            basis = ExteriorComplex(ctx).basis(static_cast<int>(s), *t);
        json monomials = json::array();
        for (auto m : basis)
            monomials.push_back(generator_list(ctx, m));
        out.payload = {{"p", ctx.p}, {"n", ctx.n}, {"s", s}, {"count", basis.size()}, {"basis", monomials}};
        if (t)
            out.payload.update(degree_fields(ctx, *t));
        out.tsv = [basis](std::ostream& os) {
            for (std::size_t k = 0; k < basis.size(); ++k)
                os << k << '\t' << basis[k].bits << '\n';
        };
        return out;
    }

    Output cmd_table(const PrimeContext& ctx, const Options&)
    {
        Output out;
        const auto table = degree_table(ctx);
        json rows = json::array();
        for (const auto& row : table)
            rows.push_back({{"generator", row.generator.label()}, {"i", row.generator.i}, {"j", row.generator.j},
                {"reduced", row.reduced}, {"signed_reduced", row.signed_reduced},
                {"internal", row.reduced * ctx.q}, {"internal_signed", signed_rep(row.reduced * ctx.q, ctx.period)}});
        out.payload = {{"p", ctx.p}, {"n", ctx.n}, {"q", ctx.q}, {"e_n", ctx.e_n()}, {"rows", rows}};
        out.tsv = [table](std::ostream& os) {
            for (const auto& row : table)
                os << row.generator.i << '\t' << row.generator.j << '\t' << row.reduced << '\n';
        };
        return out;
    }

    Output cmd_scan(const PrimeContext& ctx, const Options& o)
    {
        Output out;
        const Int N = ctx.generator_count();
        const Int s_min = o.s_min.value_or(o.s.value_or(0));
        const Int s_max = o.s_max.value_or(o.s.value_or(N));
        if (s_min < 0 || s_max > N || s_min > s_max)
            throw UsageError("scan range must satisfy 0 <= s-min <= s-max <= n^2");
        std::vector<Int> classes;
        if (o.t) {
            const auto t = reduced_t(ctx, o);
            if (t)
                classes.push_back(*t);
        } else {
            if (ctx.e_n() > o.scan_limit)
                throw UsageError("e(n) = " + std::to_string(ctx.e_n()) + " exceeds --scan-limit "
                    + std::to_string(o.scan_limit) + "; restrict the scan with --t or raise --scan-limit");
            for (Int t = 0; t < ctx.e_n(); ++t)
                classes.push_back(t);
        }
        const ExteriorComplex complex(ctx);
        const auto rows = static_cast<std::size_t>(s_max - s_min + 1);
        std::vector<Int> dims(rows * classes.size(), 0);
        parallel_for(o.jobs, dims.size(), [&](std::size_t i) {
            const int s = static_cast<int>(s_min) + static_cast<int>(i / classes.size());
            const Int t = classes[i % classes.size()];
            if (complex.basis_size(s, t) != 0)
                dims[i] = cohomology_dim(build_slice(complex, s, t));
        });
        json matrix = json::array();
        for (std::size_t r = 0; r < rows; ++r)
            matrix.push_back(std::vector<Int>(dims.begin() + static_cast<std::ptrdiff_t>(r * classes.size()),
                dims.begin() + static_cast<std::ptrdiff_t>((r + 1) * classes.size())));
        json signed_classes = json::array();
        for (Int t : classes)
            signed_classes.push_back(signed_rep(t, ctx.e_n()));
        json s_values = json::array();
        for (Int s = s_min; s <= s_max; ++s)
            s_values.push_back(s);
        out.payload = {{"p", ctx.p}, {"n", ctx.n}, {"s", s_values}, {"t_reduced", classes},
            {"t_reduced_signed", signed_classes}, {"dims", matrix}};
        out.tsv = [dims, width = classes.size()](std::ostream& os) {
            for (std::size_t i = 0; i < dims.size(); ++i)
                os << dims[i] << ((i + 1) % width == 0 ? '\n' : '\t');
        };
        return out;
    }

    Output cmd_verify(const PrimeContext& ctx, const Options& o)
    {
        Output out;
        const auto id = parse_lemma_command(o.lemma);
        if (!id) {
            std::string names;
            for (auto l : all_lemmas())
                names += (names.empty() ? "" : ", ") + std::string(lemma_command(l));
            throw UsageError("unknown lemma '" + o.lemma + "'; expected one of: " + names);
        }
        SuiteOptions opts;
        opts.jobs = o.jobs;
        opts.sweep_limit = o.scan_limit;
        std::optional<std::vector<Int>> exps;
        if (!o.exponents.empty())
            exps = parse_exponents(ctx, o.exponents, static_cast<std::size_t>(ctx.n));
        const auto report = run_lemma(*id, ctx, opts, exps);
        out.payload = report.to_json();
        out.status = report.passed() ? 0 : 1;
        out.params["lemma"] = o.lemma;
        return out;
    }

    Output cmd_greek(const PrimeContext& ctx, const Options& o)
    {
        Output out;
        const auto g = greek_degree(ctx, require_s(o));
        out.payload = {{"p", ctx.p}, {"n", ctx.n}, {"s", g.s}, {"t", g.t}, {"stem", g.stem}, {"cohomological", g.n},
            {"t_mod_period", mod_floor(g.t, ctx.period)}, {"t_signed", signed_rep(g.t, ctx.period)}};
        return out;
    }

    Output cmd_lambda(const PrimeContext& ctx, const Options& o)
    {
        Output out;
        const auto exps = parse_exponents(ctx, o.exponents, static_cast<std::size_t>(ctx.n));
        const auto set = lambda_set(ctx, exps);
        json elements = json::array();
        for (const auto& el : set) {
            json eps = json::array();
            for (auto b : el.eps.bits)
                eps.push_back(static_cast<int>(b));
            elements.push_back({{"u", el.u}, {"s_of_u", el.s_of_u}, {"u_bar", el.u_bar}, {"eps", eps}});
        }
        out.payload = {{"p", ctx.p}, {"n", ctx.n}, {"exponents", exps}, {"elements", elements}};
        out.tsv = [set](std::ostream& os) {
            for (const auto& el : set)
                os << el.u << '\t' << el.s_of_u << '\t' << el.u_bar << '\n';
        };
        return out;
    }

    Output cmd_shift(const PrimeContext& ctx, const Options& o)
    {
        Output out;
        const auto exps = parse_exponents(ctx, o.exponents, static_cast<std::size_t>(ctx.n));
        if (static_cast<int>(exps.size()) != ctx.n)
            throw UsageError("shift needs exactly n exponents");
        const std::vector<Int> ones(static_cast<std::size_t>(ctx.n), 1);
        const auto ph = ph_element(ctx, exps);
        out.payload = {{"p", ctx.p}, {"n", ctx.n}, {"exponents", exps}, {"d_J", moore_dual_shift(ctx, exps)},
            {"d_I", moore_dual_shift(ctx, ones)}, {"V_J", ph.description}, {"V_J_exponents", ph.exponents},
            {"V_J_degree", ph.degree}};
        return out;
    }

    struct Subcommand {
        const char* name;
        const char* help;
        Output (*fn)(const PrimeContext&, const Options&);
    };

    constexpr std::array kSubcommands{
        Subcommand{"cohomology", "dim H^{s,t} and representatives of one slice", cmd_cohomology},
        Subcommand{"basis", "monomial basis of C^{s,t}", cmd_basis},
        Subcommand{"table", "reduced degrees of the generators h_{i,j}", cmd_table},
        Subcommand{"scan", "dim H^{s,t} over a range of s and all reduced classes t", cmd_scan},
        Subcommand{"verify", "run one lemma check and report counterexamples", cmd_verify},
        Subcommand{"greek", "bidegree and stem of the Greek letter element", cmd_greek},
        Subcommand{"lambda", "cell degrees of a generalized Moore spectrum", cmd_lambda},
        Subcommand{"shift", "dual shift d_J and the element V_J", cmd_shift},
    };

    json echo_params(const Options& o, const std::string& sub)
    {
        json params = {{"subcommand", sub}, {"p", o.p}, {"n", o.n}, {"format", o.format}, {"raw", o.raw}};
        if (o.s)
            params["s"] = *o.s;
        if (o.t)
            params["t"] = *o.t;
        if (o.s_min)
            params["s_min"] = *o.s_min;
        if (o.s_max)
            params["s_max"] = *o.s_max;
        if (!o.exponents.empty())
            params["exponents"] = o.exponents;
        // jobs is left out: output must not depend on the machine.
        return params;
    }

} // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cohomology of the height-n exterior complex over F_p, with lemma checks", "morava"};
    app.require_subcommand(1);
    Options o;

    std::vector<std::pair<CLI::App*, const Subcommand*>> subs;
    for (const auto& sc : kSubcommands) {
        auto* sub = app.add_subcommand(sc.name, sc.help);
        sub->add_option("--p", o.p, "odd prime")->required();
        sub->add_option("--n", o.n, "height, 1 <= n < p")->required();
        sub->add_option("--s", o.s, "cohomological degree");
        sub->add_option("--t", o.t, "internal degree, reduced (units of q) unless --raw");
        sub->add_option("--format", o.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
        sub->add_flag("--raw", o.raw, "treat --t as a full internal degree");
        sub->add_option("--scan-limit", o.scan_limit, "largest e(n) swept exhaustively");
        sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--exponents", o.exponents, "comma-separated ideal exponents e_0,...,e_{k-1}");
        sub->add_option("--s-min", o.s_min, "first row of a scan");
        sub->add_option("--s-max", o.s_max, "last row of a scan");
        if (std::string_view(sc.name) == "verify")
            sub->add_option("lemma", o.lemma, "lemma check (kebab-case name)")->required();
        subs.emplace_back(sub, &sc);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    const auto chosen = std::find_if(subs.begin(), subs.end(), [](const auto& s) { return s.first->parsed(); });
    const Subcommand& sc = *chosen->second;

    Output result;
    try {
        const auto ctx = make_context(o.p, o.n);
        result = sc.fn(ctx, o);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << chosen->first->help();
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n\n" << chosen->first->help();
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }

    if (o.format == "tsv") {
        if (!result.tsv) {
            err << "error: " << sc.name << " has no tabular output; use --format json\n";
            return 2;
        }
        result.tsv(out);
        return result.status;
    }
    json params = echo_params(o, sc.name);
    params.update(result.params);
    const json envelope = {
        {"tool_version", kToolVersion},
        {"params", params},
        {"payload", result.payload},
        {"status", result.status},
    };
    out << envelope.dump(2) << '\n';
    return result.status;
}

} // namespace morava::cli
