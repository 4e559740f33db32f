// Command-line front end: evaluation, satisfiability, validity, coherence,
// natural extension, and formula translation over the expecta headers.
//
// Exit codes: 0 on success (SAT and UNSAT are both success), 1 on input
// error, 2 on internal invariant breach. Output is JSON by default; --text
// switches to a key: value report. All output is deterministic.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <expecta/coherence.hpp>
#include <expecta/decide.hpp>
#include <expecta/expectation.hpp>
#include <expecta/gamble.hpp>
#include <expecta/logic.hpp>
#include <expecta/measures.hpp>
#include <expecta/model_json.hpp>

namespace {

using expecta::Gamble;
using expecta::Rat;
using expecta::UncertaintyModel;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw expecta::Error("cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void print_output(const nlohmann::json& doc, bool text) {
    if (!text) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    for (const auto& [key, value] : doc.items())
        std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
                  << "\n";
}

template <class Atom, class Fn>
void walk_atoms(const expecta::Formula<Atom>& f, Fn&& fn) {
    using Kind = typename expecta::Formula<Atom>::Kind;
    switch (f.kind()) {
        case Kind::Atom: fn(f.leaf()); return;
        case Kind::Not: walk_atoms(f.child(), fn); return;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
            walk_atoms(f.left(), fn);
            walk_atoms(f.right(), fn);
            return;
    }
}

/// Either language of the logic front end; likelihood formulas are decided
/// through their expectation translation but re-evaluated as themselves.
struct AnyFormula {
    expecta::ExpFormula decide_form;
    std::optional<expecta::LikFormula> lik;

    bool holds_in(const UncertaintyModel& model) const {
        return lik ? expecta::holds(*lik, model) : expecta::holds(decide_form, model);
    }
};

AnyFormula parse_any_formula(const std::string& text) {
    try {
        return AnyFormula{expecta::parse_exp(text), std::nullopt};
    } catch (const expecta::ParseError& exp_err) {
        try {
            auto lik = expecta::parse_likelihood(text);
            auto translated = expecta::translate_likelihood(lik);
            return AnyFormula{std::move(translated), std::move(lik)};
        } catch (const expecta::ParseError& lik_err) {
            throw expecta::ParseError(std::string("not an expectation formula (") +
                                      exp_err.what() + ") nor a likelihood formula (" +
                                      lik_err.what() + ")");
        }
    }
}

Gamble negated(const Gamble& x) { return expecta::scale_shift(Rat(-1), x, Rat(0)); }

struct Bounds {
    Rat lower;
    Rat upper;
};

/// Lower and upper expectation of the gamble in the model: the degenerate
/// pair for probability measures, inf and sup over a credal set, belief and
/// plausibility Choquet values for mass functions, and the conjugate pair of
/// Choquet values for possibility measures.
Bounds expectation_bounds(const UncertaintyModel& model, const Gamble& x) {
    using namespace expecta;
    if (const auto* mu = std::get_if<ProbabilityMeasure>(&model)) {
        Rat value = expect_prob(*mu, x);
        return {value, value};
    }
    if (const auto* credal = std::get_if<CredalSet>(&model)) {
        const auto result = expect_bounds_credal(*credal, x);
        return {result.lower, result.upper};
    }
    if (const auto* mass = std::get_if<MassFunction>(&model))
        return {mass_expect(*mass, x, ExtremeMode::Min), mass_expect(*mass, x, ExtremeMode::Max)};
    const auto& poss = std::get<PossibilityMeasure>(model);
    return {-expect_poss(poss, negated(x)), expect_poss(poss, x)};
}

/// The belief-side value through its three independent routes, and the
/// plausibility side against its conjugate. Any disagreement is a breach of
/// the library's core agreement theorem.
void audit_belief_routes(const expecta::MassFunction& mass, const Gamble& x) {
    using namespace expecta;
    const Rat choquet = choquet_belief(mass, x);
    const Rat direct = mass_expect(mass, x, ExtremeMode::Min);
    const Rat lp = lower_expect_bel_lp(mass, x);
    if (choquet != direct || direct != lp)
        throw InternalError("oracle: belief expectation routes disagree (choquet " +
                            to_string(choquet) + ", mass " + to_string(direct) + ", lp " +
                            to_string(lp) + ")");
    const Rat upper = mass_expect(mass, x, ExtremeMode::Max);
    if (upper != -choquet_belief(mass, negated(x)) || upper != choquet_plausibility(mass, x))
        throw InternalError("oracle: plausibility side violates conjugacy");
}

nlohmann::json model_document(const expecta::SpacePtr& space, const UncertaintyModel& model) {
    return nlohmann::json::parse(expecta::serialize_model(space, model));
}

/// Serialization round trip for witnesses and audited evaluations: the
/// reparsed document must describe a model that behaves identically.
expecta::ParsedModel reparsed(const expecta::SpacePtr& space, const UncertaintyModel& model) {
    return expecta::parse_model(expecta::serialize_model(space, model));
}

struct EvalArgs {
    std::string model_path;
    std::string gamble_text;
    std::string formula_text;
    bool oracle = false;
    bool text = false;
};

void run_eval(const EvalArgs& args) {
    const auto parsed = expecta::parse_model(read_file(args.model_path));
    nlohmann::json doc;
    if (!args.gamble_text.empty()) {
        const Gamble x =
            expecta::realize_gamble(expecta::parse_gamble(args.gamble_text), parsed.space);
        const Bounds bounds = expectation_bounds(parsed.model, x);
        doc["lower"] = expecta::to_string(bounds.lower);
        doc["upper"] = expecta::to_string(bounds.upper);
        doc["expectation"] = expecta::to_string(expecta::model_expectation(parsed.model, x));
        if (args.oracle) {
            if (const auto* mass = std::get_if<expecta::MassFunction>(&parsed.model))
                audit_belief_routes(*mass, x);

            const auto again = reparsed(parsed.space, parsed.model);
            const Bounds redo = expectation_bounds(again.model, x);
            if (redo.lower != bounds.lower || redo.upper != bounds.upper)
                throw expecta::InternalError("oracle: bounds changed across a model round trip");
        }
    } else {
        const AnyFormula f = parse_any_formula(args.formula_text);
        const bool value = f.holds_in(parsed.model);
        doc["holds"] = value;
        if (args.oracle && f.holds_in(reparsed(parsed.space, parsed.model).model) != value)
            throw expecta::InternalError("oracle: truth value changed across a model round trip");
    }
    print_output(doc, args.text);
}

struct DecideArgs {
    std::string formula_text;
    std::string semantics_name = "prob";
    expecta::DecideOptions opts;
    bool possibility_n4 = false;
    bool text = false;
};

expecta::SatResult decide_sat(const AnyFormula& f, const DecideArgs& args) {
    auto opts = args.opts;
    opts.possibility_n4 = args.possibility_n4;
    const auto semantics = expecta::parse_semantics(args.semantics_name);
    auto result = expecta::sat(f.decide_form, semantics, opts);
    if (result.sat() && opts.oracle) {
        const auto& witness = *result.witness;
        if (!f.holds_in(reparsed(witness.space, witness.model).model))
            throw expecta::InternalError("oracle: witness fails the formula after a round trip");
        if (const auto* mass = std::get_if<expecta::MassFunction>(&witness.model))
            walk_atoms(f.decide_form, [&](const expecta::ExpIneq& atom) {
                for (const auto& term : atom.terms)
                    audit_belief_routes(*mass,
                                        expecta::realize_gamble(term.gamble, witness.space));
            });
    }
    return result;
}

void run_sat(const DecideArgs& args) {
    const AnyFormula f = parse_any_formula(args.formula_text);
    const auto result = decide_sat(f, args);
    nlohmann::json doc;
    doc["result"] = result.sat() ? "SAT" : "UNSAT";
    if (result.sat())
        doc["witness"] = model_document(result.witness->space, result.witness->model);
    print_output(doc, args.text);
}

void run_valid(const DecideArgs& args) {
    const AnyFormula f = parse_any_formula(args.formula_text);
    AnyFormula negation{expecta::ExpFormula::neg(f.decide_form), std::nullopt};
    const auto result = decide_sat(negation, args);
    nlohmann::json doc;
    if (!result.sat()) {
        doc["result"] = "VALID";
    } else {
        doc["result"] = "NOT_VALID";
        doc["counterexample"] = model_document(result.witness->space, result.witness->model);
        if (args.opts.oracle && f.holds_in(result.witness->model))
            throw expecta::InternalError("oracle: counterexample satisfies the formula");
    }
    print_output(doc, args.text);
}

struct GambleSatArgs {
    std::string formula_text;
    expecta::DecideOptions opts;
    bool text = false;
};

void run_gamble_sat(const GambleSatArgs& args) {
    const auto f = expecta::parse_gamble_formula(args.formula_text);
    const auto result = expecta::sat_gamble(f, args.opts);
    nlohmann::json doc;
    doc["result"] = result.sat() ? "SAT" : "UNSAT";
    if (result.sat()) {
        const auto& witness = *result.witness;
        nlohmann::json wit;
        wit["props"] = witness.space->props();
        nlohmann::json worlds = nlohmann::json::array();
        for (std::size_t w = 0; w < witness.space->world_count(); ++w) {
            if (!expecta::contains(witness.worlds, w)) continue;
            const auto& world = witness.space->worlds()[w];
            nlohmann::json assign = nlohmann::json::object();
            for (std::size_t k = 0; k < witness.space->props().size(); ++k)
                assign[witness.space->props()[k]] = ((world.assign >> k) & 1u) != 0;
            worlds.push_back({{"id", world.id}, {"assign", assign}});
        }
        wit["worlds"] = worlds;
        doc["witness"] = wit;
        if (args.opts.oracle && !expecta::holds(f, witness.space, witness.worlds))
            throw expecta::InternalError("oracle: world-structure witness fails the formula");
    }
    print_output(doc, args.text);
}

struct FuncSatArgs {
    std::string formula_text;
    expecta::DecideOptions opts;
    bool real = false;
    bool text = false;
};

void run_func_sat(const FuncSatArgs& args) {
    const auto f = expecta::parse_func(args.formula_text);
    const auto result =
        args.real ? expecta::sat_funcineq_real(f, args.opts) : expecta::sat_funcineq(f, args.opts);
    nlohmann::json doc;
    doc["result"] = result.sat() ? "SAT" : "UNSAT";
    if (result.sat()) {
        const auto& assign = *result.witness;
        nlohmann::json values = nlohmann::json::object();
        for (const auto& [var, vals] : assign.values) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& v : vals) arr.push_back(expecta::to_string(v));
            values[var] = arr;
        }
        doc["witness"] = {{"domain_size", assign.domain_size}, {"values", values}};
        if (args.opts.oracle && !expecta::holds(f, assign))
            throw expecta::InternalError("oracle: function witness fails the formula");
    }
    print_output(doc, args.text);
}

struct CoherentArgs {
    std::string assessment_path;
    bool oracle = false;
    bool text = false;
};

void run_coherent(const CoherentArgs& args) {
    const auto a = expecta::parse_assessment(read_file(args.assessment_path));
    const auto result = expecta::is_coherent(a, args.oracle);
    nlohmann::json doc;
    if (std::holds_alternative<expecta::Coherent>(result)) {
        doc["result"] = "COHERENT";
    } else {
        const auto& witness = std::get<expecta::Incoherent>(result);
        doc["result"] = "INCOHERENT";
        doc["index"] = witness.index;
        nlohmann::json multipliers = nlohmann::json::array();
        for (const auto& b : witness.multipliers) multipliers.push_back(expecta::to_string(b));
        doc["multipliers"] = multipliers;
    }
    print_output(doc, args.text);
}

struct ExtendArgs {
    std::string assessment_path;
    std::string gamble_text;
    bool oracle = false;
    bool text = false;
};

void run_extend(const ExtendArgs& args) {
    const auto a = expecta::parse_assessment(read_file(args.assessment_path));
    const Gamble y = expecta::realize_gamble(expecta::parse_gamble(args.gamble_text), a.space());
    const Rat value = expecta::natural_extension(a, y, args.oracle);
    nlohmann::json doc;
    doc["value"] = expecta::to_string(value);
    print_output(doc, args.text);
}

struct TranslateArgs {
    std::string formula_text;
    std::string form;
    std::size_t max_props = 4;
    bool text = false;
};

void run_translate(const TranslateArgs& args) {
    std::string out;
    if (args.form == "qu") {
        out = expecta::to_string(expecta::translate_likelihood(expecta::parse_likelihood(args.formula_text)));
    } else {
        const auto f = expecta::parse_exp(args.formula_text);
        if (args.form == "t1") {
            out = expecta::to_string(expecta::transform_t1(f));
        } else {
            const auto prop_set = expecta::props_of(f);
            if (prop_set.size() > args.max_props)
                throw expecta::CapExceededError(
                    "formula uses " + std::to_string(prop_set.size()) +
                    " propositions; the cap is " + std::to_string(args.max_props));
            const std::vector<std::string> props(prop_set.begin(), prop_set.end());
            out = expecta::to_string(expecta::transform_t2(f, props));
        }
    }
    nlohmann::json doc;
    doc["formula"] = out;
    print_output(doc, args.text);
}

struct ValidateModelArgs {
    std::string model_path;
    bool text = false;
};

void run_validate_model(const ValidateModelArgs& args) {
    const auto parsed = expecta::parse_model_unchecked(read_file(args.model_path));
    const auto violations = expecta::validate_model(parsed.model);
    nlohmann::json doc;
    if (violations.empty()) {
        doc["result"] = "OK";
    } else {
        doc["result"] = "INVALID";
        nlohmann::json list = nlohmann::json::array();
        for (const auto& v : violations) list.push_back(v.axiom + ": " + v.detail);
        doc["violations"] = list;
    }
    print_output(doc, args.text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact expectation bounds, satisfiability, and coherence over finite worlds"};
    app.require_subcommand(1);
    bool text = false;
    app.add_flag("--text", text, "plain-text report instead of JSON");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate a gamble or formula in a model document");
    eval->add_option("--model", eval_args.model_path, "model document path")->required();
    auto* eval_gamble = eval->add_option("--gamble", eval_args.gamble_text, "gamble expression");
    eval->add_option("--formula", eval_args.formula_text, "expectation or likelihood formula")
        ->excludes(eval_gamble);
    eval->add_flag("--oracle", eval_args.oracle,
                   "recompute through independent routes; exit 2 on disagreement");
    eval->callback([&] {
        if (eval_args.gamble_text.empty() && eval_args.formula_text.empty())
            throw expecta::Error("eval needs --gamble or --formula");
        eval_args.text = text;
        run_eval(eval_args);
    });

    DecideArgs sat_args;
    auto* sat = app.add_subcommand("sat", "decide satisfiability of a formula");
    DecideArgs valid_args;
    auto* valid = app.add_subcommand("valid", "decide validity of a formula");
    for (auto [sub, args] : {std::pair{sat, &sat_args}, std::pair{valid, &valid_args}}) {
        sub->add_option("formula", args->formula_text, "expectation or likelihood formula")
            ->required();
        sub->add_option("--semantics", args->semantics_name,
                        "prob, lowerprob, belief, or possibility")
            ->required();
        sub->add_option("--max-props", args->opts.max_props, "proposition cap");
        sub->add_option("--max-clauses", args->opts.max_clauses, "normal-form clause cap");
        sub->add_flag("--possibility-n4", args->possibility_n4,
                      "attempt possibility decisions over four propositions");
        sub->add_flag("--oracle", args->opts.oracle,
                      "cross-check every step; exit 2 on disagreement");
    }
    sat->callback([&] {
        sat_args.text = text;
        run_sat(sat_args);
    });
    valid->callback([&] {
        valid_args.text = text;
        run_valid(valid_args);
    });

    GambleSatArgs gamble_args;
    auto* gamble_sat = app.add_subcommand("gamble-sat",
                                          "decide a gamble formula over world structures");
    gamble_sat->add_option("formula", gamble_args.formula_text, "gamble formula")->required();
    gamble_sat->add_option("--max-props", gamble_args.opts.max_props, "proposition cap");
    gamble_sat->add_option("--max-clauses", gamble_args.opts.max_clauses,
                           "normal-form clause cap");
    gamble_sat->add_flag("--oracle", gamble_args.opts.oracle,
                         "cross-check every step; exit 2 on disagreement");
    gamble_sat->callback([&] {
        gamble_args.text = text;
        run_gamble_sat(gamble_args);
    });

    FuncSatArgs func_args;
    auto* func_sat = app.add_subcommand("func-sat",
                                        "decide a function-inequality formula");
    func_sat->add_option("formula", func_args.formula_text, "function-inequality formula")
        ->required();
    func_sat->add_flag("--real", func_args.real, "interpret variables as single reals");
    func_sat->add_option("--max-clauses", func_args.opts.max_clauses, "normal-form clause cap");
    func_sat->add_flag("--oracle", func_args.opts.oracle,
                       "cross-check every step; exit 2 on disagreement");
    func_sat->callback([&] {
        func_args.text = text;
        run_func_sat(func_args);
    });

    CoherentArgs coherent_args;
    auto* coherent = app.add_subcommand("coherent", "check an assessment document for coherence");
    coherent->add_option("--assessment", coherent_args.assessment_path,
                         "assessment document path")
        ->required();
    coherent->add_flag("--oracle", coherent_args.oracle,
                       "cross-check every step; exit 2 on disagreement");
    coherent->callback([&] {
        coherent_args.text = text;
        run_coherent(coherent_args);
    });

    ExtendArgs extend_args;
    auto* extend = app.add_subcommand("extend",
                                      "natural extension of an assessment to a gamble");
    extend->add_option("--assessment", extend_args.assessment_path, "assessment document path")
        ->required();
    extend->add_option("--gamble", extend_args.gamble_text, "gamble expression")->required();
    extend->add_flag("--oracle", extend_args.oracle,
                     "cross-check every step; exit 2 on disagreement");
    extend->callback([&] {
        extend_args.text = text;
        run_extend(extend_args);
    });

    TranslateArgs translate_args;
    auto* translate = app.add_subcommand("translate", "rewrite a formula");
    translate->add_option("formula", translate_args.formula_text, "formula to rewrite")
        ->required();
    translate->add_option("--form", translate_args.form,
                          "t1 (split expectations), t2 (atom staircases), qu (likelihoods to "
                          "expectations)")
        ->required()
        ->check(CLI::IsMember({"t1", "t2", "qu"}));
    translate->add_option("--max-props", translate_args.max_props,
                          "proposition cap for the t2 staircase");
    translate->callback([&] {
        translate_args.text = text;
        run_translate(translate_args);
    });

    ValidateModelArgs validate_args;
    auto* validate_model = app.add_subcommand("validate-model",
                                              "report axiom violations in a model document");
    validate_model->add_option("--model", validate_args.model_path, "model document path")
        ->required();
    validate_model->callback([&] {
        validate_args.text = text;
        run_validate_model(validate_args);
    });

    for (auto* sub : {eval, sat, valid, gamble_sat, func_sat, coherent, extend, translate,
                      validate_model})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const expecta::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const expecta::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
