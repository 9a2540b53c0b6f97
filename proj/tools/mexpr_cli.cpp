// Command-line front end for the mexpr shared library. Everything goes
// through the C API in mexpr/mexpr.h.

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mexpr/mexpr.h"

namespace {

constexpr int kExitParseError = 2;
constexpr int kExitEvalError = 3;
constexpr int kExitFuzzFailure = 4;

struct TreeDeleter {
    void operator()(mexpr_tree* t) const { mexpr_tree_free(t); }
};
struct ExprDeleter {
    void operator()(mexpr_expr* e) const { mexpr_expr_free(e); }
};
struct BindingsDeleter {
    void operator()(mexpr_bindings* b) const { mexpr_bindings_free(b); }
};
using TreePtr = std::unique_ptr<mexpr_tree, TreeDeleter>;
using ExprPtr = std::unique_ptr<mexpr_expr, ExprDeleter>;
using BindingsPtr = std::unique_ptr<mexpr_bindings, BindingsDeleter>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    mexpr_string_free(s);
    return out;
}

void print_parse_error(const std::string& source, const mexpr_error& err) {
    std::fprintf(stderr, "error: %s\n", err.message);
    std::fprintf(stderr, "  %s\n", source.c_str());
    std::fprintf(stderr, "  %*s^\n", static_cast<int>(err.offset), "");
}

TreePtr parse_or_exit(const std::string& expr) {
    mexpr_error err;
    TreePtr tree(mexpr_parse(expr.c_str(), &err));
    if (!tree) {
        print_parse_error(expr, err);
        std::exit(kExitParseError);
    }
    return tree;
}

std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

std::string format_complex(double re, double im) {
    std::string out = format_double(re);
    out += std::signbit(im) && !std::isnan(im) ? "-" : "+";
    out += format_double(std::isnan(im) ? im : std::fabs(im));
    out += "i";
    return out;
}

// --- -D sym=value handling -------------------------------------------------

struct Definition {
    std::string name;
    std::string value;
};

std::vector<Definition> split_defs(const std::vector<std::string>& raw) {
    std::vector<Definition> defs;
    for (const std::string& d : raw) {
        auto eq = d.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "error: -D expects sym=value, got `%s`\n", d.c_str());
            std::exit(kExitParseError);
        }
        defs.push_back({d.substr(0, eq), d.substr(eq + 1)});
    }
    return defs;
}

bool parse_complex_literal(const std::string& text, double* re, double* im) {
    // accepted forms: a, bi, i, -i, a+bi, a-bi
    *re = 0.0;
    *im = 0.0;
    std::string s = text;
    if (s.empty())
        return false;
    if (s.back() == 'i') {
        s.pop_back();
        // find the split between real and imaginary parts, skipping a leading sign
        std::size_t split = std::string::npos;
        for (std::size_t i = s.size(); i-- > 1;) {
            if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
                split = i;
                break;
            }
        }
        std::string im_text = split == std::string::npos ? s : s.substr(split);
        if (im_text.empty() || im_text == "+" || im_text == "-")
            im_text += "1";
        char* end = nullptr;
        *im = std::strtod(im_text.c_str(), &end);
        if (*end != '\0')
            return false;
        if (split != std::string::npos) {
            std::string re_text = s.substr(0, split);
            *re = std::strtod(re_text.c_str(), &end);
            if (re_text.empty() || *end != '\0')
                return false;
        }
        return true;
    }
    char* end = nullptr;
    *re = std::strtod(s.c_str(), &end);
    return *end == '\0';
}

BindingsPtr make_bindings(mexpr_algebra algebra, const std::vector<Definition>& defs) {
    BindingsPtr b(mexpr_bindings_new(algebra));
    mexpr_error err;
    for (const Definition& d : defs) {
        int rc = MEXPR_OK;
        switch (algebra) {
        case MEXPR_ALGEBRA_REAL: {
            char* end = nullptr;
            double v = std::strtod(d.value.c_str(), &end);
            if (d.value.empty() || *end != '\0') {
                std::fprintf(stderr, "error: bad real value for %s: `%s`\n",
                             d.name.c_str(), d.value.c_str());
                std::exit(kExitParseError);
            }
            rc = mexpr_bindings_set_real(b.get(), d.name.c_str(), v, &err);
            break;
        }
        case MEXPR_ALGEBRA_COMPLEX: {
            double re, im;
            if (!parse_complex_literal(d.value, &re, &im)) {
                std::fprintf(stderr, "error: bad complex value for %s: `%s`\n",
                             d.name.c_str(), d.value.c_str());
                std::exit(kExitParseError);
            }
            rc = mexpr_bindings_set_complex(b.get(), d.name.c_str(), re, im, &err);
            break;
        }
        case MEXPR_ALGEBRA_INT: {
            char* end = nullptr;
            long long v = std::strtoll(d.value.c_str(), &end, 10);
            if (d.value.empty() || *end != '\0') {
                std::fprintf(stderr, "error: bad integer value for %s: `%s`\n",
                             d.name.c_str(), d.value.c_str());
                std::exit(kExitParseError);
            }
            rc = mexpr_bindings_set_int(b.get(), d.name.c_str(), v, &err);
            break;
        }
        }
        if (rc != MEXPR_OK) {
            std::fprintf(stderr, "error: %s\n", err.message);
            std::exit(kExitParseError);
        }
    }
    return b;
}

// --- subcommands -----------------------------------------------------------

int cmd_parse(const std::string& expr, const std::string& format) {
    TreePtr tree = parse_or_exit(expr);
    if (format == "json")
        std::printf("%s\n", take_string(mexpr_tree_to_json(tree.get())).c_str());
    else
        std::printf("%s\n", take_string(mexpr_tree_to_sexpr(tree.get())).c_str());
    return 0;
}

int cmd_eval(const std::string& expr, mexpr_algebra algebra, mexpr_backend backend,
             const std::vector<Definition>& defs) {
    TreePtr tree = parse_or_exit(expr);
    mexpr_error err;
    ExprPtr compiled(mexpr_compile(tree.get(), algebra, backend, 0, &err));
    if (!compiled) {
        std::fprintf(stderr, "error: %s\n", err.message);
        return kExitEvalError;
    }
    BindingsPtr bindings = make_bindings(algebra, defs);
    switch (algebra) {
    case MEXPR_ALGEBRA_REAL: {
        double out;
        if (mexpr_eval_real(compiled.get(), bindings.get(), &out, &err) != MEXPR_OK) {
            std::fprintf(stderr, "error: %s\n", err.message);
            return kExitEvalError;
        }
        std::printf("%s\n", format_double(out).c_str());
        return 0;
    }
    case MEXPR_ALGEBRA_COMPLEX: {
        double re, im;
        if (mexpr_eval_complex(compiled.get(), bindings.get(), &re, &im, &err) !=
            MEXPR_OK) {
            std::fprintf(stderr, "error: %s\n", err.message);
            return kExitEvalError;
        }
        std::printf("%s\n", format_complex(re, im).c_str());
        return 0;
    }
    case MEXPR_ALGEBRA_INT: {
        int64_t out;
        if (mexpr_eval_int(compiled.get(), bindings.get(), &out, &err) != MEXPR_OK) {
            std::fprintf(stderr, "error: %s\n", err.message);
            return kExitEvalError;
        }
        std::printf("%" PRId64 "\n", out);
        return 0;
    }
    }
    return kExitEvalError;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

int cmd_bench(const std::string& expr, uint64_t iterations, int warmup,
              const std::string& backends, bool as_json,
              std::vector<Definition> defs) {
    TreePtr tree = parse_or_exit(expr);
    if (defs.empty())
        defs.push_back({"x", "1.0"}); // harness default evaluation point
    BindingsPtr bindings = make_bindings(MEXPR_ALGEBRA_REAL, defs);

    mexpr_error err;
    mexpr_bench_row rows[8];
    size_t n = 0;
    int rc = mexpr_bench(tree.get(), bindings.get(), iterations, warmup, 5,
                         backends.empty() ? nullptr : backends.c_str(), rows, 8, &n,
                         &err);
    if (rc != MEXPR_OK) {
        std::fprintf(stderr, "error: %s\n", err.message);
        return err.status == MEXPR_ERR_PARSE ? kExitParseError : kExitEvalError;
    }

    bool wanted_raw = backends.empty() || backends.find("raw") != std::string::npos;
    bool got_raw = false;
    for (size_t i = 0; i < n; ++i)
        if (std::strcmp(rows[i].backend, "raw") == 0)
            got_raw = true;

    if (as_json) {
        std::string out = "{\"expr\":\"" + json_escape(expr) + "\",\"bindings\":{";
        for (size_t i = 0; i < defs.size(); ++i) {
            out += (i ? "," : "");
            out += "\"" + json_escape(defs[i].name) + "\":" + defs[i].value;
        }
        out += "},\"results\":[";
        for (size_t i = 0; i < n; ++i) {
            if (i)
                out += ",";
            out += "{\"backend\":\"" + std::string(rows[i].backend) + "\"";
            out += ",\"mean_ns\":" + format_double(rows[i].mean_ns);
            out += ",\"stddev_ns\":" + format_double(rows[i].stddev_ns);
            out += ",\"throughput_hz\":" + format_double(rows[i].throughput_hz);
            out += ",\"checksum\":" + format_double(rows[i].checksum);
            out += "}";
        }
        out += "]}";
        std::printf("%s\n", out.c_str());
    } else {
        std::printf("expr: %s\n", expr.c_str());
        std::printf("%-12s %12s %12s %12s %16s %22s\n", "backend", "iterations",
                    "mean_ns", "stddev_ns", "throughput_hz", "checksum");
        for (size_t i = 0; i < n; ++i) {
            std::printf("%-12s %12" PRIu64 " %12.2f %12.2f %16.0f %22.10g\n",
                        rows[i].backend, rows[i].iterations, rows[i].mean_ns,
                        rows[i].stddev_ns, rows[i].throughput_hz, rows[i].checksum);
        }
        if (wanted_raw && !got_raw)
            std::printf("note: raw baseline omitted (expression is not the built-in "
                        "benchmark formula)\n");
    }

    // all backends evaluated the same tree over the same bindings
    for (size_t i = 1; i < n; ++i) {
        if (std::memcmp(&rows[i].checksum, &rows[0].checksum, sizeof(double)) != 0) {
            std::fprintf(stderr, "error: checksum mismatch between %s and %s\n",
                         rows[0].backend, rows[i].backend);
            return kExitEvalError;
        }
    }
    return 0;
}

int cmd_emit(const std::string& expr, bool fold) {
    TreePtr tree = parse_or_exit(expr);
    mexpr_error err;
    char* text = mexpr_emit_text(tree.get(), fold ? 1 : 0, &err);
    if (!text) {
        std::fprintf(stderr, "error: %s\n", err.message);
        return kExitEvalError;
    }
    std::printf("%s", take_string(text).c_str());
    return 0;
}

int cmd_diff(const std::string& expr, const std::string& wrt) {
    TreePtr tree = parse_or_exit(expr);
    mexpr_error err;
    TreePtr derivative(mexpr_diff(tree.get(), wrt.c_str(), &err));
    if (!derivative) {
        std::fprintf(stderr, "error: %s\n", err.message);
        return kExitEvalError;
    }
    TreePtr simplified(mexpr_simplify(derivative.get()));
    std::printf("%s\n", take_string(mexpr_tree_pretty(simplified.get())).c_str());
    return 0;
}

// --- fuzz ------------------------------------------------------------------

// Shadow AST kept CLI-side so counterexamples can be shrunk; the engine only
// ever sees trees built through the C API.
struct FuzzNode {
    enum class Kind { Symbol, Number, Unary, Binary } kind;
    std::string op;
    std::string sym;
    int64_t num = 0;
    std::shared_ptr<FuzzNode> a, b;
};
using FuzzNodePtr = std::shared_ptr<FuzzNode>;

const char* kFuzzSymbols[] = {"x", "y", "z"};
const char* kFuzzUnary[] = {"neg", "sin", "cos", "tan", "asin", "acos",
                            "atan", "exp", "ln", "sqrt"};
const char* kFuzzBinary[] = {"+", "-", "*", "/", "pow"};

FuzzNodePtr gen_tree(std::mt19937_64& rng, int depth) {
    auto node = std::make_shared<FuzzNode>();
    std::uniform_int_distribution<int> pick(0, 99);
    int roll = pick(rng);
    if (depth <= 1 || roll < 30) {
        if (roll % 2 == 0) {
            node->kind = FuzzNode::Kind::Symbol;
            node->sym = kFuzzSymbols[static_cast<size_t>(pick(rng)) % 3];
        } else {
            node->kind = FuzzNode::Kind::Number;
            node->num = pick(rng) % 7;
        }
        return node;
    }
    if (roll < 60) {
        node->kind = FuzzNode::Kind::Unary;
        node->op = kFuzzUnary[static_cast<size_t>(pick(rng)) % 10];
        node->a = gen_tree(rng, depth - 1);
        return node;
    }
    node->kind = FuzzNode::Kind::Binary;
    node->op = kFuzzBinary[static_cast<size_t>(pick(rng)) % 5];
    node->a = gen_tree(rng, depth - 1);
    node->b = gen_tree(rng, depth - 1);
    return node;
}

TreePtr build_tree(const FuzzNode& n) {
    mexpr_error err;
    switch (n.kind) {
    case FuzzNode::Kind::Symbol:
        return TreePtr(mexpr_tree_symbol(n.sym.c_str(), &err));
    case FuzzNode::Kind::Number:
        return TreePtr(mexpr_tree_int(n.num));
    case FuzzNode::Kind::Unary: {
        TreePtr a = build_tree(*n.a);
        return TreePtr(mexpr_tree_unary(n.op.c_str(), a.get(), &err));
    }
    case FuzzNode::Kind::Binary: {
        TreePtr a = build_tree(*n.a);
        TreePtr b = build_tree(*n.b);
        return TreePtr(mexpr_tree_binary(n.op.c_str(), a.get(), b.get(), &err));
    }
    }
    return nullptr;
}

bool bitwise_equal(double a, double b) {
    if (std::isnan(a) && std::isnan(b))
        return true;
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

// Returns true when all four backends agree on this tree for these bindings.
bool backends_agree(const FuzzNode& shadow, const mexpr_bindings* bindings) {
    TreePtr tree = build_tree(shadow);
    if (!tree)
        return false;
    mexpr_error err;
    double reference = 0.0;
    bool have_reference = false;
    for (mexpr_backend backend :
         {MEXPR_BACKEND_INTERPRET, MEXPR_BACKEND_FUNCTIONAL, MEXPR_BACKEND_COMPILED,
          MEXPR_BACKEND_REAL}) {
        ExprPtr e(mexpr_compile(tree.get(), MEXPR_ALGEBRA_REAL, backend, 0, &err));
        if (!e)
            return false;
        double out;
        if (mexpr_eval_real(e.get(), bindings, &out, &err) != MEXPR_OK)
            return false;
        if (!have_reference) {
            reference = out;
            have_reference = true;
        } else if (!bitwise_equal(reference, out)) {
            return false;
        }
    }
    return true;
}

// Greedy shrink: while some direct subtree still reproduces the mismatch,
// descend into it.
FuzzNodePtr shrink(FuzzNodePtr failing, const mexpr_bindings* bindings) {
    for (;;) {
        FuzzNodePtr smaller;
        for (const FuzzNodePtr& child : {failing->a, failing->b}) {
            if (child && !backends_agree(*child, bindings)) {
                smaller = child;
                break;
            }
        }
        if (!smaller)
            return failing;
        failing = smaller;
    }
}

int cmd_fuzz(uint64_t count, int depth, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> value(-2.0, 2.0);

    uint64_t passed = 0;
    for (uint64_t i = 0; i < count; ++i) {
        FuzzNodePtr shadow = gen_tree(rng, depth);
        BindingsPtr bindings(mexpr_bindings_new(MEXPR_ALGEBRA_REAL));
        mexpr_error err;
        for (const char* sym : kFuzzSymbols)
            mexpr_bindings_set_real(bindings.get(), sym, value(rng), &err);

        if (backends_agree(*shadow, bindings.get())) {
            ++passed;
            continue;
        }
        FuzzNodePtr minimal = shrink(shadow, bindings.get());
        TreePtr min_tree = build_tree(*minimal);
        std::fprintf(stderr, "fuzz failure after %" PRIu64 " cases\n", i + 1);
        std::fprintf(stderr, "counterexample: %s\n",
                     take_string(mexpr_tree_to_sexpr(min_tree.get())).c_str());
        return kExitFuzzFailure;
    }
    std::printf("%" PRIu64 "/%" PRIu64 " backends agree\n", passed, count);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mexpr: mathematical expression engine"};
    app.require_subcommand(1);

    std::string expr, format = "sexpr", algebra_name = "real",
                backend_name = "interpret", wrt, backends_list;
    std::vector<std::string> defs_raw;
    bool fold = false, as_json = false;
    uint64_t iterations = 1000000, fuzz_count = 1000, seed = 0;
    int warmup = 5, fuzz_depth = 6;

    auto* parse_cmd = app.add_subcommand("parse", "parse an expression and print it");
    parse_cmd->add_option("expr", expr)->required();
    parse_cmd->add_option("--format", format)->check(CLI::IsMember({"sexpr", "json"}));

    auto* eval_cmd = app.add_subcommand("eval", "evaluate an expression");
    eval_cmd->add_option("expr", expr)->required();
    eval_cmd->add_option("--backend", backend_name)
        ->check(CLI::IsMember({"interpret", "functional", "compiled", "real"}));
    eval_cmd->add_option("--algebra", algebra_name)
        ->check(CLI::IsMember({"real", "complex", "int"}));
    eval_cmd->add_option("-D", defs_raw, "binding sym=value (repeatable)");

    auto* bench_cmd = app.add_subcommand("bench", "benchmark all backends");
    bench_cmd->add_option("expr", expr)->required();
    bench_cmd->add_option("--iterations", iterations)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--warmup", warmup)->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--backends", backends_list,
                          "comma list: interpret,functional,compiled,real,raw");
    bench_cmd->add_flag("--json", as_json);
    bench_cmd->add_option("-D", defs_raw, "binding sym=value (repeatable)");

    auto* emit_cmd = app.add_subcommand("emit", "emit portable text form");
    emit_cmd->add_option("expr", expr)->required();
    emit_cmd->add_flag("--fold", fold, "constant-fold symbol-free subtrees");

    auto* diff_cmd = app.add_subcommand("diff", "symbolic derivative");
    diff_cmd->add_option("expr", expr)->required();
    diff_cmd->add_option("--wrt", wrt)->required();

    auto* fuzz_cmd = app.add_subcommand("fuzz", "cross-backend differential fuzzing");
    fuzz_cmd->add_option("--count", fuzz_count);
    fuzz_cmd->add_option("--depth", fuzz_depth)->check(CLI::PositiveNumber);
    fuzz_cmd->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    mexpr_algebra algebra = algebra_name == "complex" ? MEXPR_ALGEBRA_COMPLEX
                            : algebra_name == "int"   ? MEXPR_ALGEBRA_INT
                                                      : MEXPR_ALGEBRA_REAL;
    mexpr_backend backend = backend_name == "functional" ? MEXPR_BACKEND_FUNCTIONAL
                            : backend_name == "compiled" ? MEXPR_BACKEND_COMPILED
                            : backend_name == "real"     ? MEXPR_BACKEND_REAL
                                                         : MEXPR_BACKEND_INTERPRET;

    if (parse_cmd->parsed())
        return cmd_parse(expr, format);
    if (eval_cmd->parsed())
        return cmd_eval(expr, algebra, backend, split_defs(defs_raw));
    if (bench_cmd->parsed())
        return cmd_bench(expr, iterations, warmup, backends_list, as_json,
                         split_defs(defs_raw));
    if (emit_cmd->parsed())
        return cmd_emit(expr, fold);
    if (diff_cmd->parsed())
        return cmd_diff(expr, wrt);
    if (fuzz_cmd->parsed())
        return cmd_fuzz(fuzz_count, fuzz_depth, seed);
    return 1;
}
