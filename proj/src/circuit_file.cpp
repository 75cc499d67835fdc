#include "cfrac/circuit_file.hpp"

#include "cfrac/format.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace cfrac {

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokenize(std::string text) {
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& s, int line, const std::string& key) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || s.empty()) fail(line, "malformed number for " + key + ": '" + s + "'");
    return v;
}

int parse_count(const std::string& s, int line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) fail(line, "REPEAT needs a count >= 0, got '" + s + "'");
    return v;
}

// KEY=VALUE tokens after the first `skip` tokens.
std::map<std::string, std::string> key_values(const Line& ln, std::size_t skip,
                                              std::initializer_list<const char*> allowed) {
    std::map<std::string, std::string> kv;
    for (std::size_t i = skip; i < ln.tokens.size(); ++i) {
        const std::string& t = ln.tokens[i];
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0) fail(ln.number, "expected KEY=VALUE, got '" + t + "'");
        std::string key = t.substr(0, eq);
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) fail(ln.number, "unknown key '" + key + "'");
        if (!kv.emplace(key, t.substr(eq + 1)).second) fail(ln.number, "duplicate key '" + key + "'");
    }
    return kv;
}

std::string require(const std::map<std::string, std::string>& kv, const std::string& key, int line) {
    auto it = kv.find(key);
    if (it == kv.end()) fail(line, "missing " + key + "=");
    return it->second;
}

template <class E>
E checked(E e, int line) {
    try {
        (void)CircuitChain(std::vector<Element>{Element{e}});
    } catch (const Error& err) {
        fail(line, err.what());
    }
    return e;
}

class Builder {
public:
    explicit Builder(std::filesystem::path base) : base_(std::move(base)) {}

    void apply(const Line& ln) {
        const std::string& d = ln.tokens[0];
        if (d == "PORT_SHUNT") {
            if (!els_.empty()) fail(ln.number, "PORT_SHUNT must be the first element");
            els_.emplace_back(Short{});
            els_.push_back(shunt_rc(ln));
        } else if (d == "SHUNT") {
            if (ln.tokens.size() >= 2 && ln.tokens[1] == "OPEN") {
                if (ln.tokens.size() != 2) fail(ln.number, "SHUNT OPEN takes no arguments");
                admittance_slot();
                els_.emplace_back(Open{});
            } else {
                Element e = shunt_rc(ln);
                admittance_slot();
                els_.push_back(std::move(e));
            }
        } else if (d == "SERIES") {
            Element e = series(ln);
            impedance_slot();
            els_.push_back(std::move(e));
        } else {
            fail(ln.number, "unknown directive '" + d + "'");
        }
    }

    CircuitChain finish() {
        if (els_.empty()) throw Error(ErrorKind::Parse, "no port element");
        return CircuitChain(std::move(els_));
    }

private:
    void admittance_slot() {
        if (els_.size() % 2 == 0) els_.emplace_back(Short{});
    }
    void impedance_slot() {
        if (els_.size() % 2 == 1) els_.emplace_back(Open{});
    }

    Element shunt_rc(const Line& ln) const {
        if (ln.tokens.size() < 2 || ln.tokens[1] != "RC") fail(ln.number, ln.tokens[0] + " expects RC G=<g> C=<c>");
        auto kv = key_values(ln, 2, {"G", "C"});
        ShuntRC rc{parse_number(require(kv, "G", ln.number), ln.number, "G"),
                   parse_number(require(kv, "C", ln.number), ln.number, "C")};
        return checked(rc, ln.number);
    }

    Element series(const Line& ln) const {
        if (ln.tokens.size() >= 2 && ln.tokens[1] == "SHORT") {
            if (ln.tokens.size() != 2) fail(ln.number, "SERIES SHORT takes no arguments");
            return Short{};
        }
        if (ln.tokens.size() < 2 || ln.tokens[1] != "STATIC") fail(ln.number, "SERIES expects STATIC KIND=<kind>");
        auto kv = key_values(ln, 2, {"KIND", "R", "FILE", "LIMIT", "MU", "LAMBDA"});
        const std::string kind = require(kv, "KIND", ln.number);
        auto reject = [&](std::initializer_list<const char*> keys) {
            for (const char* k : keys) {
                if (kv.count(k)) fail(ln.number, std::string(k) + "= is not valid for KIND=" + kind);
            }
        };
        std::optional<SectorBound> declared;
        if (kv.count("MU") || kv.count("LAMBDA")) {
            const double mu = parse_number(require(kv, "MU", ln.number), ln.number, "MU");
            const double lam = parse_number(require(kv, "LAMBDA", ln.number), ln.number, "LAMBDA");
            try {
                declared = SectorBound::make(mu, lam);
            } catch (const Error& err) {
                fail(ln.number, err.what());
            }
        }

        if (kind == "LINEAR") {
            reject({"FILE", "LIMIT", "MU", "LAMBDA"});
            return checked(LinearResistor{parse_number(require(kv, "R", ln.number), ln.number, "R")}, ln.number);
        }
        StaticNL e;
        if (kind == "TANH_PLUS_ID") {
            reject({"R", "FILE", "LIMIT"});
            e = StaticNL::tanh_plus_id();
        } else if (kind == "SATURATION") {
            reject({"R", "FILE"});
            try {
                e = StaticNL::saturation(parse_number(require(kv, "LIMIT", ln.number), ln.number, "LIMIT"));
            } catch (const Error& err) {
                if (err.kind() == ErrorKind::Parse) throw;
                fail(ln.number, err.what());
            }
        } else if (kind == "PWL") {
            reject({"R", "LIMIT"});
            const std::string file = require(kv, "FILE", ln.number);
            const std::filesystem::path path = std::filesystem::path(file).is_absolute() ? std::filesystem::path(file) : base_ / file;
            std::ifstream in(path);
            if (!in) throw Error(ErrorKind::Io, "line " + std::to_string(ln.number) + ": cannot open PWL table " + path.string());
            try {
                e = StaticNL::pwl(read_pwl_table(in), Orientation::Impedance, declared);
            } catch (const Error& err) {
                fail(ln.number, path.string() + ": " + err.what());
            }
            e.source = file;
            return e;
        } else {
            fail(ln.number, "unknown KIND '" + kind + "'");
        }
        if (declared) {
            // Stated for the series position; stored-orientation bounds follow by inversion.
            SectorBound stored = e.orientation == Orientation::Impedance ? *declared : declared->inverted();
            const SectorBound natural = e.intrinsic_sector();
            if (stored.mu > natural.mu || stored.lambda < natural.lambda) {
                fail(ln.number, "declared MU/LAMBDA do not contain the element's slope range");
            }
            e.sector = stored;
        }
        return checked(e, ln.number);
    }

    std::filesystem::path base_;
    std::vector<Element> els_;
};

// --- printing --------------------------------------------------------------

std::string shunt_line(const ShuntRC& rc) {
    return "SHUNT RC G=" + format_roundtrip(rc.conductance) + " C=" + format_roundtrip(rc.capacitance);
}

std::string series_line(const Element& e, const PwlNamer& namer, int& pwl_index) {
    if (std::holds_alternative<Short>(e)) return "SERIES SHORT";
    if (const auto* r = std::get_if<LinearResistor>(&e)) return "SERIES STATIC KIND=LINEAR R=" + format_roundtrip(r->resistance);
    const auto* s = std::get_if<StaticNL>(&e);
    if (!s) throw Error(ErrorKind::InvalidArgument, "print_circuit: " + describe(e) + " cannot sit at a series position");
    std::string line = "SERIES STATIC KIND=";
    switch (s->kind) {
        case StaticKind::TanhPlusId: line += "TANH_PLUS_ID"; break;
        case StaticKind::Saturation: line += "SATURATION LIMIT=" + format_roundtrip(s->limit); break;
        case StaticKind::Pwl: {
            if (s->orientation != Orientation::Impedance) {
                throw Error(ErrorKind::InvalidArgument, "print_circuit: series PWL tables must be impedance-oriented");
            }
            std::string file = namer ? namer(*s, pwl_index) : s->source;
            ++pwl_index;
            if (file.empty()) throw Error(ErrorKind::InvalidArgument, "print_circuit: PWL element without a file name");
            line += "PWL FILE=" + file;
            break;
        }
    }
    if (s->sector != s->intrinsic_sector()) {
        const SectorBound pos = s->orientation == Orientation::Impedance ? s->sector : s->sector.inverted();
        line += " MU=" + format_roundtrip(pos.mu) + " LAMBDA=" + format_roundtrip(pos.lambda);
    }
    return line;
}

}  // namespace

CircuitChain parse_circuit(std::istream& is, const std::filesystem::path& base_dir) {
    Builder b(base_dir);
    std::string text;
    int lineno = 0;
    int repeat_count = -1;  // -1 outside a REPEAT block
    int repeat_line = 0;
    std::vector<Line> block;
    while (std::getline(is, text)) {
        ++lineno;
        Line ln{lineno, tokenize(text)};
        if (ln.tokens.empty()) continue;
        const std::string& d = ln.tokens[0];
        if (d == "REPEAT") {
            if (repeat_count >= 0) fail(lineno, "nested REPEAT blocks are not supported");
            if (ln.tokens.size() != 2) fail(lineno, "REPEAT expects a count");
            repeat_count = parse_count(ln.tokens[1], lineno);
            repeat_line = lineno;
            block.clear();
        } else if (d == "END") {
            if (repeat_count < 0) fail(lineno, "END without REPEAT");
            if (ln.tokens.size() != 1) fail(lineno, "END takes no arguments");
            for (int k = 0; k < repeat_count; ++k) {
                for (const auto& l : block) b.apply(l);
            }
            repeat_count = -1;
        } else if (repeat_count >= 0) {
            block.push_back(std::move(ln));
        } else {
            b.apply(ln);
        }
    }
    if (repeat_count >= 0) fail(repeat_line, "REPEAT block is not closed by END");
    return b.finish();
}

CircuitChain parse_circuit_text(const std::string& text, const std::filesystem::path& base_dir) {
    std::istringstream is(text);
    return parse_circuit(is, base_dir);
}

CircuitChain read_circuit_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open circuit file " + path.string());
    return parse_circuit(in, path.parent_path());
}

void print_circuit(std::ostream& os, const CircuitChain& chain, const PwlNamer& namer) {
    const auto& els = chain.elements();
    const std::size_t n = els.size();
    int pwl_index = 0;
    std::vector<std::string> lines;
    std::size_t start = 0;
    if (n >= 2 && std::holds_alternative<Short>(els[0]) && std::holds_alternative<ShuntRC>(els[1])) {
        const auto& rc = std::get<ShuntRC>(els[1]);
        lines.push_back("PORT_SHUNT RC G=" + format_roundtrip(rc.conductance) + " C=" + format_roundtrip(rc.capacitance));
        start = 2;
    } else {
        lines.push_back(series_line(els[0], namer, pwl_index));
        start = 1;
    }
    // A filler is implied when the parser sees two shunts or two series
    // lines in a row, so it is only spelled out where that cannot happen.
    auto series_printed = [&](std::size_t k) {
        return !(std::holds_alternative<Short>(els[k]) && k + 1 < n && std::holds_alternative<ShuntRC>(els[k + 1]));
    };
    for (std::size_t k = start; k < n; ++k) {
        const Element& e = els[k];
        if (CircuitChain::position_orientation(k) == Orientation::Admittance) {
            if (const auto* rc = std::get_if<ShuntRC>(&e)) {
                lines.push_back(shunt_line(*rc));
            } else if (std::holds_alternative<Open>(e)) {
                if (!(k + 1 < n && series_printed(k + 1))) lines.push_back("SHUNT OPEN");
            } else {
                throw Error(ErrorKind::InvalidArgument, "print_circuit: " + describe(e) + " cannot sit at a shunt position");
            }
        } else if (series_printed(k)) {
            lines.push_back(series_line(e, namer, pwl_index));
        }
    }

    os << lines[0] << '\n';
    std::size_t i = 1;
    while (i < lines.size()) {
        std::size_t reps = 1;
        while (i + 2 * reps + 1 < lines.size() && lines[i + 2 * reps] == lines[i] && lines[i + 2 * reps + 1] == lines[i + 1]) {
            ++reps;
        }
        if (i + 1 < lines.size() && reps >= 2) {
            os << "REPEAT " << reps << '\n' << "  " << lines[i] << '\n' << "  " << lines[i + 1] << '\n' << "END\n";
            i += 2 * reps;
        } else {
            os << lines[i] << '\n';
            ++i;
        }
    }
}

void write_circuit_file(const std::filesystem::path& path, const CircuitChain& chain) {
    const std::filesystem::path dir = path.parent_path();
    const std::string stem = path.stem().string();
    PwlNamer namer = [&](const StaticNL& e, int index) {
        const std::string name = stem + "_pwl" + std::to_string(index) + ".txt";
        std::ofstream t(dir / name);
        if (!t) throw Error(ErrorKind::Io, "cannot write PWL table " + (dir / name).string());
        write_pwl_table(t, e.table);
        if (!t) throw Error(ErrorKind::Io, "failed writing PWL table " + (dir / name).string());
        return name;
    };
    std::ostringstream body;
    print_circuit(body, chain, namer);
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write circuit file " + path.string());
    out << body.str();
    if (!out) throw Error(ErrorKind::Io, "failed writing circuit file " + path.string());
}

}  // namespace cfrac
