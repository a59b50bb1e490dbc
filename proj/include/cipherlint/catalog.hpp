#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "cipherlint/fold.hpp"

namespace cipherlint {

// --- rules and libraries ----------------------------------------------------

enum class Rule { R1, R2, R3, R4, R5, R6 };

constexpr std::array<Rule, 6> all_rules() {
    return {Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6};
}

inline std::string_view rule_id(Rule r) {
    switch (r) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::R4: return "R4";
    case Rule::R5: return "R5";
    case Rule::R6: return "R6";
    }
    return "?";
}

inline std::string_view rule_title(Rule r) {
    switch (r) {
    case Rule::R1: return "do not encrypt with ECB mode";
    case Rule::R2: return "do not use a constant initialization vector for CBC";
    case Rule::R3: return "do not use a constant encryption key";
    case Rule::R4: return "do not derive keys from a constant or missing salt";
    case Rule::R5: return "use at least 1000 iterations when deriving keys from passwords";
    case Rule::R6: return "do not seed a pseudorandom generator with a constant";
    }
    return "?";
}

inline std::optional<Rule> rule_from_id(std::string_view id) {
    for (Rule r : all_rules())
        if (rule_id(r) == id) return r;
    return std::nullopt;
}

enum class Library { Cryptography, M2Crypto, PyCrypto, PyNaCl, Ucryptolib };

constexpr std::array<Library, 5> all_libraries() {
    return {Library::Cryptography, Library::M2Crypto, Library::PyCrypto, Library::PyNaCl,
            Library::Ucryptolib};
}

inline std::string_view library_name(Library lib) {
    switch (lib) {
    case Library::Cryptography: return "cryptography";
    case Library::M2Crypto: return "M2Crypto";
    case Library::PyCrypto: return "PyCrypto";
    case Library::PyNaCl: return "PyNaCl";
    case Library::Ucryptolib: return "ucryptolib";
    }
    return "?";
}

inline std::optional<Library> library_from_name(std::string_view name) {
    for (Library lib : all_libraries())
        if (library_name(lib) == name) return lib;
    return std::nullopt;
}

/// Which checks make sense for which API: the analyzer never emits a finding
/// for a cell outside this map, and catalog loading rejects patterns there.
/// The sixth rule concerns seeded PRNG APIs that none of the supported
/// libraries expose, so it stays metadata-only.
inline bool rule_applies(Library lib, Rule rule) {
    switch (lib) {
    case Library::Cryptography:
    case Library::M2Crypto:
    case Library::PyCrypto:
        return rule != Rule::R6;
    case Library::PyNaCl:
        return rule == Rule::R3 || rule == Rule::R4;
    case Library::Ucryptolib:
        return rule == Rule::R1 || rule == Rule::R2 || rule == Rule::R3;
    }
    return false;
}

inline constexpr int kMinPbeIterations = 1000;

// --- predicates over folded values -------------------------------------------

/// Match: the tested property holds. NoMatch: it provably does not.
/// Unknown: the value's shape does not answer the question.
enum class Verdict { Match, NoMatch, Unknown };

enum class PredicateKind { EcbMode, CbcMode, ConstantBytes, LowIterationCount };

inline std::string_view predicate_name(PredicateKind k) {
    switch (k) {
    case PredicateKind::EcbMode: return "ecb-mode";
    case PredicateKind::CbcMode: return "cbc-mode";
    case PredicateKind::ConstantBytes: return "constant-bytes";
    case PredicateKind::LowIterationCount: return "low-iteration-count";
    }
    return "?";
}

inline std::optional<PredicateKind> predicate_from_name(std::string_view name) {
    if (name == "ecb-mode") return PredicateKind::EcbMode;
    if (name == "cbc-mode") return PredicateKind::CbcMode;
    if (name == "constant-bytes") return PredicateKind::ConstantBytes;
    if (name == "low-iteration-count") return PredicateKind::LowIterationCount;
    return std::nullopt;
}

namespace detail {

inline std::string_view last_segment(std::string_view path) {
    size_t dot = path.rfind('.');
    return dot == std::string_view::npos ? path : path.substr(dot + 1);
}

inline bool known_mode_segment(std::string_view seg) {
    static const std::unordered_set<std::string_view> names = {
        "ECB", "CBC",  "CFB", "CFB8", "OFB", "CTR", "GCM", "XTS",
        "MODE_ECB", "MODE_CBC", "MODE_CFB", "MODE_OFB", "MODE_CTR", "MODE_OPENPGP",
        "MODE_EAX", "MODE_GCM", "MODE_CCM", "MODE_SIV", "MODE_OCB"};
    return names.count(seg) > 0;
}

inline bool str_names_mode(std::string_view s, std::string_view infix) {
    return s.find(infix) != std::string_view::npos;
}

inline bool str_names_any_mode(std::string_view s) {
    for (std::string_view m : {"_ecb", "_cbc", "_cfb", "_ofb", "_ctr", "_gcm", "_xts"})
        if (str_names_mode(s, m)) return true;
    return false;
}

// numeric mode selectors: these APIs use small-int constants, ECB=1, CBC=2
inline bool numeric_mode_library(Library lib) {
    return lib == Library::PyCrypto || lib == Library::Ucryptolib;
}

inline Verdict judge_mode(Library lib, const ConstValue& v, std::string_view enum_match,
                          long long int_match, std::string_view str_infix) {
    switch (v.kind) {
    case ConstValue::Kind::EnumConst: {
        if (v.random_source) return Verdict::NoMatch;
        std::string_view seg = last_segment(v.enum_path);
        if (seg == enum_match || seg == std::string("MODE_").append(enum_match))
            return Verdict::Match;
        if (known_mode_segment(seg)) return Verdict::NoMatch;
        return Verdict::Unknown;
    }
    case ConstValue::Kind::Int:
        if (!numeric_mode_library(lib)) return Verdict::Unknown;
        return v.number == int_match ? Verdict::Match : Verdict::NoMatch;
    case ConstValue::Kind::Str:
        if (lib != Library::M2Crypto) return Verdict::Unknown;
        if (str_names_mode(v.data, str_infix)) return Verdict::Match;
        if (str_names_any_mode(v.data)) return Verdict::NoMatch;
        return Verdict::Unknown;
    case ConstValue::Kind::Bytes:
        return Verdict::Unknown;
    }
    return Verdict::Unknown;
}

} // namespace detail

inline Verdict evaluate_predicate(PredicateKind kind, Library lib, const ConstValue& value,
                                  int threshold) {
    switch (kind) {
    case PredicateKind::EcbMode:
        return detail::judge_mode(lib, value, "ECB", 1, "_ecb");
    case PredicateKind::CbcMode:
        return detail::judge_mode(lib, value, "CBC", 2, "_cbc");
    case PredicateKind::ConstantBytes:
        switch (value.kind) {
        case ConstValue::Kind::Bytes:
        case ConstValue::Kind::Str:
            return Verdict::Match;
        case ConstValue::Kind::EnumConst:
            return value.random_source ? Verdict::NoMatch : Verdict::Unknown;
        case ConstValue::Kind::Int:
            return Verdict::Unknown;
        }
        return Verdict::Unknown;
    case PredicateKind::LowIterationCount:
        if (value.kind != ConstValue::Kind::Int) return Verdict::Unknown;
        return value.number < threshold ? Verdict::Match : Verdict::NoMatch;
    }
    return Verdict::Unknown;
}

// --- call patterns ------------------------------------------------------------

/// Locates one argument of a call: by position, by any of several keyword
/// spellings, or both.
struct ArgSelector {
    int position = -1;
    std::vector<std::string> keywords;

    bool operator==(const ArgSelector&) const = default;
};

/// Behavior when the selected argument is not passed at all.
///   NotApplicable:   the pattern does not fire
///   InsecureDefault: the library's own default violates the rule
///   SecureDefault:   the library's own default satisfies the rule
enum class WhenAbsent { NotApplicable, InsecureDefault, SecureDefault };

inline std::string_view when_absent_name(WhenAbsent w) {
    switch (w) {
    case WhenAbsent::NotApplicable: return "not-applicable";
    case WhenAbsent::InsecureDefault: return "insecure-default";
    case WhenAbsent::SecureDefault: return "secure-default";
    }
    return "?";
}

inline std::optional<WhenAbsent> when_absent_from_name(std::string_view name) {
    if (name == "not-applicable") return WhenAbsent::NotApplicable;
    if (name == "insecure-default") return WhenAbsent::InsecureDefault;
    if (name == "secure-default") return WhenAbsent::SecureDefault;
    return std::nullopt;
}

/// Restricts a pattern to calls where another argument matches a predicate
/// (e.g. the IV check only applies when the mode argument selects CBC).
/// Calls where the guard argument cannot be resolved are skipped.
struct ArgGuard {
    ArgSelector argument;
    PredicateKind predicate = PredicateKind::CbcMode;

    bool operator==(const ArgGuard&) const = default;
};

struct CallPattern {
    Rule rule = Rule::R1;
    Library library = Library::PyCrypto;
    std::string callee; // qualified dotted path, after package aliasing
    ArgSelector argument;
    PredicateKind predicate = PredicateKind::EcbMode;
    int threshold = kMinPbeIterations; // LowIterationCount bound
    WhenAbsent when_absent = WhenAbsent::NotApplicable;
    std::optional<ArgGuard> guard;
    std::string note; // the upstream signature this pattern mirrors

    bool operator==(const CallPattern&) const = default;
};

// --- catalog ------------------------------------------------------------------

class RuleCatalog {
public:
    static RuleCatalog builtin();

    const std::vector<CallPattern>& patterns() const { return patterns_; }

    bool applicable(Library lib, Rule rule) const { return rule_applies(lib, rule); }

    std::vector<Rule> applicable_rules(Library lib) const {
        std::vector<Rule> out;
        for (Rule r : all_rules())
            if (rule_applies(lib, r)) out.push_back(r);
        return out;
    }

    std::vector<const CallPattern*> patterns_for(Library lib, Rule rule) const {
        std::vector<const CallPattern*> out;
        for (const CallPattern& p : patterns_)
            if (p.library == lib && p.rule == rule) out.push_back(&p);
        return out;
    }

    /// Rejects patterns for (library, rule) cells the analysis does not cover.
    bool add_pattern(CallPattern p, std::string* error = nullptr) {
        if (!rule_applies(p.library, p.rule)) {
            if (error)
                *error = std::string(rule_id(p.rule)) + " is not checked for " +
                         std::string(library_name(p.library));
            return false;
        }
        if (p.callee.empty()) {
            if (error) *error = "pattern has empty callee";
            return false;
        }
        if (p.argument.position < 0 && p.argument.keywords.empty()) {
            if (error) *error = "pattern for " + p.callee + " selects no argument";
            return false;
        }
        patterns_.push_back(std::move(p));
        return true;
    }

    /// Every covered (library, rule) cell must be backed by a pattern;
    /// an applicable cell nothing can detect would silently never fire.
    std::string validate() const {
        for (Library lib : all_libraries()) {
            for (Rule r : all_rules()) {
                if (!rule_applies(lib, r)) continue;
                if (patterns_for(lib, r).empty())
                    return "no patterns cover " + std::string(rule_id(r)) + " for " +
                           std::string(library_name(lib));
            }
        }
        return {};
    }

    // tables consumed by constant folding and callee resolution
    const std::unordered_set<std::string>& enum_paths() const { return enum_paths_; }
    const std::unordered_set<std::string>& enum_constructor_paths() const {
        return enum_constructors_;
    }
    const std::unordered_set<std::string>& random_source_paths() const {
        return random_sources_;
    }
    const std::unordered_set<std::string>& external_input_paths() const {
        return external_inputs_;
    }
    const std::unordered_map<std::string, std::string>& root_aliases() const {
        return root_aliases_;
    }

    FoldContext fold_context(const ImportMap& imports, bool suffix_match = false) const {
        FoldContext ctx;
        ctx.imports = &imports;
        ctx.enum_paths = &enum_paths_;
        ctx.enum_constructors = &enum_constructors_;
        ctx.random_sources = &random_sources_;
        ctx.root_aliases = &root_aliases_;
        ctx.suffix_match = suffix_match;
        return ctx;
    }

    nlohmann::ordered_json to_json() const;
    static std::optional<RuleCatalog> from_json(const nlohmann::json& doc, std::string& error);

private:
    static void seed_tables(RuleCatalog& cat);

    std::vector<CallPattern> patterns_;
    std::unordered_set<std::string> enum_paths_;
    std::unordered_set<std::string> enum_constructors_;
    std::unordered_set<std::string> random_sources_;
    std::unordered_set<std::string> external_inputs_;
    std::unordered_map<std::string, std::string> root_aliases_;
};

// --- builtin catalog ----------------------------------------------------------

inline void RuleCatalog::seed_tables(RuleCatalog& cat) {
    // numeric/attribute mode selectors
    static const char* pycrypto_ciphers[] = {"AES", "DES", "DES3", "ARC2", "Blowfish", "CAST"};
    static const char* pycrypto_modes[] = {"MODE_ECB", "MODE_CBC", "MODE_CFB", "MODE_OFB",
                                           "MODE_CTR", "MODE_OPENPGP", "MODE_EAX", "MODE_GCM",
                                           "MODE_CCM", "MODE_SIV", "MODE_OCB"};
    for (const char* c : pycrypto_ciphers)
        for (const char* m : pycrypto_modes)
            cat.enum_paths_.insert(std::string("Crypto.Cipher.") + c + "." + m);
    for (const char* m : {"MODE_ECB", "MODE_CBC", "MODE_CTR"})
        cat.enum_paths_.insert(std::string("ucryptolib.") + m);

    // mode objects constructed by call
    for (const char* m : {"ECB", "CBC", "CFB", "CFB8", "OFB", "CTR", "GCM", "XTS"})
        cat.enum_constructors_.insert(
            std::string("cryptography.hazmat.primitives.ciphers.modes.") + m);

    // calls whose result counts as fresh randomness, not a constant
    cat.random_sources_ = {
        "os.urandom",
        "os.getrandom",
        "uos.urandom",
        "secrets.token_bytes",
        "secrets.token_hex",
        "secrets.token_urlsafe",
        "Crypto.Random.get_random_bytes",
        "Crypto.Random.random.getrandbits",
        "nacl.utils.random",
        "M2Crypto.Rand.rand_bytes",
        "M2Crypto.m2.rand_bytes",
    };

    // values that arrive from outside the program text
    cat.external_inputs_ = {
        "os.getenv",   "os.environ", "os.environ.get", "getpass.getpass",
        "input",       "open",       "sys.argv",       "builtins.input",
        "builtins.open",
    };

    // packages importable under a second top-level name
    cat.root_aliases_ = {
        {"Cryptodome", "Crypto"}, // PyCryptodome installs either name
        {"cryptolib", "ucryptolib"},
    };
}

inline RuleCatalog RuleCatalog::builtin() {
    RuleCatalog cat;
    seed_tables(cat);

    auto add = [&cat](CallPattern p) {
        std::string err;
        bool ok = cat.add_pattern(std::move(p), &err);
        (void)ok;
    };

    ArgSelector arg;

    // Crypto.Cipher.<cipher>.new(key, mode, IV, ...) block ciphers.
    // Classic builds default the mode argument to ECB when omitted.
    for (const char* c : {"AES", "DES", "DES3", "ARC2", "Blowfish", "CAST"}) {
        std::string callee = std::string("Crypto.Cipher.") + c + ".new";
        std::string sig = callee + "(key, mode, IV=..., iv=...)";
        add({Rule::R1, Library::PyCrypto, callee, ArgSelector{1, {"mode"}},
             PredicateKind::EcbMode, kMinPbeIterations, WhenAbsent::InsecureDefault,
             std::nullopt, sig});
        add({Rule::R2, Library::PyCrypto, callee, ArgSelector{2, {"iv", "IV"}},
             PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
             ArgGuard{ArgSelector{1, {"mode"}}, PredicateKind::CbcMode}, sig});
        add({Rule::R3, Library::PyCrypto, callee, ArgSelector{0, {"key"}},
             PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
             std::nullopt, sig});
    }
    // stream ciphers: only the key is checkable
    for (const char* c : {"ARC4", "ChaCha20", "Salsa20"}) {
        std::string callee = std::string("Crypto.Cipher.") + c + ".new";
        add({Rule::R3, Library::PyCrypto, callee, ArgSelector{0, {"key"}},
             PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
             std::nullopt, callee + "(key, ...)"});
    }
    add({Rule::R4, Library::PyCrypto, "Crypto.Protocol.KDF.PBKDF2", ArgSelector{1, {"salt"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "PBKDF2(password, salt, dkLen=16, count=1000, ...)"});
    // the upstream default count equals the floor, so an omitted count passes
    add({Rule::R5, Library::PyCrypto, "Crypto.Protocol.KDF.PBKDF2", ArgSelector{3, {"count"}},
         PredicateKind::LowIterationCount, kMinPbeIterations, WhenAbsent::SecureDefault,
         std::nullopt, "PBKDF2(password, salt, dkLen=16, count=1000, ...)"});
    add({Rule::R4, Library::PyCrypto, "Crypto.Protocol.KDF.scrypt", ArgSelector{1, {"salt"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "scrypt(password, salt, key_len, N, r, p)"});

    // cryptography.hazmat: the mode argument of Cipher carries ECB selection,
    // the CBC mode object carries the IV, algorithm objects carry the key.
    const std::string ciphers = "cryptography.hazmat.primitives.ciphers";
    add({Rule::R1, Library::Cryptography, ciphers + ".Cipher", ArgSelector{1, {"mode"}},
         PredicateKind::EcbMode, kMinPbeIterations, WhenAbsent::NotApplicable, std::nullopt,
         "Cipher(algorithm, mode, backend=None)"});
    add({Rule::R2, Library::Cryptography, ciphers + ".modes.CBC",
         ArgSelector{0, {"initialization_vector"}}, PredicateKind::ConstantBytes,
         kMinPbeIterations, WhenAbsent::NotApplicable, std::nullopt,
         "modes.CBC(initialization_vector)"});
    for (const char* a : {"AES", "AES128", "AES256", "TripleDES", "Camellia", "Blowfish",
                          "CAST5", "SEED", "IDEA", "ARC4", "ChaCha20"}) {
        add({Rule::R3, Library::Cryptography, ciphers + ".algorithms." + a,
             ArgSelector{0, {"key"}}, PredicateKind::ConstantBytes, kMinPbeIterations,
             WhenAbsent::NotApplicable, std::nullopt,
             std::string("algorithms.") + a + "(key)"});
    }
    add({Rule::R3, Library::Cryptography, "cryptography.fernet.Fernet", ArgSelector{0, {"key"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "Fernet(key)"});
    const std::string kdf = "cryptography.hazmat.primitives.kdf";
    add({Rule::R4, Library::Cryptography, kdf + ".pbkdf2.PBKDF2HMAC", ArgSelector{2, {"salt"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "PBKDF2HMAC(algorithm, length, salt, iterations, backend=None)"});
    add({Rule::R5, Library::Cryptography, kdf + ".pbkdf2.PBKDF2HMAC",
         ArgSelector{3, {"iterations"}}, PredicateKind::LowIterationCount, kMinPbeIterations,
         WhenAbsent::NotApplicable, std::nullopt,
         "PBKDF2HMAC(algorithm, length, salt, iterations, backend=None)"});
    add({Rule::R4, Library::Cryptography, kdf + ".scrypt.Scrypt", ArgSelector{0, {"salt"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "Scrypt(salt, length, n, r, p, backend=None)"});

    // M2Crypto.EVP: one constructor carries algorithm string, key, IV, salt
    // and iteration count. Only explicitly passed arguments are judged.
    const std::string evp = "M2Crypto.EVP.Cipher";
    const std::string evp_sig =
        "Cipher(alg, key, iv, op, key_as_bytes=0, d='md5', salt=..., i=1, padding=1)";
    add({Rule::R1, Library::M2Crypto, evp, ArgSelector{0, {"alg"}}, PredicateKind::EcbMode,
         kMinPbeIterations, WhenAbsent::NotApplicable, std::nullopt, evp_sig});
    add({Rule::R2, Library::M2Crypto, evp, ArgSelector{2, {"iv"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         ArgGuard{ArgSelector{0, {"alg"}}, PredicateKind::CbcMode}, evp_sig});
    add({Rule::R3, Library::M2Crypto, evp, ArgSelector{1, {"key"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, evp_sig});
    add({Rule::R4, Library::M2Crypto, evp, ArgSelector{6, {"salt"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, evp_sig});
    add({Rule::R5, Library::M2Crypto, evp, ArgSelector{7, {"i"}},
         PredicateKind::LowIterationCount, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, evp_sig});
    add({Rule::R4, Library::M2Crypto, "M2Crypto.EVP.pbkdf2", ArgSelector{1, {"salt"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "pbkdf2(password, salt, iter, keylen)"});
    add({Rule::R5, Library::M2Crypto, "M2Crypto.EVP.pbkdf2", ArgSelector{2, {"iter"}},
         PredicateKind::LowIterationCount, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "pbkdf2(password, salt, iter, keylen)"});

    // PyNaCl: secret-key objects and password hashing
    add({Rule::R3, Library::PyNaCl, "nacl.secret.SecretBox", ArgSelector{0, {"key"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "SecretBox(key, encoder=...)"});
    add({Rule::R3, Library::PyNaCl, "nacl.signing.SigningKey", ArgSelector{0, {"seed"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "SigningKey(seed, encoder=...)"});
    for (const char* mod : {"argon2i", "argon2id", "scrypt"}) {
        add({Rule::R4, Library::PyNaCl, std::string("nacl.pwhash.") + mod + ".kdf",
             ArgSelector{2, {"salt"}}, PredicateKind::ConstantBytes, kMinPbeIterations,
             WhenAbsent::NotApplicable, std::nullopt,
             std::string(mod) + ".kdf(size, password, salt, opslimit=..., memlimit=...)"});
    }

    // ucryptolib (MicroPython): one constructor, numeric mode selectors
    add({Rule::R1, Library::Ucryptolib, "ucryptolib.aes", ArgSelector{1, {"mode"}},
         PredicateKind::EcbMode, kMinPbeIterations, WhenAbsent::NotApplicable, std::nullopt,
         "aes(key, mode, IV=None)"});
    add({Rule::R2, Library::Ucryptolib, "ucryptolib.aes", ArgSelector{2, {"IV", "iv"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         ArgGuard{ArgSelector{1, {"mode"}}, PredicateKind::CbcMode}, "aes(key, mode, IV=None)"});
    add({Rule::R3, Library::Ucryptolib, "ucryptolib.aes", ArgSelector{0, {"key"}},
         PredicateKind::ConstantBytes, kMinPbeIterations, WhenAbsent::NotApplicable,
         std::nullopt, "aes(key, mode, IV=None)"});

    return cat;
}

// --- JSON round trip ------------------------------------------------------------

inline nlohmann::ordered_json selector_to_json(const ArgSelector& s) {
    nlohmann::ordered_json j;
    j["position"] = s.position;
    j["keywords"] = s.keywords;
    return j;
}

inline nlohmann::ordered_json RuleCatalog::to_json() const {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    nlohmann::ordered_json rules = nlohmann::ordered_json::array();
    for (Rule r : all_rules()) {
        nlohmann::ordered_json jr;
        jr["id"] = std::string(rule_id(r));
        jr["title"] = std::string(rule_title(r));
        nlohmann::ordered_json libs = nlohmann::ordered_json::array();
        for (Library lib : all_libraries())
            if (rule_applies(lib, r)) libs.push_back(std::string(library_name(lib)));
        jr["applies_to"] = std::move(libs);
        rules.push_back(std::move(jr));
    }
    doc["rules"] = std::move(rules);
    nlohmann::ordered_json pats = nlohmann::ordered_json::array();
    for (const CallPattern& p : patterns_) {
        nlohmann::ordered_json jp;
        jp["rule"] = std::string(rule_id(p.rule));
        jp["library"] = std::string(library_name(p.library));
        jp["callee"] = p.callee;
        jp["argument"] = selector_to_json(p.argument);
        jp["predicate"] = std::string(predicate_name(p.predicate));
        if (p.predicate == PredicateKind::LowIterationCount) jp["threshold"] = p.threshold;
        jp["when_absent"] = std::string(when_absent_name(p.when_absent));
        if (p.guard) {
            nlohmann::ordered_json jg;
            jg["argument"] = selector_to_json(p.guard->argument);
            jg["predicate"] = std::string(predicate_name(p.guard->predicate));
            jp["guard"] = std::move(jg);
        }
        if (!p.note.empty()) jp["note"] = p.note;
        pats.push_back(std::move(jp));
    }
    doc["patterns"] = std::move(pats);
    return doc;
}

namespace detail {

inline bool selector_from_json(const nlohmann::json& j, ArgSelector& out, std::string& error) {
    if (!j.is_object()) {
        error = "argument selector must be an object";
        return false;
    }
    out.position = j.value("position", -1);
    out.keywords.clear();
    if (j.contains("keywords")) {
        if (!j["keywords"].is_array()) {
            error = "selector keywords must be an array";
            return false;
        }
        for (const auto& k : j["keywords"]) {
            if (!k.is_string()) {
                error = "selector keywords must be strings";
                return false;
            }
            out.keywords.push_back(k.get<std::string>());
        }
    }
    return true;
}

} // namespace detail

inline std::optional<RuleCatalog> RuleCatalog::from_json(const nlohmann::json& doc,
                                                         std::string& error) {
    if (!doc.is_object() || !doc.contains("patterns") || !doc["patterns"].is_array()) {
        error = "catalog document must be an object with a patterns array";
        return std::nullopt;
    }
    if (doc.value("schema_version", 1) != 1) {
        error = "unsupported catalog schema_version";
        return std::nullopt;
    }
    RuleCatalog cat;
    seed_tables(cat);
    for (const auto& jp : doc["patterns"]) {
        if (!jp.is_object()) {
            error = "pattern entries must be objects";
            return std::nullopt;
        }
        CallPattern p;
        auto rule = rule_from_id(jp.value("rule", ""));
        if (!rule) {
            error = "unknown rule id '" + jp.value("rule", "") + "'";
            return std::nullopt;
        }
        p.rule = *rule;
        auto lib = library_from_name(jp.value("library", ""));
        if (!lib) {
            error = "unknown library '" + jp.value("library", "") + "'";
            return std::nullopt;
        }
        p.library = *lib;
        p.callee = jp.value("callee", "");
        if (!jp.contains("argument") ||
            !detail::selector_from_json(jp["argument"], p.argument, error)) {
            if (error.empty()) error = "pattern for " + p.callee + " lacks an argument selector";
            return std::nullopt;
        }
        auto pred = predicate_from_name(jp.value("predicate", ""));
        if (!pred) {
            error = "unknown predicate '" + jp.value("predicate", "") + "'";
            return std::nullopt;
        }
        p.predicate = *pred;
        p.threshold = jp.value("threshold", kMinPbeIterations);
        auto absent = when_absent_from_name(jp.value("when_absent", "not-applicable"));
        if (!absent) {
            error = "unknown when_absent value '" + jp.value("when_absent", "") + "'";
            return std::nullopt;
        }
        p.when_absent = *absent;
        if (jp.contains("guard")) {
            const auto& jg = jp["guard"];
            ArgGuard g;
            if (!jg.is_object() || !jg.contains("argument") ||
                !detail::selector_from_json(jg["argument"], g.argument, error)) {
                if (error.empty()) error = "guard of " + p.callee + " lacks an argument selector";
                return std::nullopt;
            }
            auto gp = predicate_from_name(jg.value("predicate", ""));
            if (!gp) {
                error = "unknown guard predicate '" + jg.value("predicate", "") + "'";
                return std::nullopt;
            }
            g.predicate = *gp;
            p.guard = std::move(g);
        }
        p.note = jp.value("note", "");
        if (!cat.add_pattern(std::move(p), &error)) return std::nullopt;
    }
    std::string missing = cat.validate();
    if (!missing.empty()) {
        error = missing;
        return std::nullopt;
    }
    return cat;
}

} // namespace cipherlint
