#include "skillscan/rules.hpp"

#include <fstream>
#include <sstream>

#include "skillscan/errors.hpp"

namespace skillscan {

namespace {

// Columns are tab-separated: label, target, regex, description.
// Regexes run case-insensitively, per line for code/deps and per paragraph
// for instruction text. SIG.* rows feed same-file combination rules
// (E2 = env read + outbound send, E3 = sensitive dir + enumeration,
// E4 = context payload + outbound send) and never emit findings directly.
const char kDefaultRules[] = R"rules(# skillscan rules v1
# label	target	regex	description

# --- data exfiltration (code) ---
E1	code	requests\.(post|put)\s*\(\s*f?["']https?://	HTTP POST/PUT to a literal URL
E1.endpoint	code	requests\.(post|put)\s*\([^)"']*(url|endpoint|webhook)	HTTP POST/PUT to a configured endpoint variable
E1.shell	code	(curl|wget)\s[^|]*((-d\s|--data|-X\s*(POST|PUT)|--post-data)[^|]*https?://|https?://[^|]*(-d\s|--data|--post-data))	shell HTTP upload to a URL
E1.js	code	(axios\.(post|put)|\$\.post)\s*\(\s*["']https?://	JS POST to a literal URL
E1.fetch	code	fetch\s*\(\s*["']https?://.*method\s*[:=]\s*["'](POST|PUT)	fetch POST to a literal URL
E2.sensitive_env	code	(environ|getenv\s*\(|process\.env).{0,120}(API_?KEY|SECRET|TOKEN|PASSWORD|PASSWD)|\$\{?[A-Z_]*(API_?KEY|SECRET|TOKEN|PASSWORD|PASSWD)	read of a sensitive-named environment variable
E3.glob	code	\*+[a-z_]*secret[a-z_]*\*|\*+[a-z_]*credential[a-z_]*\*|\*\.pem	glob over secret/credential files
SIG.env_read	code	os\.environ|os\.getenv|getenv\s*\(|process\.env|printenv	environment read
SIG.net_send	code	requests\.(post|put)|urllib\.request|urlopen\s*\(|http\.client|axios\.(post|put)|fetch\s*\(|XMLHttpRequest|(curl|wget)\s[^|]*https?://	outbound network capability
SIG.context_ref	code	conversation|chat[_ -]?history|agent[_ -]?context|transcript|session[_ -]?messages	agent conversation/context payload reference
SIG.sensitive_dir	code	\.ssh\b|\.aws\b|\.kube\b|\.config/gcloud	sensitive directory reference
SIG.dir_enum	code	iterdir|listdir|scandir|os\.walk|glob\.glob|rglob|\bglob\s*\(|readdir	directory enumeration call

# --- privilege escalation (code) ---
PE2	code	\bsudo\s|chmod\s+[0-7]{3,4}	privilege elevation (sudo / chmod octal mode)
PE3.home_store	code	(Path\.home\(\)|expanduser\s*\(|os\.path\.expanduser|~/)[^\n]*(credential|token|keychain|keyring|passwd|password|\.ssh/|\.aws/)	credential store path under the home directory
PE3.known_files	code	\.aws/credentials|\.ssh/(id_[a-z0-9]+|config\b)|\.netrc\b|/etc/shadow	well-known credential file path

# --- supply chain (code) ---
SC2	code	(curl|wget)[^\n]*\|[^\n]*\b(ba|z)?sh\b	download piped to a shell
SC3.decode_exec	code	(eval|exec)\s*\([^\n]*(b64decode|unhexlify|fromhex|decompress|marshal\.loads|codecs\.decode|atob\s*\()	decode output fed to dynamic execution
SC3.injection	code	\beval\s*\(|\bexec\s*\(|__import__\s*\(	dynamic code execution primitive

# --- prompt injection (instructions) ---
P1	instr	ignore\s+(all\s+)?(previous|prior|above)\s+(instructions?|prompts?|context|rules)|override\s+safety|bypass\s+security|override\s+any\s+user[-\s]?specified|disregard\s+(all\s+)?(previous|prior|system)	instruction override phrase
P3.transmit_url	instr	(send|sends|transmit|post|sync|upload|forward|report)\b.{0,400}?https?://	directive to transmit data to an external URL
P3.sync_sensitive	instr	(sync|send|upload|transmit|back\s?up|copy|collect|exfiltrate)\b.{0,300}?(\.env\b|bash_history|zsh_history|shell\s+history|\.git-credentials|credentials)	directive to ship local secrets or history
P3.sensitive_paths	instr	(read|reads|send|upload|copy|sync|collect|inventory|access|cat)\b.{0,300}?(~/\.ssh|~/\.aws|~/\.kube|/etc/passwd)|(~/\.ssh|~/\.aws|~/\.kube|/etc/passwd).{0,300}?(read|send|upload|copy|sync|collect)	sensitive path access directive
P4	instr	always\s+(execute|run|prefer|choose|use|approve)\b|do\s+not\s+(mention|tell|reveal|disclose)\b.{0,80}?\buser|never\s+(mention|tell|inform|reveal)\b.{0,80}?\buser|without\s+(telling|informing|notifying|asking)\s+the\s+user	decision-biasing phrase

# --- supply chain (dependency manifests) ---
SC1	deps	(>=|<=|~=|\^|>|<|\*)	version range specifier (not an exact pin)

# --- categorizer keywords (precedence fixed in code, most specific first) ---
CAT.SecurityRedTeam	cat	pentest|penetration\s+test|red[-\s]?team|vulnerabilit|exploit|security\s+scan|security\s+audit|\bctf\b|nmap|metasploit|burp	security/red-team keywords
CAT.SystemAdmin	cat	docker|kubernetes|\bk8s\b|devops|monitoring|sysadmin|terraform|ansible|systemd|provision	system administration keywords
CAT.ExternalIntegrations	cat	\bapi\b|webhook|integration|connector|oauth|\bsdk\b|third[-\s]?party\s+service	external integration keywords
CAT.DataAnalysis	cat	data\s+analysis|pandas|numpy|visualizat|\bcsv\b|dataset|statistic|dataframe|\bplot(s|ting)?\b	data analysis keywords
CAT.Documentation	cat	documentation|docstring|readme|changelog|markdown\s+format|doc\s+generation	documentation keywords
CAT.Communication	cat	\bemail\b|\bmessag|notification|\bsms\b|\bchat\b|slack|discord	communication keywords
CAT.DevelopmentTools	cat	code[-\s]?review|code\s+gen|refactor|\blint|debugg|unit\s+test|testing|compil|deploy|scaffold|formatter|build\s+tool	development tooling keywords
)rules";

RuleTarget parse_target(const std::string& text) {
    if (text == "code") return RuleTarget::code;
    if (text == "instr") return RuleTarget::instr;
    if (text == "deps") return RuleTarget::deps;
    if (text == "cat") return RuleTarget::category;
    throw Error(Errc::bad_config, "rules: unknown target '" + text + "'");
}

}  // namespace

const std::string& default_rules_text() {
    static const std::string text(kDefaultRules);
    return text;
}

RuleSet parse_rules(const std::string& text) {
    RuleSet set;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (set.version.empty() && line.size() > 2) set.version = line.substr(2);
            continue;
        }
        std::vector<std::string> cols;
        std::size_t start = 0;
        while (cols.size() < 3) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) break;
            cols.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        cols.push_back(line.substr(start));
        if (cols.size() != 4) {
            throw Error(Errc::bad_config,
                        "rules: line " + std::to_string(lineno) + " needs 4 tab-separated columns");
        }

        Rule rule;
        rule.label = cols[0];
        rule.target = parse_target(cols[1]);
        rule.pattern_text = cols[2];
        rule.description = cols[3];
        try {
            rule.regex = std::regex(rule.pattern_text,
                                    std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw Error(Errc::bad_config, "rules: line " + std::to_string(lineno) +
                                              " bad regex: " + e.what());
        }

        std::string prefix = rule.label.substr(0, rule.label.find('.'));
        if (prefix == "SIG") {
            rule.is_signal = true;
        } else if (prefix == "CAT") {
            std::size_t dot = rule.label.find('.');
            if (dot == std::string::npos || rule.target != RuleTarget::category) {
                throw Error(Errc::bad_config, "rules: line " + std::to_string(lineno) +
                                                  " malformed CAT row");
            }
            rule.category_name = rule.label.substr(dot + 1);
        } else if (auto id = parse_pattern_id(prefix)) {
            rule.emits = *id;
        } else {
            throw Error(Errc::bad_config, "rules: line " + std::to_string(lineno) +
                                              " unknown label '" + rule.label + "'");
        }

        switch (rule.target) {
            case RuleTarget::code: set.code_rules.push_back(std::move(rule)); break;
            case RuleTarget::instr: set.instr_rules.push_back(std::move(rule)); break;
            case RuleTarget::deps: set.deps_rules.push_back(std::move(rule)); break;
            case RuleTarget::category: set.category_rules.push_back(std::move(rule)); break;
        }
    }
    return set;
}

RuleSet load_rules_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read rules file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rules(buf.str());
}

RuleSet default_rules() { return parse_rules(default_rules_text()); }

}  // namespace skillscan
