#pragma once

// Localized narration for trace records. A catalog maps narration keys to
// templates with {name} placeholders; missing keys fall back to English.

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acsim/builtin_catalogs.hpp"
#include "acsim/json_io.hpp"
#include "acsim/machine.hpp"

namespace acsim {

class NarrationError : public std::runtime_error {
public:
    enum class Kind { UnknownKey, BadCatalog };

    NarrationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct NarrationCatalog {
    std::string locale;
    std::map<std::string, std::string> templates;

    /// Catalog file format: {"locale": "en", "templates": {"key": "text {name}"}}.
    static NarrationCatalog from_json(const json& j) {
        NarrationCatalog c;
        try {
            c.locale = j.at("locale").get<std::string>();
            for (const auto& [k, v] : j.at("templates").items()) c.templates[k] = v.get<std::string>();
        } catch (const json::exception& e) {
            throw NarrationError(NarrationError::Kind::BadCatalog, std::string("bad narration catalog: ") + e.what());
        }
        if (c.locale.empty()) throw NarrationError(NarrationError::Kind::BadCatalog, "catalog has an empty locale");
        return c;
    }

    json to_json() const { return json{{"locale", locale}, {"templates", templates}}; }
};

/// Placeholder names used by a template, in order of appearance.
inline std::vector<std::string> placeholders(std::string_view tmpl) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] != '{') continue;
        const auto close = tmpl.find('}', i);
        if (close == std::string_view::npos) break;
        names.emplace_back(tmpl.substr(i + 1, close - i - 1));
        i = close;
    }
    return names;
}

/// Substitutes {name} placeholders. Placeholders without a value are left
/// verbatim.
inline std::string render_template(std::string_view tmpl, const Params& params) {
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '{') {
            const auto close = tmpl.find('}', i);
            if (close != std::string_view::npos) {
                const std::string name(tmpl.substr(i + 1, close - i - 1));
                if (auto it = params.find(name); it != params.end()) {
                    if (std::holds_alternative<int>(it->second))
                        out += std::to_string(std::get<int>(it->second));
                    else
                        out += std::get<std::string>(it->second);
                    i = close;
                    continue;
                }
            }
        }
        out += tmpl[i];
    }
    return out;
}

class Narrator {
public:
    /// Narrator preloaded with the shipped en/es/it catalogs.
    static const Narrator& builtin() {
        static const Narrator instance = [] {
            Narrator n;
            for (std::string_view text : builtin_catalog_sources()) n.add(NarrationCatalog::from_json(json::parse(text)));
            return n;
        }();
        return instance;
    }

    void add(NarrationCatalog catalog) {
        const std::string key = to_lower(catalog.locale);
        catalogs_[key] = std::move(catalog);
    }

    const NarrationCatalog* catalog(std::string_view locale) const {
        auto it = catalogs_.find(to_lower(locale));
        return it == catalogs_.end() ? nullptr : &it->second;
    }

    std::vector<std::string> locales() const {
        std::vector<std::string> out;
        for (const auto& [k, c] : catalogs_) out.push_back(c.locale);
        return out;
    }

    /// Renders `key` in `locale`, trying the full tag, then its primary
    /// subtag (es-MX -> es), then en.
    std::string narrate(std::string_view key, const Params& params, std::string_view locale) const {
        const NarrationCatalog* en = catalog("en");
        if (!en || !en->templates.count(std::string(key)))
            throw NarrationError(NarrationError::Kind::UnknownKey, "unknown narration key '" + std::string(key) + "'");
        for (const NarrationCatalog* c : {catalog(locale), catalog(primary_subtag(locale))}) {
            if (!c) continue;
            if (auto it = c->templates.find(std::string(key)); it != c->templates.end())
                return render_template(it->second, params);
        }
        return render_template(en->templates.at(std::string(key)), params);
    }

    std::string narrate(const Narration& n, std::string_view locale) const { return narrate(n.key, n.params, locale); }

private:
    static std::string to_lower(std::string_view s) {
        std::string out(s);
        for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    }

    static std::string primary_subtag(std::string_view locale) {
        const auto cut = locale.find_first_of("-_");
        return std::string(locale.substr(0, cut));
    }

    std::map<std::string, NarrationCatalog> catalogs_;
};

inline std::string narrate(std::string_view key, const Params& params, std::string_view locale) {
    return Narrator::builtin().narrate(key, params, locale);
}

}  // namespace acsim
