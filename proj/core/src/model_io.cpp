#include "ebglm/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ebglm/errors.hpp"
#include "ebglm/version.hpp"

namespace ebglm {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a.at(i).get<double>();
    return v;
}

json prior_to_json(const Prior& prior) {
    json j;
    if (const auto* pn = std::get_if<PointNormal>(&prior)) {
        j["variant"] = "point-normal";
        j["pi0"] = pn->pi0;
        j["sigma2"] = pn->sigma2;
    } else if (const auto* pl = std::get_if<PointLaplace>(&prior)) {
        j["variant"] = "point-laplace";
        j["pi0"] = pl->pi0;
        j["scale"] = pl->scale;
    } else {
        const auto& mx = std::get<NormalMixture>(prior);
        j["variant"] = "normal-mixture";
        j["weights"] = vector_to_json(mx.weights);
        j["variances"] = vector_to_json(mx.variances);
    }
    return j;
}

Prior prior_from_json(const json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "point-normal")
        return PointNormal{j.at("pi0").get<double>(), j.at("sigma2").get<double>()};
    if (variant == "point-laplace")
        return PointLaplace{j.at("pi0").get<double>(), j.at("scale").get<double>()};
    if (variant == "normal-mixture")
        return NormalMixture{vector_from_json(j.at("weights")),
                             vector_from_json(j.at("variances"))};
    throw ConfigError("unknown prior variant '" + variant + "' in model document");
}

// JSON writer with a fixed numeric policy: finite doubles at 17 significant
// digits (bit-faithful through strtod), integers as-is, sorted object keys
// (nlohmann's default map order). nlohmann's own dump() would use
// shortest-round-trip formatting instead.
void dump(const json& j, std::string& out, int indent) {
    const std::string pad(indent, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                out += pad + "  \"" + it.key() + "\": ";
                dump(it.value(), out, indent + 2);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                out += pad + "  ";
                dump(j.at(i), out, indent + 2);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
            return;
        }
        case json::value_t::string:
            out += json(j.get<std::string>()).dump();  // escaping
            return;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            return;
        case json::value_t::number_unsigned: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%llu",
                          static_cast<unsigned long long>(j.get<std::uint64_t>()));
            out += buf;
            return;
        }
        case json::value_t::number_integer: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%lld",
                          static_cast<long long>(j.get<std::int64_t>()));
            out += buf;
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v))
                throw NumericError("refusing to serialize a non-finite number");
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out += buf;
            return;
        }
        case json::value_t::null:
            out += "null";
            return;
        default:
            throw NumericError("unsupported JSON value type");
    }
}

}  // namespace

ModelDocument to_document(const FitResult& fit, int n_train) {
    ModelDocument doc;
    doc.format_version = kModelFormatVersion;
    doc.family = fit.family.name();
    doc.dispersion = fit.family.dispersion;
    doc.prior = fit.prior_hat;
    doc.has_intercept = fit.has_intercept;
    doc.standardization = fit.standardization;
    doc.response_name = fit.response_name;
    doc.n = n_train;
    doc.p = static_cast<int>(fit.theta.size());
    doc.objective_final = fit.objective_trace.back();
    doc.elbo = fit.elbo;
    doc.converged = fit.report.converged;
    doc.stalled = fit.report.stalled;
    doc.outer_iters = fit.report.outer_iters;
    doc.inner_iters = fit.report.inner_iters;
    doc.seed = fit.seed;
    doc.coefficients.resize(doc.p);
    for (int j = 0; j < doc.p; ++j) {
        auto& c = doc.coefficients[j];
        c.name = j < static_cast<int>(fit.names.size()) ? fit.names[j]
                                                        : "x" + std::to_string(j);
        c.theta = fit.theta[j];
        const double scale = fit.standardization ? fit.standardization->scale[j] : 1.0;
        c.posterior_sd = std::sqrt(fit.summaries[j].variance) / scale;
        c.nonzero_prob = fit.summaries[j].nonzero_prob;
        c.z = fit.summaries[j].z;
        c.s2 = fit.summaries[j].s * fit.summaries[j].s;
    }
    return doc;
}

FitResult from_document(const ModelDocument& doc) {
    FitResult fit;
    fit.family = family_from_name(doc.family, doc.dispersion);
    fit.prior_hat = doc.prior;
    fit.has_intercept = doc.has_intercept;
    fit.standardization = doc.standardization;
    fit.response_name = doc.response_name;
    fit.seed = doc.seed;
    fit.elbo = doc.elbo;
    fit.objective_trace = {doc.objective_final};
    fit.report.converged = doc.converged;
    fit.report.stalled = doc.stalled;
    fit.report.outer_iters = doc.outer_iters;
    fit.report.inner_iters = doc.inner_iters;
    const int p = static_cast<int>(doc.coefficients.size());
    fit.theta.resize(p);
    fit.theta_fit.resize(p);
    fit.s2.resize(p);
    fit.summaries.resize(p);
    for (int j = 0; j < p; ++j) {
        const auto& c = doc.coefficients[j];
        fit.names.push_back(c.name);
        fit.theta[j] = c.theta;
        const double scale = doc.standardization ? doc.standardization->scale[j] : 1.0;
        fit.theta_fit[j] = c.theta * scale;
        if (doc.has_intercept && j == 0 && doc.standardization) {
            double shift = 0.0;
            for (size_t k = 1; k < doc.coefficients.size(); ++k)
                shift += doc.coefficients[k].theta * doc.standardization->center[k];
            fit.theta_fit[0] = c.theta + shift;
        }
        fit.s2[j] = c.s2;
        fit.summaries[j] = PosteriorSummary{
            c.z, std::sqrt(c.s2), fit.theta_fit[j],
            c.posterior_sd * scale * (c.posterior_sd * scale), c.nonzero_prob};
    }
    return fit;
}

void save_model(const ModelDocument& doc, const std::string& path) {
    json j;
    j["format_version"] = doc.format_version;
    j["family"] = {{"kind", doc.family}, {"dispersion", doc.dispersion}};
    j["prior"] = prior_to_json(doc.prior);
    j["has_intercept"] = doc.has_intercept;
    if (doc.standardization) {
        j["standardization"] = {{"center", vector_to_json(doc.standardization->center)},
                                {"scale", vector_to_json(doc.standardization->scale)}};
    } else {
        j["standardization"] = nullptr;
    }
    j["response"] = doc.response_name;
    json coefs = json::array();
    for (const auto& c : doc.coefficients) {
        coefs.push_back({{"name", c.name},
                         {"theta", c.theta},
                         {"posterior_sd", c.posterior_sd},
                         {"nonzero_prob", c.nonzero_prob},
                         {"z", c.z},
                         {"s2", c.s2}});
    }
    j["coefficients"] = std::move(coefs);
    j["training"] = {{"n", doc.n},
                     {"p", doc.p},
                     {"objective_final", doc.objective_final},
                     {"elbo", doc.elbo},
                     {"converged", doc.converged},
                     {"stalled", doc.stalled},
                     {"outer_iters", doc.outer_iters},
                     {"inner_iters", doc.inner_iters},
                     {"seed", doc.seed}};

    std::string text;
    dump(j, text, 0);
    text += '\n';
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("failed while writing '" + path + "'");
}

ModelDocument load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("'" + path + "' is not a valid model document: " + e.what());
    }
    try {
        ModelDocument doc;
        doc.format_version = j.at("format_version").get<int>();
        if (doc.format_version != kModelFormatVersion)
            throw ConfigError("'" + path + "' has model format version " +
                              std::to_string(doc.format_version) + ", this build reads " +
                              std::to_string(kModelFormatVersion));
        doc.family = j.at("family").at("kind").get<std::string>();
        doc.dispersion = j.at("family").at("dispersion").get<double>();
        doc.prior = prior_from_json(j.at("prior"));
        doc.has_intercept = j.at("has_intercept").get<bool>();
        if (!j.at("standardization").is_null()) {
            Standardization st;
            st.center = vector_from_json(j.at("standardization").at("center"));
            st.scale = vector_from_json(j.at("standardization").at("scale"));
            doc.standardization = std::move(st);
        }
        doc.response_name = j.at("response").get<std::string>();
        for (const auto& cj : j.at("coefficients")) {
            ModelCoefficient c;
            c.name = cj.at("name").get<std::string>();
            c.theta = cj.at("theta").get<double>();
            c.posterior_sd = cj.at("posterior_sd").get<double>();
            c.nonzero_prob = cj.at("nonzero_prob").get<double>();
            c.z = cj.at("z").get<double>();
            c.s2 = cj.at("s2").get<double>();
            doc.coefficients.push_back(std::move(c));
        }
        const auto& tj = j.at("training");
        doc.n = tj.at("n").get<int>();
        doc.p = tj.at("p").get<int>();
        doc.objective_final = tj.at("objective_final").get<double>();
        doc.elbo = tj.at("elbo").get<double>();
        doc.converged = tj.at("converged").get<bool>();
        doc.stalled = tj.at("stalled").get<bool>();
        doc.outer_iters = tj.at("outer_iters").get<int>();
        doc.inner_iters = tj.at("inner_iters").get<int>();
        doc.seed = tj.at("seed").get<std::uint64_t>();
        if (static_cast<int>(doc.coefficients.size()) != doc.p)
            throw ConfigError("'" + path + "': coefficient count does not match p");
        validate_prior(doc.prior);
        return doc;
    } catch (const json::exception& e) {
        throw ConfigError("'" + path + "' violates the model schema: " + e.what());
    }
}

}  // namespace ebglm
