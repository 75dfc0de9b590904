// io.hpp — Deterministic artifact formatting: trace CSV and report JSON
//
// All floating-point output goes through 17-significant-digit formatting so
// reruns with identical config and seed produce byte-identical files.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "focklind/certify.hpp"
#include "focklind/dynamics.hpp"

namespace focklind {

inline std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string trace_to_csv(const SimulationTrace& tr)
{
    std::ostringstream os;
    os << "t,trace,min_eig,leakage";
    for (double k : tr.sobolev_k) os << ",W_" << fmt17(k);
    for (const auto& name : tr.observable_names) os << "," << name;
    os << "\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << fmt17(tr.times[i]) << "," << fmt17(tr.trace[i]) << "," << fmt17(tr.min_eig[i])
           << "," << fmt17(tr.leakage[i]);
        for (double v : tr.sobolev[i]) os << "," << fmt17(v);
        for (double v : tr.observables[i]) os << "," << fmt17(v);
        os << "\n";
    }
    return os.str();
}

inline nlohmann::json to_json(const CertificateReport& rep)
{
    nlohmann::json j;
    j["k"] = rep.spec.k.k;
    j["form"] = rep.spec.form == BoundForm::drift ? "drift" : "plain_omega";
    if (rep.spec.form == BoundForm::drift) {
        j["c"] = rep.spec.c;
        j["mu"] = rep.spec.mu;
    } else {
        j["omega"] = rep.spec.omega;
    }
    j["source"] = rep.spec.source;
    j["interior_dim"] = rep.interior_dim;
    j["band"] = rep.band;
    j["margin"] = rep.margin;
    j["verdict"] = to_string(rep.verdict);
    if (!rep.witness_abs.empty()) j["witness_abs"] = rep.witness_abs;
    return j;
}

inline nlohmann::json to_json(const ScalarSuiteReport& rep)
{
    nlohmann::json j;
    j["trials"] = rep.trials;
    j["checks"] = rep.checks;
    j["passed"] = rep.passed();
    auto arr = nlohmann::json::array();
    for (const auto& c : rep.counterexamples) arr.push_back({{"lemma", c.lemma}, {"detail", c.detail}});
    j["counterexamples"] = arr;
    return j;
}

inline nlohmann::json to_json(const PerturbationRow& row)
{
    return {{"eps", row.eps},     {"t", row.t},
            {"lhs", row.lhs},     {"rhs", row.rhs},
            {"ratio", row.ratio}, {"duhamel_residual", row.duhamel_residual},
            {"ok", row.ok}};
}

inline nlohmann::json to_json(const LdissPerturbationReport& rep)
{
    nlohmann::json j;
    j["c_const"] = rep.c_const;
    j["rho0_sobolev"] = rep.rho0_sobolev;
    j["d_H"] = rep.d_H;
    j["lambda_max"] = rep.lambda_max;
    j["passed"] = rep.passed;
    j["worst_ratio"] = rep.worst_ratio;
    j["worst_residual"] = rep.worst_residual;
    auto rows = nlohmann::json::array();
    for (const auto& r : rep.rows) rows.push_back(to_json(r));
    j["rows"] = rows;
    return j;
}

inline nlohmann::json to_json(const QouPerturbationReport& rep)
{
    nlohmann::json j;
    j["passed"] = rep.passed;
    j["max_rel_spread"] = rep.max_rel_spread;
    j["empirical_constant"] = rep.empirical_constant;
    auto rows = nlohmann::json::array();
    for (const auto& r : rep.rows) rows.push_back(to_json(r));
    j["rows"] = rows;
    return j;
}

inline nlohmann::json to_json(const EcLowerBoundReport& rep)
{
    return {{"lower_bound", rep.lower_bound},
            {"lemma_identity", rep.lemma_identity},
            {"probes_evaluated", rep.probes_evaluated},
            {"identity_consistent", rep.identity_consistent}};
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << content;
}

} // namespace focklind
