#include "sandpile/duality.hpp"

#include <map>

#include "json.hpp"
#include "sandpile/dynamics.hpp"
#include "sandpile/linalg.hpp"

namespace sandpile {

std::string DualCertificate::to_json_string(int indent) const {
    nlohmann::ordered_json j;
    auto rats = [](const RatVec &v) {
        auto a = nlohmann::ordered_json::array();
        for (const Rat &r : v) a.push_back(rat_to_string(r));
        return a;
    };
    j["primal"] = rats(primal_point);
    j["dual"] = rats(dual_point);
    j["primal_obj"] = rat_to_string(primal_objective);
    j["dual_obj"] = rat_to_string(dual_objective);
    j["verdict"] = verdict == CertVerdict::Certified ? "certified"
                   : verdict == CertVerdict::Gap ? "gap"
                                                 : "infeasible";
    return j.dump(indent);
}

LinearProgram build_dual_of_identity_relaxation(const SinkedMultigraph &g) {
    IntMatrix lq = g.reduced_laplacian();
    IntVec smax = g.sigma_max();
    const int n = lq.rows;

    LinearProgram lp;
    lp.sense = Sense::Minimize;
    lp.objective.assign(2 * n, Rat(0));
    for (int i = 0; i < n; ++i) lp.objective[i] = Rat(smax[i]);
    lp.rows = RatMatrix(n, 2 * n);
    lp.relations.assign(n, Relation::Equal);
    lp.rhs.assign(n, Rat(1));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            lp.rows.at(i, k) = Rat(lq.at(i, k));
            lp.rows.at(i, n + k) = Rat(lq.at(i, k));
        }
    lp.lower.assign(2 * n, std::nullopt);
    lp.upper.assign(2 * n, std::nullopt);
    for (int i = 0; i < n; ++i) {
        lp.lower[i] = Rat(0);
        lp.upper[n + i] = Rat(0);
    }
    lp.integral.assign(2 * n, false);
    return lp;
}

DualCertificate check_weak_duality(const RatVec &primal_x, const RatVec &dual_y,
                                   const SinkedMultigraph &g) {
    IntMatrix lq = g.reduced_laplacian();
    IntVec smax = g.sigma_max();
    const int n = lq.rows;
    if (static_cast<int>(primal_x.size()) != n)
        throw DimensionMismatch("primal point must have one entry per non-sink vertex");
    if (static_cast<int>(dual_y.size()) != 2 * n)
        throw DimensionMismatch("dual point must have 2n entries");

    DualCertificate cert;
    cert.primal_point = primal_x;
    cert.dual_point = dual_y;

    bool primal_ok = true;
    RatVec xl = row_times(primal_x, lq);
    for (int j = 0; j < n; ++j)
        if (xl[j] < 0 || xl[j] > Rat(smax[j])) primal_ok = false;

    bool dual_ok = true;
    for (int i = 0; i < n; ++i) {
        if (dual_y[i] < 0) dual_ok = false;
        if (dual_y[n + i] > 0) dual_ok = false;
        Rat row(0);
        for (int k = 0; k < n; ++k) row += Rat(lq.at(i, k)) * (dual_y[k] + dual_y[n + k]);
        if (row != 1) dual_ok = false;
    }

    for (const Rat &x : primal_x) cert.primal_objective += x;
    for (int i = 0; i < n; ++i) cert.dual_objective += Rat(smax[i]) * dual_y[i];

    if (!primal_ok || !dual_ok)
        cert.verdict = CertVerdict::Infeasible;
    else
        cert.verdict = cert.primal_objective == cert.dual_objective ? CertVerdict::Certified
                                                                    : CertVerdict::Gap;
    return cert;
}

ConeIdentityReport verify_cone_identity(const BaseGraph &base) {
    // Structural regularity check before the Corollary is invoked.
    std::map<std::string, long> deg;
    for (const std::string &v : base.vertices) deg[v] = 0;
    for (const Edge &e : base.edges) {
        deg.at(e.from) += e.mult;
        deg.at(e.to) += e.mult;
    }
    long r = -1;
    for (const auto &[v, d] : deg) {
        if (r < 0) r = d;
        if (d != r) throw NotRegular("base graph is not regular at vertex " + v);
    }

    SinkedMultigraph g = cone(base);
    const int n = g.nonsink_count();
    IntMatrix lq = g.reduced_laplacian();

    // Lq(CG) * 1 = 1 for r-regular bases.
    IntVec ones(n, Int(1));
    if (times_col(lq, ones) != ones)
        throw GraphError("cone reduced Laplacian does not map 1 to 1");

    ConeIdentityReport rep;
    rep.regularity = static_cast<int>(r);
    rep.identity_closed_form.assign(n, Int(r));

    RatVec x(n, Rat(r));
    RatVec y(2 * n, Rat(0));
    for (int i = 0; i < n; ++i) y[i] = 1;
    rep.certificate = check_weak_duality(x, y, g);

    MipSolution ilp = branch_and_bound(build_identity_model(g));
    IntVec xstar(n);
    for (int i = 0; i < n; ++i) xstar[i] = ilp.point[i].get_num();
    rep.identity_ilp = row_times(xstar, lq);

    rep.identity_dynamics = recurrent_rep_dynamics(g, IntVec(n, Int(0)));

    rep.all_agree = rep.certificate.verdict == CertVerdict::Certified &&
                    rep.identity_ilp == rep.identity_closed_form &&
                    rep.identity_dynamics == rep.identity_closed_form;
    return rep;
}

}  // namespace sandpile
