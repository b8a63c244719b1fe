#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ckg/acquisition_ckg.hpp"
#include "ckg/baselines.hpp"
#include "ckg/harness.hpp"

namespace py = pybind11;
using namespace ckg;

// The bindings exchange plain lists (std::vector) rather than Eigen types:
// the available pybind11 release predates NumPy 2 and its Eigen/NumPy casters
// crash against it, while STL casters stay independent of the NumPy C ABI.
namespace {

Vector to_vec(const std::vector<double>& v) {
    Vector out(static_cast<int>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
    return out;
}

std::vector<double> from_vec(const Vector& v) {
    return {v.data(), v.data() + v.size()};
}

Matrix to_mat(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix(0, 0);
    Matrix out(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw std::invalid_argument("ragged input matrix");
        for (size_t j = 0; j < rows[i].size(); ++j)
            out(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return out;
}

std::vector<std::vector<double>> from_points(const std::vector<Vector>& pts) {
    std::vector<std::vector<double>> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(from_vec(p));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Constrained Bayesian optimisation with the constrained Knowledge Gradient";

    py::class_<BoxDomain>(m, "BoxDomain")
        .def(py::init([](const std::vector<double>& lo, const std::vector<double>& hi) {
            return BoxDomain(to_vec(lo), to_vec(hi));
        }))
        .def_property_readonly("lower",
                               [](const BoxDomain& d) { return from_vec(d.lower); })
        .def_property_readonly("upper",
                               [](const BoxDomain& d) { return from_vec(d.upper); })
        .def(
            "contains",
            [](const BoxDomain& d, const std::vector<double>& x, double tol) {
                return d.contains(to_vec(x), tol);
            },
            py::arg("x"), py::arg("tol") = 1e-12)
        .def_property_readonly("dim", &BoxDomain::dim);

    py::class_<KernelParams>(m, "KernelParams")
        .def(py::init<>())
        .def_property(
            "lengthscales",
            [](const KernelParams& p) { return from_vec(p.lengthscales); },
            [](KernelParams& p, const std::vector<double>& v) { p.lengthscales = to_vec(v); })
        .def_readwrite("signal_variance", &KernelParams::signal_variance)
        .def_readwrite("noise_variance", &KernelParams::noise_variance);

    py::class_<GpModel>(m, "GpModel")
        .def(py::init([](const KernelParams& params,
                         const std::vector<std::vector<double>>& inputs,
                         const std::vector<double>& outputs, double prior_mean) {
                 return GpModel(params, to_mat(inputs), to_vec(outputs), prior_mean);
             }),
             py::arg("params"), py::arg("inputs"), py::arg("outputs"),
             py::arg("prior_mean") = 0.0)
        .def("posterior_mean",
             [](const GpModel& g, const std::vector<double>& x) {
                 return g.posterior_mean(to_vec(x));
             })
        .def("posterior_cov",
             [](const GpModel& g, const std::vector<double>& x,
                const std::vector<double>& x2) {
                 return g.posterior_cov(to_vec(x), to_vec(x2));
             })
        .def("sigma_tilde",
             [](const GpModel& g, const std::vector<double>& x,
                const std::vector<double>& x_new) {
                 return g.sigma_tilde(to_vec(x), to_vec(x_new));
             })
        .def("fantasy_posterior",
             [](const GpModel& g, const std::vector<double>& x,
                const std::vector<double>& x_new, double z) {
                 auto mv = g.fantasy_posterior(to_vec(x), to_vec(x_new), z);
                 return py::make_tuple(mv.mean, mv.variance);
             })
        .def_property_readonly("n", &GpModel::n)
        .def_property_readonly("params", &GpModel::params);

    m.def("kernel_eval",
          [](const KernelParams& p, const std::vector<double>& a,
             const std::vector<double>& b) { return kernel_eval(p, to_vec(a), to_vec(b)); });
    m.def(
        "gp_fit",
        [](const std::vector<std::vector<double>>& X, const std::vector<double>& y,
           const BoxDomain& domain, std::optional<double> fixed_noise, std::uint64_t seed) {
            FitConfig cfg;
            cfg.fixed_noise_variance = fixed_noise;
            cfg.seed = seed;
            return gp_fit(to_mat(X), to_vec(y), domain, cfg);
        },
        py::arg("inputs"), py::arg("outputs"), py::arg("domain"),
        py::arg("fixed_noise_variance") = std::nullopt, py::arg("seed") = 0);

    py::class_<ConstraintEnsemble>(m, "ConstraintEnsemble")
        .def(py::init<>())
        .def_readwrite("models", &ConstraintEnsemble::models);

    m.def("pf_current", [](const ConstraintEnsemble& e, const std::vector<double>& x) {
        return pf_current(e, to_vec(x));
    });
    m.def("pf_future", [](const ConstraintEnsemble& e, const std::vector<double>& x,
                          const std::vector<double>& x_new, const std::vector<double>& z_c) {
        return pf_future(e, to_vec(x), to_vec(x_new), to_vec(z_c));
    });
    m.def("utility", [](const GpModel& obj, const ConstraintEnsemble& e,
                        const std::vector<double>& x) { return utility(obj, e, to_vec(x)); });
    m.def("kg_discrete", [](const std::vector<double>& mu, const std::vector<double>& sigma,
                            double mu_star) {
        return kg_discrete({to_vec(mu), to_vec(sigma), mu_star});
    });
    m.def("lhs_sample",
          [](const BoxDomain& domain, int count, std::uint64_t seed) {
              return from_points(lhs_sample(domain, count, seed));
          });
    m.def("expected_improvement", &expected_improvement);
    m.def("cei_value",
          [](const GpModel& obj, const ConstraintEnsemble& e, const std::vector<double>& x,
             double incumbent) { return cei_value(obj, e, to_vec(x), incumbent); });
    m.def("nei_value",
          [](const GpModel& obj, const ConstraintEnsemble& e, const std::vector<double>& x,
             int n_samples, std::uint64_t seed) {
              return nei_value(obj, e, to_vec(x), n_samples, seed);
          });
    m.def("cts_next", [](const GpModel& obj, const ConstraintEnsemble& e,
                         const BoxDomain& domain, int candidates, std::uint64_t seed) {
        return from_vec(cts_next(obj, e, domain, candidates, seed));
    });

    py::class_<CkgConfig>(m, "CkgConfig")
        .def(py::init<>())
        .def_readwrite("n_y", &CkgConfig::n_y)
        .def_readwrite("n_c_per_constraint", &CkgConfig::n_c_per_constraint)
        .def_readwrite("mc_samples_nc", &CkgConfig::mc_samples_nc)
        .def_readwrite("candidate_count", &CkgConfig::candidate_count)
        .def_readwrite("top_subset", &CkgConfig::top_subset);

    py::class_<Discretization>(m, "Discretization")
        .def(py::init<>())
        .def_property_readonly(
            "points", [](const Discretization& d) { return from_points(d.points); });

    m.def(
        "build_discretization",
        [](const GpModel& obj, const ConstraintEnsemble& e, const std::vector<double>& x_r,
           const std::vector<double>& x_new, const CkgConfig& cfg, const BoxDomain& domain,
           std::uint64_t seed) {
            return build_discretization(obj, e, to_vec(x_r), to_vec(x_new), cfg, domain,
                                        seed);
        },
        py::arg("objective"), py::arg("ensemble"), py::arg("x_r"), py::arg("x_new"),
        py::arg("config"), py::arg("domain"), py::arg("seed") = 0);
    m.def("ckg_value",
          [](const GpModel& obj, const ConstraintEnsemble& e, const std::vector<double>& x_r,
             const std::vector<double>& x_new, const Discretization& disc,
             const CkgConfig& cfg, std::uint64_t seed) {
              return ckg_value(obj, e, to_vec(x_r), to_vec(x_new), disc, cfg, seed);
          });
    m.def("ckg_maximize",
          [](const GpModel& objective, const ConstraintEnsemble& ensemble,
             const BoxDomain& domain, const CkgConfig& config, std::uint64_t seed) {
              auto r = ckg_maximize(objective, ensemble, domain, config, seed, {});
              return py::make_tuple(from_vec(r.argmax), r.value);
          });

    m.def("list_problems", &problem_names);
    m.def("evaluate_problem", [](const std::string& name, const std::vector<double>& xv) {
        ProblemSpec spec = get_problem(name);
        Vector x = to_vec(xv);
        std::vector<double> c(spec.num_constraints());
        for (int k = 0; k < spec.num_constraints(); ++k) c[k] = spec.constraint_fns[k](x);
        return py::make_tuple(spec.objective_fn(x), c);
    });
    m.def("problem_optimum", [](const std::string& name) {
        const Optimum& o = get_optimum(name);
        return py::make_tuple(from_vec(o.point), o.value);
    });

    m.def(
        "bo_run",
        [](const std::string& problem, const std::string& acquisition, int budget,
           int init_count, double noise_std, std::uint64_t seed, const CkgConfig& ckg_cfg,
           int cts_candidates) {
            RunConfig cfg;
            cfg.problem = problem;
            cfg.acquisition = acquisition_from_string(acquisition);
            cfg.budget_B = budget;
            cfg.init_count = init_count;
            cfg.noise_std = noise_std;
            cfg.ckg = ckg_cfg;
            cfg.cts_candidates = cts_candidates;
            ReplicationRecord rec = bo_run(cfg, seed);
            if (rec.failed) throw std::runtime_error(rec.failure_reason);
            py::dict out;
            out["initial_oc"] = rec.initial_oc;
            std::vector<double> oc;
            std::vector<std::vector<double>> xs, xrs;
            for (const auto& it : rec.iterations) {
                oc.push_back(it.oc);
                xs.push_back(from_vec(it.x));
                xrs.push_back(from_vec(it.x_r));
            }
            out["oc"] = oc;
            out["sampled_x"] = xs;
            out["recommended_x"] = xrs;
            return out;
        },
        py::arg("problem"), py::arg("acquisition") = "cKG", py::arg("budget") = 10,
        py::arg("init_count") = 10, py::arg("noise_std") = 0.0, py::arg("seed") = 0,
        py::arg("ckg_config") = CkgConfig{}, py::arg("cts_candidates") = 2000);
}
