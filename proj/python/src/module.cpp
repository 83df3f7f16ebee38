#include "mvclust/aamvfcm.hpp"
#include "mvclust/amvfcm.hpp"
#include "mvclust/error.hpp"
#include "mvclust/harness.hpp"
#include "mvclust/metrics.hpp"
#include "mvclust/synthgen.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace mvclust;

namespace {

MultiViewDataset make_dataset(std::vector<Eigen::MatrixXd> views, std::optional<std::vector<int>> labels) {
    MultiViewDataset data;
    data.views = std::move(views);
    data.labels = std::move(labels);
    validate(data);
    return data;
}

HyperParams make_params(std::size_t clusters, double eta, const std::string& beta, std::size_t max_iters,
                        double epsilon, std::uint64_t seed, std::size_t prune_warmup, double theta_scale) {
    HyperParams p;
    p.clusters = clusters;
    p.eta = eta;
    p.beta = BetaMode::parse(beta);
    p.max_iters = max_iters;
    p.epsilon = epsilon;
    p.seed = seed;
    p.prune_warmup = prune_warmup;
    p.theta_scale = theta_scale;
    return p;
}

py::dict fit_to_dict(const FitResult& fit) {
    py::dict out;
    out["memberships"] = fit.model.memberships;
    out["centers"] = fit.model.centers;
    out["feature_weights"] = fit.model.feature_weights;
    out["view_weights"] = fit.model.view_weights;
    out["delta"] = fit.delta;
    out["objective_trace"] = fit.objective_trace;
    out["pruning_events"] = fit.pruning_events;
    out["iterations"] = fit.iterations;
    out["converged"] = fit.converged;
    out["labels"] = fit.hard_labels;
    out["final_dims"] = fit.mask.final_dims();
    out["active_views"] = fit.mask.active_views();
    std::vector<std::vector<std::size_t>> features;
    for (std::size_t h = 0; h < fit.mask.views.size(); ++h) features.push_back(fit.mask.active_features(h));
    out["active_features"] = features;
    out["reduction_percent"] = fit.mask.reduction_percent();
    out["warnings"] = fit.warnings;
    return out;
}

template <FitResult (*Fit)(const MultiViewDataset&, const HyperParams&)>
py::dict fit_binding(std::vector<Eigen::MatrixXd> views, std::size_t clusters, double eta, const std::string& beta,
                     std::size_t max_iters, double epsilon, std::uint64_t seed, std::size_t prune_warmup,
                     double theta_scale) {
    const auto data = make_dataset(std::move(views), std::nullopt);
    const auto params = make_params(clusters, eta, beta, max_iters, epsilon, seed, prune_warmup, theta_scale);
    FitResult fit;
    {
        py::gil_scoped_release release;
        fit = Fit(data, params);
    }
    return fit_to_dict(fit);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-view entropy-regularized fuzzy clustering";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def(
        "synthetic",
        [](std::size_t n, std::uint64_t seed, double sigma2, std::size_t noise_features, double noise_low,
           double noise_high) {
            const auto data = make_synthetic({n, seed, sigma2, noise_features, noise_low, noise_high});
            return py::make_tuple(data.views, *data.labels);
        },
        py::arg("n") = 1500, py::arg("seed") = 0, py::arg("sigma2") = 0.5, py::arg("noise_features") = 1,
        py::arg("noise_low") = 0.02, py::arg("noise_high") = 0.05,
        "Two-view, five-cluster benchmark with uniform noise columns. Returns (views, labels).");

    m.def(
        "minmax_normalize",
        [](std::vector<Eigen::MatrixXd> views) { return minmax_normalize(make_dataset(std::move(views), {})).first.views; },
        py::arg("views"));

    m.def(
        "compute_delta",
        [](std::vector<Eigen::MatrixXd> views, double lo, double hi) {
            return compute_delta(make_dataset(std::move(views), {}), DeltaClamp{lo, hi});
        },
        py::arg("views"), py::arg("lo") = 1e-6, py::arg("hi") = 1e6);

    const char* fit_doc = "Fit the model; returns a dict of weights, memberships, labels and trace.";
    m.def("fit_amvfcm", &fit_binding<fit_amvfcm>, py::arg("views"), py::arg("clusters"), py::arg("eta") = 0.025,
          py::arg("beta") = "auto", py::arg("max_iters") = 100, py::arg("epsilon") = 1e-6, py::arg("seed") = 0,
          py::arg("prune_warmup") = 0, py::arg("theta_scale") = 1.0, fit_doc);
    m.def("fit_aamvfcm", &fit_binding<fit_aamvfcm>, py::arg("views"), py::arg("clusters"), py::arg("eta") = 0.025,
          py::arg("beta") = "auto", py::arg("max_iters") = 100, py::arg("epsilon") = 1e-6, py::arg("seed") = 0,
          py::arg("prune_warmup") = 0, py::arg("theta_scale") = 1.0, fit_doc);

    m.def(
        "pair_counts",
        [](const std::vector<int>& truth, const std::vector<int>& pred) {
            const auto pc = pair_counts(truth, pred);
            return py::make_tuple(pc.a, pc.b, pc.c, pc.d);
        },
        py::arg("truth"), py::arg("pred"));

    m.def(
        "scores",
        [](const std::vector<int>& truth, const std::vector<int>& pred) {
            const auto s = score_all(truth, pred);
            py::dict out;
            out["ri"] = s.ri;
            out["ari"] = s.ari;
            out["ji"] = s.ji;
            out["nmi"] = s.nmi;
            out["fmi"] = s.fmi;
            return out;
        },
        py::arg("truth"), py::arg("pred"));

    m.attr("__version__") = MVCLUST_VERSION;
}
