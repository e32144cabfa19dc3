#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptc/closed_form.hpp"
#include "ptc/cp_apr.hpp"
#include "ptc/density.hpp"
#include "ptc/histogram.hpp"
#include "ptc/knn.hpp"
#include "ptc/mean_measure.hpp"
#include "ptc/samplers.hpp"

namespace py = pybind11;
using namespace ptc;

namespace {

Matrix matrix_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& array) {
    if (array.ndim() != 2) throw ArgumentError("expected a 2-D array of samples");
    Matrix m(static_cast<std::size_t>(array.shape(0)), static_cast<std::size_t>(array.shape(1)));
    const auto view = array.unchecked<2>();
    for (py::ssize_t i = 0; i < array.shape(0); ++i)
        for (py::ssize_t j = 0; j < array.shape(1); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = view(i, j);
    return m;
}

py::array_t<double> array_from_matrix(const Matrix& m) {
    py::array_t<double> array({m.rows(), m.cols()});
    auto view = array.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = m(i, j);
    return array;
}

Matrix matrix_from_cov(const py::object& cov, std::size_t dim) {
    if (cov.is_none()) return Matrix::identity(dim);
    return matrix_from_array(cov.cast<py::array_t<double>>());
}

}  // namespace

PYBIND11_MODULE(pyptc, m) {
    m.doc() = "Poisson tensor completion density and entropy estimation";

    py::register_exception<Error>(m, "PtcError");

    py::class_<Shape>(m, "Shape")
        .def(py::init<std::vector<Coord>>())
        .def_property_readonly("dims", &Shape::dims)
        .def_property_readonly("size", &Shape::size);

    py::class_<DistributionSpec>(m, "DistributionSpec")
        .def_property_readonly("dim", [](const DistributionSpec& s) { return s.dim; })
        .def_property_readonly("family", &DistributionSpec::family_name);

    m.def("uniform_spec", [](const std::vector<std::pair<double, double>>& box) {
        return DistributionSpec::uniform(box);
    });
    m.def("gaussian_spec",
          [](const std::vector<double>& mean, const py::object& cov) {
              return DistributionSpec::gaussian(mean, matrix_from_cov(cov, mean.size()));
          },
          py::arg("mean"), py::arg("cov") = py::none());
    m.def("student_t_spec", &DistributionSpec::student_t, py::arg("dim"), py::arg("dof"));
    m.def("equidistant_mixture",
          [](std::size_t components, std::size_t dim, double separation, const py::object& cov) {
              if (cov.is_none()) return equidistant_mixture(components, dim, separation);
              const Matrix c = matrix_from_array(cov.cast<py::array_t<double>>());
              return equidistant_mixture(components, dim, separation, &c);
          },
          py::arg("components"), py::arg("dim"), py::arg("separation") = 10.0,
          py::arg("cov") = py::none());

    m.def("sample",
          [](const DistributionSpec& spec, std::int64_t s, std::uint64_t seed) {
              return array_from_matrix(sample(spec, s, seed));
          },
          py::arg("spec"), py::arg("s"), py::arg("seed") = 0);
    m.def("true_entropy", [](const DistributionSpec& spec) -> py::object {
        const auto value = true_entropy(spec);
        return value ? py::cast(*value) : py::none();
    });

    py::class_<BinningGrid>(m, "BinningGrid")
        .def(py::init<std::vector<std::vector<double>>>())
        .def_property_readonly("ndim", &BinningGrid::ndim)
        .def("edges", &BinningGrid::edges)
        .def_property_readonly("total_bins",
                               [](const BinningGrid& g) { return g.shape().size(); })
        .def("bin_point", [](const BinningGrid& grid, const std::vector<double>& x) -> py::object {
            const auto bin = grid.bin_point(x);
            return bin ? py::cast(*bin) : py::none();
        });

    m.def("scott_width", &scott_width, py::arg("s"), py::arg("d"), py::arg("c") = 3.5);
    m.def("grid_from_samples",
          [](const py::array_t<double>& samples, Coord bins) {
              return grid_from_samples(matrix_from_array(samples), bins);
          },
          py::arg("samples"), py::arg("bins_per_dim") = 20);
    m.def("grid_from_width", [](const py::array_t<double>& samples, double width) {
        return grid_from_width(matrix_from_array(samples), width);
    });

    py::class_<HistogramDensity>(m, "Histogram")
        .def_property_readonly("nnz_bins",
                               [](const HistogramDensity& h) { return h.counts.nnz(); })
        .def_property_readonly("total_samples",
                               [](const HistogramDensity& h) { return h.total_samples; })
        .def_property_readonly("outside",
                               [](const HistogramDensity& h) { return h.outside; })
        .def("entropy", [](const HistogramDensity& h) { return histogram_entropy(h); })
        .def("occupancy", [](const HistogramDensity& h) { return occupancy(h); })
        .def("value", [](const HistogramDensity& h, const std::vector<double>& x) {
            return h.value(x);
        });

    m.def("build_histogram", [](const py::array_t<double>& samples, const BinningGrid& grid) {
        return build_histogram(matrix_from_array(samples), grid);
    });

    py::class_<KruskalModel>(m, "KruskalModel")
        .def_property_readonly("rank", [](const KruskalModel& m_) { return m_.rank; })
        .def_property_readonly("weights", [](const KruskalModel& m_) { return m_.weights; })
        .def("factor",
             [](const KruskalModel& m_, std::size_t mode) {
                 return array_from_matrix(m_.factors.at(mode));
             })
        .def("entry", [](const KruskalModel& m_, const MultiIndex& index) {
            return kruskal_entry(m_, index);
        })
        .def_property_readonly("total_mass",
                               [](const KruskalModel& m_) { return kruskal_total_mass(m_); });

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("model", &FitResult::model)
        .def_readonly("loglik_trace", &FitResult::loglik_trace)
        .def_readonly("final_kkt_violation", &FitResult::final_kkt_violation)
        .def_readonly("outer_iterations", &FitResult::outer_iterations)
        .def_readonly("converged", &FitResult::converged);

    m.def("fit_poisson_cp",
          [](const HistogramDensity& histogram, std::size_t rank, std::uint64_t seed,
             int max_outer, int max_inner, double kkt_tol) {
              FitConfig config;
              config.rank = rank;
              config.rng_seed = seed;
              config.max_outer_iters = max_outer;
              config.max_inner_iters = max_inner;
              config.kkt_tol = kkt_tol;
              return fit(histogram.counts, config);
          },
          py::arg("histogram"), py::arg("rank"), py::arg("seed") = 0,
          py::arg("max_outer") = 200, py::arg("max_inner") = 10,
          py::arg("kkt_tol") = 1e-4);

    py::class_<ThresholdReport>(m, "ThresholdReport")
        .def_readonly("tau", &ThresholdReport::tau)
        .def_readonly("retained_terms", &ThresholdReport::retained_terms)
        .def_readonly("total_terms", &ThresholdReport::total_terms)
        .def_readonly("retained_mass_fraction", &ThresholdReport::retained_mass_fraction)
        .def_readonly("entropy_estimate", &ThresholdReport::entropy_estimate)
        .def_readonly("everything_pruned", &ThresholdReport::everything_pruned);

    py::class_<PtcDensity>(m, "PtcDensity")
        .def_property_readonly("total_mass",
                               [](const PtcDensity& d) { return d.total_mass; })
        .def("eval", [](const PtcDensity& d, const std::vector<double>& x) {
            return ptc_density_eval(d, x);
        })
        .def("entropy",
             [](const PtcDensity& d, Index budget) { return ptc_entropy(d, budget); },
             py::arg("budget") = kDefaultEnumerationBudget)
        .def("entropy_thresholded",
             [](const PtcDensity& d, double tau) { return ptc_entropy_thresholded(d, tau); },
             py::arg("tau"));

    m.def("ptc_density", [](const KruskalModel& model, const BinningGrid& grid) {
        return make_ptc_density(model, grid);
    });

    m.def("knn_entropy",
          [](const py::array_t<double>& samples, int k) {
              return knn_entropy(matrix_from_array(samples), k);
          },
          py::arg("samples"), py::arg("k"));

    m.def("gaussian_entropy", [](const py::array_t<double>& sigma) {
        return gaussian_entropy(matrix_from_array(sigma));
    });
    m.def("uniform_entropy", [](const std::vector<std::pair<double, double>>& box) {
        return uniform_entropy(box);
    });
    m.def("student_t_entropy", &student_t_entropy, py::arg("dof"));
}
