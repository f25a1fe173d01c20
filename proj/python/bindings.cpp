#include "qcsvd/correlation.hpp"
#include "qcsvd/errors.hpp"
#include "qcsvd/exact_diag.hpp"
#include "qcsvd/four_site.hpp"
#include "qcsvd/io.hpp"
#include "qcsvd/mps.hpp"
#include "qcsvd/svd_analysis.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace qcsvd;

namespace {

std::vector<SpinConfig> configs_of(const SectorBasis& b) {
  return {b.configs().begin(), b.configs().end()};
}

py::dict ground_dict(int n, double coupling, std::uint64_t seed) {
  LanczosOptions opt;
  opt.seed = seed;
  GroundSolution g;
  {
    py::gil_scoped_release release;
    g = lanczos_ground_state(enumerate_sector(n, 0), coupling, opt);
  }
  py::dict d;
  d["energy"] = g.energy;
  d["amplitudes"] = g.wf.amps;
  d["configs"] = configs_of(*g.wf.basis);
  d["residual_norm"] = g.residual_norm;
  d["correlation"] = build_from_wavefunction(g.wf).entries;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heisenberg ring solvers and correlation-matrix SVD analysis";

  static py::exception<Error> base(m, "QcsvdError", PyExc_RuntimeError);
  static py::exception<ConvergenceError> conv(m, "ConvergenceError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConvergenceError& e) {
      py::set_error(conv, e.what());
    } catch (const InvalidSizeError& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const DomainError& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const IndexError& e) {
      py::set_error(PyExc_IndexError, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<SectorBasis, std::shared_ptr<SectorBasis>>(m, "SectorBasis")
      .def_property_readonly("n_sites", &SectorBasis::n_sites)
      .def_property_readonly("sz_total", &SectorBasis::sz_total)
      .def_property_readonly("configs", &configs_of)
      .def("index_of", &SectorBasis::index_of)
      .def("__len__", &SectorBasis::size);

  m.def("enumerate_sector",
        [](int n, double sz) { return std::const_pointer_cast<SectorBasis>(enumerate_sector(n, sz)); },
        py::arg("n_sites"), py::arg("sz_total") = 0.0);

  m.def("dense_hamiltonian",
        [](int n, double sz, double coupling) { return dense_hamiltonian(*enumerate_sector(n, sz), coupling); },
        py::arg("n_sites"), py::arg("sz_total") = 0.0, py::arg("J") = 1.0);

  m.def("ed_ground_state", &ground_dict, py::arg("n_sites"), py::arg("J") = 1.0, py::arg("seed") = 0,
        "Lanczos ground state in the S_z = 0 sector with its correlation matrix.");

  m.def(
      "thermal_correlation",
      [](int n, double beta, double coupling) {
        py::gil_scoped_release release;
        return build_thermal(full_spectrum(n, coupling), beta).entries;
      },
      py::arg("n_sites"), py::arg("beta"), py::arg("J") = 1.0);

  m.def(
      "full_spectrum_energies",
      [](int n, double coupling) { return full_spectrum(n, coupling).energies(); }, py::arg("n_sites"),
      py::arg("J") = 1.0);

  py::class_<SweepReport>(m, "SweepReport")
      .def_readonly("sweep_index", &SweepReport::sweep_index)
      .def_readonly("energy", &SweepReport::energy)
      .def_readonly("energy_change", &SweepReport::energy_change)
      .def_readonly("spectrum_change", &SweepReport::spectrum_change);

  m.def(
      "mps_ground_state",
      [](int n, int chi, int sweeps, std::uint64_t seed, double coupling, int track) {
        MpsState st = random_init(n, chi, seed);
        SweepOptions opt;
        opt.n_sweeps = sweeps;
        opt.track_spectrum_last = track;
        std::vector<SweepReport> reports;
        {
          py::gil_scoped_release release;
          reports = sweep_optimize(st, coupling, opt);
        }
        py::dict d;
        d["energy"] = energy(st, coupling);
        d["correlation"] = build_from_mps(st).entries;
        d["sweeps"] = reports;
        d["state_json"] = io::mps_to_json(st, coupling).dump();
        return d;
      },
      py::arg("n_sites"), py::arg("chi") = 10, py::arg("sweeps") = 40, py::arg("seed") = 0, py::arg("J") = 1.0,
      py::arg("track_spectrum_last") = 0);

  py::class_<SvdSpectrum>(m, "SvdSpectrum")
      .def_readonly("values", &SvdSpectrum::values)
      .def_readonly("squared", &SvdSpectrum::squared)
      .def_readonly("vectors", &SvdSpectrum::vectors)
      .def("__len__", &SvdSpectrum::size);

  m.def("eigendecompose", py::overload_cast<const Eigen::MatrixXd&>(&eigendecompose), py::arg("matrix"));
  m.def(
      "component", [](const SvdSpectrum& s, int n) { return component(s, n).matrix; }, py::arg("spectrum"),
      py::arg("n"));
  m.def(
      "degeneracy_pairs",
      [](const SvdSpectrum& s, double tol) {
        const DegeneracyPartition p = degeneracy_pairs(s, tol);
        return py::make_tuple(p.pairs, p.singletons);
      },
      py::arg("spectrum"), py::arg("rel_tol"));
  m.def("dominant_wavenumber", &dominant_wavenumber, py::arg("vector"));

  py::class_<DomainMeasurement>(m, "DomainMeasurement")
      .def_readonly("wavenumber", &DomainMeasurement::wavenumber)
      .def_readonly("domain_size", &DomainMeasurement::domain_size)
      .def_readonly("wall_count", &DomainMeasurement::wall_count);
  m.def("measure_domain_size", &measure_domain_size, py::arg("vector"),
        py::arg("threshold") = kDefaultDomainThreshold);

  py::class_<ScalingFit>(m, "ScalingFit")
      .def_readonly("amplitude", &ScalingFit::amplitude)
      .def_readonly("power", &ScalingFit::power)
      .def_readonly("r_squared", &ScalingFit::r_squared)
      .def_readonly("fit_set", &ScalingFit::fit_set)
      .def_readonly("excluded", &ScalingFit::excluded)
      .def_readonly("uses_exp_cutoff", &ScalingFit::uses_exp_cutoff);
  m.def(
      "fit_scaling",
      [](const SvdSpectrum& s, std::optional<std::vector<int>> fit_set, bool cutoff) {
        return fit_scaling(s, fit_set ? *fit_set : default_fit_set(s.size()), cutoff);
      },
      py::arg("spectrum"), py::arg("fit_set") = py::none(), py::arg("uses_exp_cutoff") = true);

  py::class_<KernelReconstruction>(m, "KernelReconstruction")
      .def_readonly("separations", &KernelReconstruction::separations)
      .def_readonly("values", &KernelReconstruction::values)
      .def_readonly("slope", &KernelReconstruction::slope)
      .def_readonly("r_squared", &KernelReconstruction::r_squared)
      .def_readonly("gamma_half", &KernelReconstruction::gamma_half);
  m.def("kernel_reconstruct", &kernel_reconstruct, py::arg("n_sites"), py::arg("separations"));
  m.def("gamma_half_integral", &gamma_half_integral, py::arg("a"), py::arg("b"));
  m.def("haar_transform", &haar_transform, py::arg("matrix"), py::arg("levels"));
  m.def("inverse_haar_transform", &inverse_haar_transform, py::arg("matrix"), py::arg("levels"));

  m.def("oracle4", [] {
    using namespace four_site;
    py::dict d;
    d["ground_state"] = oracle_ground_state().amps;
    const DensityMatrices rho = oracle_density_matrices();
    d["rho_a"] = Eigen::MatrixXd(rho.rho_a);
    d["rho_ab"] = Eigen::MatrixXd(rho.rho_ab);
    const Entropies e = oracle_entropies();
    d["entropies"] = py::dict(py::arg("s_ab") = e.s_ab, py::arg("s_a") = e.s_a, py::arg("s_b") = e.s_b,
                              py::arg("mutual_information") = e.mutual_information);
    d["correlation_matrix"] = Eigen::MatrixXd(oracle_correlation_matrix());
    d["singular_values"] = Eigen::VectorXd(oracle_singular_values());
    return d;
  });

  m.def("read_matrix_csv", &io::read_matrix_csv, py::arg("path"));
  m.def("write_matrix_csv", &io::write_matrix_csv, py::arg("path"), py::arg("matrix"));
}
