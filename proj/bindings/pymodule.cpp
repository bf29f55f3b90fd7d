// Python bindings for the three layers: the exact tier-1 solver/certifier,
// the divisor calculator on P^1_Z, and the section-lattice toolkit.  Exact
// rationals cross the boundary as "p/q" strings (Python ints are accepted on
// input); everything else maps to plain floats, lists, and dicts.

#include "zariskilab/p1_divisors.hpp"
#include "zariskilab/rational.hpp"
#include "zariskilab/sections_lab.hpp"
#include "zariskilab/zariski_core.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace zar;

namespace {

Rat rat_in(const py::handle& h) {
    if (py::isinstance<py::int_>(h)) {
        // Go through the decimal string so arbitrary-precision ints survive.
        return rat_from_string(py::cast<std::string>(py::str(h)));
    }
    if (py::isinstance<py::str>(h)) {
        return rat_from_string(py::cast<std::string>(h));
    }
    throw py::type_error("expected an int or a 'p/q' string for an exact rational");
}

RatMat mat_in(const py::sequence& rows) {
    RatMat m;
    for (const auto& row : rows) {
        RatVec v;
        for (const auto& entry : py::cast<py::sequence>(row)) v.push_back(rat_in(entry));
        m.push_back(std::move(v));
    }
    return m;
}

py::list mat_out(const RatMat& m) {
    py::list rows;
    for (const auto& row : m) {
        py::list r;
        for (const auto& entry : row) r.append(rat_to_string(entry));
        rows.append(r);
    }
    return rows;
}

core::BasisVector vector_in(const py::dict& d) {
    core::BasisVector v;
    for (const auto& item : d) {
        v.coords[py::cast<std::string>(item.first)] = rat_in(item.second);
    }
    return v;
}

py::dict vector_out(const core::BasisVector& v) {
    py::dict d;
    for (const auto& [label, value] : v.coords) {
        d[py::str(label)] = rat_to_string(value);
    }
    return d;
}

std::vector<p1::KinkPoint> kinks_in(const std::vector<std::pair<double, double>>& ks) {
    std::vector<p1::KinkPoint> out;
    for (const auto& [t, mass] : ks) out.push_back({t, mass});
    return out;
}

std::string family_name(p1::ModelDivisor::Family f) {
    switch (f) {
        case p1::ModelDivisor::Family::OneKink: return "one-kink";
        case p1::ModelDivisor::Family::TwoKink: return "two-kink";
        case p1::ModelDivisor::Family::Admissible: return "admissible";
        case p1::ModelDivisor::Family::PrincipalShift: return "principal-shift";
        case p1::ModelDivisor::Family::Scaled: return "scaled";
        case p1::ModelDivisor::Family::Kinked: return "kinked";
    }
    return "unknown";
}

std::string curve_name(const p1::HorizontalCurve& c) {
    switch (c.kind()) {
        case p1::HorizontalCurve::Kind::C0: return "C0";
        case p1::HorizontalCurve::Kind::CInf: return "Cinf";
        case p1::HorizontalCurve::Kind::Rational:
            return std::to_string(c.m()) + "/" + std::to_string(c.n());
    }
    return "unknown";
}

}  // namespace

PYBIND11_MODULE(_zariskilab, m) {
    m.doc() =
        "Exact Zariski decompositions (tier 1) and an arithmetic R-divisor "
        "calculator with section-lattice probes on the projective line over Z.";

    // ---- exceptions --------------------------------------------------------
    py::register_exception<core::NoNefBelow>(m, "NoNefBelow");
    py::register_exception<core::OffDiagonalNegative>(m, "OffDiagonalNegative");
    py::register_exception<core::LabelMismatch>(m, "LabelMismatch");
    py::register_exception<core::NonNegativeDiagonal>(m, "NonNegativeDiagonal");
    py::register_exception<core::CertificateFailure>(m, "CertificateFailure");
    py::register_exception<p1::InvalidDivisor>(m, "InvalidDivisor");
    py::register_exception<p1::InvalidCurve>(m, "InvalidCurve");
    py::register_exception<p1::UnsupportedFamily>(m, "UnsupportedFamily");
    py::register_exception<p1::UnsupportedConfiguration>(m, "UnsupportedConfiguration");
    py::register_exception<p1::QuadratureDivergence>(m, "QuadratureDivergence");
    py::register_exception<p1::NotComputed>(m, "NotComputed");
    static py::exception<p1::NoDecomposition> exc_nodec(m, "NoDecomposition");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const p1::NoDecomposition& e) {
            py::dict w;
            w["log_t0"] = e.witness.log_t0;
            w["epsilon"] = e.witness.epsilon;
            w["check_log_alpha"] = e.witness.check_log_alpha;
            w["check_log_beta"] = e.witness.check_log_beta;
            exc_nodec.attr("witness") = w;
            PyErr_SetString(exc_nodec.ptr(), e.what());
        }
    });
    py::register_exception<sec::ZeroSection>(m, "ZeroSection");
    py::register_exception<sec::InvalidSection>(m, "InvalidSection");
    py::register_exception<sec::EmptySections>(m, "EmptySections");
    py::register_exception<sec::BoxTooLarge>(m, "BoxTooLarge");
    py::register_exception<sec::AmbiguousBoundary>(m, "AmbiguousBoundary");

    // ---- tier 1: exact solver and certifier --------------------------------
    py::class_<core::ZariskiSystem>(m, "ZariskiSystem",
                                    "Validated system (labels, Q); build via validate_system().")
        .def_property_readonly("labels",
                               [](const core::ZariskiSystem& s) { return s.labels; })
        .def_property_readonly("q",
                               [](const core::ZariskiSystem& s) { return mat_out(s.q); })
        .def("size", &core::ZariskiSystem::size)
        .def("__repr__", [](const core::ZariskiSystem& s) {
            return "<ZariskiSystem n=" + std::to_string(s.size()) + ">";
        });

    py::class_<core::NegativityCertificate>(m, "NegativityCertificate")
        .def_readonly("support", &core::NegativityCertificate::support)
        .def_property_readonly("lower",
                               [](const core::NegativityCertificate& c) {
                                   return mat_out(c.lower);
                               })
        .def_property_readonly("upper",
                               [](const core::NegativityCertificate& c) {
                                   return mat_out(c.upper);
                               })
        .def_readonly("det_sign_ok", &core::NegativityCertificate::det_sign_ok)
        .def_readonly("symmetric_negdef", &core::NegativityCertificate::symmetric_negdef);

    py::class_<core::Decomposition>(m, "Decomposition")
        .def_property_readonly("positive",
                               [](const core::Decomposition& d) {
                                   return vector_out(d.positive);
                               })
        .def_property_readonly("negative",
                               [](const core::Decomposition& d) {
                                   return vector_out(d.negative);
                               })
        .def_readonly("support", &core::Decomposition::support)
        .def_readonly("certificate", &core::Decomposition::certificate)
        .def("__repr__", [](const core::Decomposition& d) {
            return "<Decomposition |supp z| = " + std::to_string(d.support.size()) + ">";
        });

    m.def(
        "validate_system",
        [](const py::sequence& q, const std::vector<std::string>& labels) {
            return core::validate_system(mat_in(q), labels);
        },
        py::arg("q"), py::arg("labels") = std::vector<std::string>{},
        "Checks Q[l][m] >= 0 off the diagonal; labels default to '0', '1', ...");
    m.def(
        "solve_decomposition",
        [](const core::ZariskiSystem& sys, const py::dict& x) {
            return core::solve_decomposition(sys, vector_in(x));
        },
        py::arg("system"), py::arg("x"),
        "Greatest nef y <= x and z = x - y (exact); raises NoNefBelow if none.");
    m.def(
        "certify_negative_part",
        [](const core::ZariskiSystem& sys, const std::vector<std::string>& support) {
            return core::certify_negative_part(sys, support);
        },
        py::arg("system"), py::arg("support"),
        "Triangular A, B >= 0 with A Q' B = -I exactly on the support block.");
    m.def(
        "is_nef",
        [](const core::ZariskiSystem& sys, const py::dict& v) {
            return core::is_nef(sys, vector_in(v));
        },
        py::arg("system"), py::arg("v"));
    m.def(
        "independence_check",
        [](const core::ZariskiSystem& sys, const std::vector<std::string>& support) {
            return core::independence_check(sys, support);
        },
        py::arg("system"), py::arg("support"));

    // ---- divisors on P^1_Z --------------------------------------------------
    py::class_<p1::ModelDivisor>(m, "ModelDivisor",
                                 "Arithmetic R-divisor from one of the closed families.")
        .def_static("one_kink", &p1::ModelDivisor::one_kink, py::arg("lam"),
                    py::arg("log_a"), py::arg("log_b"))
        .def_static("two_kink", &p1::ModelDivisor::two_kink, py::arg("log_alpha"),
                    py::arg("log_alpha_p"), py::arg("log_beta"), py::arg("log_beta_p"))
        .def_static("admissible", &p1::ModelDivisor::admissible, py::arg("lam"))
        .def_static("principal_shift", &p1::ModelDivisor::principal_shift,
                    py::arg("base"), py::arg("k"))
        .def_static("scaled", &p1::ModelDivisor::scaled, py::arg("base"), py::arg("t"))
        .def_static(
            "kinked",
            [](double c0, double a0, const std::vector<std::pair<double, double>>& kinks) {
                return p1::ModelDivisor::kinked(c0, a0, kinks_in(kinks));
            },
            py::arg("c0"), py::arg("a0"), py::arg("kinks"),
            "kinks is a list of (t, mass) pairs.")
        .def_static("zero", &p1::ModelDivisor::zero)
        .def_property_readonly(
            "family", [](const p1::ModelDivisor& d) { return family_name(d.family()); })
        .def("__repr__", [](const p1::ModelDivisor& d) {
            return "<ModelDivisor " + family_name(d.family()) + ">";
        });

    py::class_<p1::HorizontalCurve>(m, "HorizontalCurve")
        .def_static("c0", &p1::HorizontalCurve::c0)
        .def_static("cinf", &p1::HorizontalCurve::cinf)
        .def_static("rational_point", &p1::HorizontalCurve::rational_point, py::arg("m"),
                    py::arg("n"))
        .def("__repr__",
             [](const p1::HorizontalCurve& c) {
                 return "<HorizontalCurve " + curve_name(c) + ">";
             })
        .def("__str__", [](const p1::HorizontalCurve& c) { return curve_name(c); });

    py::class_<p1::DecompositionP1>(m, "DecompositionP1")
        .def_readonly("positive", &p1::DecompositionP1::positive)
        .def_readonly("negative_c0", &p1::DecompositionP1::negative_c0)
        .def_readonly("negative_cinf", &p1::DecompositionP1::negative_cinf)
        .def_readonly("theta", &p1::DecompositionP1::theta)
        .def_readonly("theta_p", &p1::DecompositionP1::theta_p);

    py::class_<p1::HodgeReport>(m, "HodgeReport")
        .def_readonly("self_pairing", &p1::HodgeReport::self_pairing)
        .def_readonly("vol_estimate", &p1::HodgeReport::vol_estimate)
        .def_readonly("holds", &p1::HodgeReport::holds)
        .def_readonly("method", &p1::HodgeReport::method);

    m.def("green_value", &p1::green_value, py::arg("divisor"), py::arg("log_r"),
          "Radial Green function at t = log r.");
    m.def("degree_on_curve", &p1::degree_on_curve, py::arg("divisor"), py::arg("curve"));
    m.def("pairing", &p1::pairing, py::arg("d1"), py::arg("d2"), py::arg("tol") = 1e-10,
          "Arithmetic intersection pairing by adaptive quadrature.");
    m.def("is_effective", &p1::is_effective, py::arg("divisor"));
    m.def("is_nef_divisor", &p1::is_nef_p1, py::arg("divisor"));
    m.def("is_big", &p1::is_big, py::arg("divisor"));
    m.def("is_adequate_sufficient", &p1::is_adequate_sufficient, py::arg("divisor"));
    m.def("zariski_decompose", &p1::zariski_decompose_p1, py::arg("divisor"),
          "Positive/negative parts; raises NoDecomposition with a witness when none exists.");
    m.def("volume", &p1::volume_p1, py::arg("divisor"), py::arg("tol") = 1e-10,
          "Volume by decomposition + self-pairing, cross-checked against the closed form.");
    m.def(
        "negative_part_matrix",
        [](const p1::ModelDivisor& d) {
            auto a = p1::negative_part_matrix(d);
            return std::vector<std::vector<double>>{{a[0][0], a[0][1]}, {a[1][0], a[1][1]}};
        },
        py::arg("divisor"),
        "Gram matrix [deg(N_i|C_j)] of the two-kink negative part (alpha = alpha' = 1).");
    m.def("hodge_index_check", &p1::hodge_index_check, py::arg("divisor"),
          py::arg("tol") = 1e-10);

    // ---- section lattices ---------------------------------------------------
    py::class_<sec::SectionSpace>(m, "SectionSpace")
        .def_readonly("n", &sec::SectionSpace::n)
        .def_readonly("divisor", &sec::SectionSpace::divisor)
        .def_readonly("exponents", &sec::SectionSpace::exponents)
        .def_readonly("log_norms", &sec::SectionSpace::log_norms)
        .def("__repr__", [](const sec::SectionSpace& s) {
            return "<SectionSpace n=" + std::to_string(s.n) + " dim=" +
                   std::to_string(s.exponents.size()) + ">";
        });

    py::class_<sec::IntegerSection>(m, "IntegerSection",
                                    "Integer section sum_i c_i z^{-i} from {i: c_i}.")
        .def(py::init([](const std::map<long long, long long>& coeffs) {
                 sec::IntegerSection s;
                 s.coeffs = coeffs;
                 return s;
             }),
             py::arg("coeffs"))
        .def_readonly("coeffs", &sec::IntegerSection::coeffs);

    py::class_<sec::CountResult>(m, "CountResult")
        .def_readonly("count", &sec::CountResult::count)
        .def_readonly("log_count", &sec::CountResult::log_count);

    py::class_<sec::CountBounds>(m, "CountBounds")
        .def_readonly("log_lower", &sec::CountBounds::log_lower)
        .def_readonly("log_upper", &sec::CountBounds::log_upper);

    py::class_<sec::DistortionTable>(m, "DistortionTable")
        .def_readonly("log_r", &sec::DistortionTable::log_r)
        .def_readonly("log_dist", &sec::DistortionTable::log_dist);

    py::class_<sec::DistGrowthReport>(m, "DistGrowthReport")
        .def_readonly("ns", &sec::DistGrowthReport::ns)
        .def_readonly("log_dn", &sec::DistGrowthReport::log_dn)
        .def_readonly("c_fit", &sec::DistGrowthReport::c_fit)
        .def_readonly("c_chain", &sec::DistGrowthReport::c_chain)
        .def_readonly("c", &sec::DistGrowthReport::c)
        .def_readonly("chain_ok", &sec::DistGrowthReport::chain_ok)
        .def_readonly("growth_exponent", &sec::DistGrowthReport::growth_exponent);

    py::class_<sec::GromovReport>(m, "GromovReport")
        .def_readonly("constant", &sec::GromovReport::constant)
        .def_readonly("constant_half", &sec::GromovReport::constant_half)
        .def_readonly("stable", &sec::GromovReport::stable)
        .def_readonly("constant_doubled", &sec::GromovReport::constant_doubled)
        .def_readonly("doubling_bounded", &sec::GromovReport::doubling_bounded)
        .def_readonly("samples", &sec::GromovReport::samples);

    py::class_<sec::SigmaDecomposition>(m, "SigmaDecomposition")
        .def_readonly("f_c0", &sec::SigmaDecomposition::f_c0)
        .def_readonly("f_cinf", &sec::SigmaDecomposition::f_cinf)
        .def_readonly("m_c0", &sec::SigmaDecomposition::m_c0)
        .def_readonly("m_cinf", &sec::SigmaDecomposition::m_cinf)
        .def_readonly("i_min_ball", &sec::SigmaDecomposition::i_min_ball)
        .def_readonly("i_max_ball", &sec::SigmaDecomposition::i_max_ball)
        .def_readonly("grid_log_r", &sec::SigmaDecomposition::grid_log_r)
        .def_readonly("green_m", &sec::SigmaDecomposition::green_m);

    py::class_<sec::MultiplicityReport>(m, "MultiplicityReport")
        .def_readonly("mu", &sec::MultiplicityReport::mu)
        .def_readonly("sequence", &sec::MultiplicityReport::sequence);

    py::class_<sec::OrthogonalityReport>(m, "OrthogonalityReport")
        .def_readonly("ns", &sec::OrthogonalityReport::ns)
        .def_readonly("values", &sec::OrthogonalityReport::values)
        .def_readonly("extrapolated_limit", &sec::OrthogonalityReport::extrapolated_limit)
        .def_readonly("nonnegative", &sec::OrthogonalityReport::nonnegative)
        .def_readonly("decreasing", &sec::OrthogonalityReport::decreasing)
        .def_readonly("limit_within_tol", &sec::OrthogonalityReport::limit_within_tol)
        .def_readonly("eval_consistent", &sec::OrthogonalityReport::eval_consistent);

    m.def("make_section_space", &sec::make_section_space, py::arg("divisor"), py::arg("n"),
          "Lattice of integer sections of H^0(nD) with per-monomial norm data.");
    m.def("sup_norm", &sec::sup_norm, py::arg("space"), py::arg("section"),
          py::arg("tol") = 1e-10);
    m.def("log_inner_monomial", &sec::log_inner_monomial, py::arg("space"), py::arg("i"),
          py::arg("tol") = 1e-10);
    m.def("log_inner", &sec::log_inner, py::arg("space"), py::arg("section"),
          py::arg("tol") = 1e-10);
    m.def("hhat0_exact", &sec::hhat0_exact, py::arg("space"), py::arg("tol") = 1e-10,
          "Exact count of integer sections with sup-norm <= 1 (zero included).");
    m.def("hhat0_bounds", &sec::hhat0_bounds, py::arg("space"),
          "Enumeration-free log-count bounds, usable at large n.");
    m.def("distortion", &sec::distortion, py::arg("space"), py::arg("sub_basis"),
          py::arg("log_radii"), py::arg("tol") = 1e-10);
    m.def("dist_growth_probe", &sec::dist_growth_probe, py::arg("divisor"), py::arg("n_max"),
          py::arg("tol") = 1e-10);
    m.def("gromov_probe", &sec::gromov_probe, py::arg("divisors"), py::arg("samples"),
          py::arg("tol") = 1e-10);
    m.def("sigma_decomposition", &sec::sigma_decomposition, py::arg("divisor"), py::arg("n"),
          py::arg("tol") = 1e-10);
    m.def("asymptotic_multiplicity", &sec::asymptotic_multiplicity, py::arg("divisor"),
          py::arg("curve"), py::arg("n_max"));
    m.def("orthogonality_probe", &sec::orthogonality_probe, py::arg("divisor"),
          py::arg("n_list"), py::arg("tol") = 0.05);
}
