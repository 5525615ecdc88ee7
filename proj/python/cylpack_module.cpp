// Python bindings for the main cylpack operations. Exact rationals cross the
// boundary as "num/den" strings; enclosures as (lo, hi) float pairs rounded
// outward.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cylpack/certify.hpp"
#include "cylpack/construction.hpp"
#include "cylpack/density.hpp"

namespace py = pybind11;
using namespace cylpack;

namespace {

std::pair<double, double> bounds(const Interval& v) { return {v.lo_d(), v.hi_d()}; }

RLine3 line_from_strings(const std::array<std::string, 3>& anchor,
                         const std::array<std::string, 3>& dir) {
    return {{parse_rational(anchor[0]), parse_rational(anchor[1]), parse_rational(anchor[2])},
            {parse_rational(dir[0]), parse_rational(dir[1]), parse_rational(dir[2])}};
}

ShellParams shell_params(long a_base, long a_growth, long t_exp, int k_max,
                         const std::string& alpha) {
    ShellParams p;
    p.a_base = a_base;
    p.a_growth = a_growth;
    p.t_exponent = t_exp;
    p.k_max = k_max;
    p.angle_exponent = parse_rational(alpha);
    return p;
}

py::dict certificate_dict(const Certificate& cert) {
    py::dict d;
    d["status"] = cert_status_name(cert.status);
    d["pairs_checked"] = cert.pairs_checked;
    d["classes_checked"] = cert.classes_checked;
    d["parallel_pairs"] = cert.parallel_pairs;
    d["touching_pairs"] = cert.touching_pairs;
    d["unknown_pairs"] = cert.unknown_pairs;
    if (cert.min_distance) d["min_distance"] = bounds(*cert.min_distance);
    d["json"] = cert.to_json();
    return d;
}

}  // namespace

PYBIND11_MODULE(_cylpack, m) {
    m.doc() = "non-parallel cylinder packings: construction, certification, density";

    // numerics
    m.def(
        "cos_enclosure",
        [](const std::string& x, Prec prec) {
            return bounds(iv_cos(Interval::from_rational(parse_rational(x), prec)));
        },
        py::arg("x"), py::arg("prec") = 64);
    m.def(
        "sin_enclosure",
        [](const std::string& x, Prec prec) {
            return bounds(iv_sin(Interval::from_rational(parse_rational(x), prec)));
        },
        py::arg("x"), py::arg("prec") = 64);
    m.def(
        "sqrt_enclosure",
        [](const std::string& x, Prec prec) {
            return bounds(iv_sqrt(Interval::from_rational(parse_rational(x), prec)));
        },
        py::arg("x"), py::arg("prec") = 64);
    m.def(
        "pi_enclosure", [](Prec prec) { return bounds(iv_pi(prec)); }, py::arg("prec") = 64);

    // geometry
    m.def("skew_distance_sq",
          [](const std::array<std::string, 3>& a1, const std::array<std::string, 3>& d1,
             const std::array<std::string, 3>& a2, const std::array<std::string, 3>& d2) {
              return rat_string(
                  skew_distance_sq(line_from_strings(a1, d1), line_from_strings(a2, d2)));
          });
    m.def("are_parallel",
          [](const std::array<std::string, 3>& a1, const std::array<std::string, 3>& d1,
             const std::array<std::string, 3>& a2, const std::array<std::string, 3>& d2) {
              return are_parallel(line_from_strings(a1, d1), line_from_strings(a2, d2));
          });
    m.def("ring_distance_sq", [](const std::string& d1, const std::string& d2,
                                 const std::string& c, const std::string& k, const std::string& l) {
        return rat_string(ring_distance_sq(parse_rational(d1), parse_rational(d2),
                                           parse_rational(c), parse_rational(k),
                                           parse_rational(l)));
    });
    m.def("axis_distance_sq",
          [](const std::string& d1, const std::string& d2, const std::string& c,
             const std::string& t1, const std::string& t2) {
              return rat_string(axis_distance_sq(parse_rational(d1), parse_rational(d2),
                                                 parse_rational(c), parse_rational(t1),
                                                 parse_rational(t2)));
          });
    m.def("separation_split", [](const std::string& d1, const std::string& d2,
                                 const std::string& c, const std::string& k, const std::string& l) {
        auto s = separation_split(parse_rational(d1), parse_rational(d2), parse_rational(c),
                                  parse_rational(k), parse_rational(l));
        py::dict out;
        out["margin_printed"] = rat_string(s.margin_printed);
        out["margin_symmetric"] = rat_string(s.margin_symmetric);
        out["identity_printed"] = s.identity_printed;
        out["identity_symmetric"] = s.identity_symmetric;
        out["printed_consistent"] = s.printed_consistent;
        out["symmetric_consistent"] = s.symmetric_consistent;
        out["sign_dist_minus_one"] = s.sign_dist_minus_one;
        return out;
    });

    // construction parameters
    m.def("select_ring_params", [](const std::string& eps) {
        RingParams p = select_ring_params(parse_rational(eps));
        py::dict out;
        out["epsilon"] = rat_string(p.epsilon);
        out["l"] = rat_string(p.l);
        out["k_sq"] = rat_string(p.k_sq);
        out["r0"] = p.r0.get_str();
        out["delta"] = rat_string(p.delta);
        return out;
    });
    m.def("ring_count", [](const std::string& n, const std::string& eps) {
        return ring_count(BigInt(n), parse_rational(eps)).get_str();
    });
    m.def("shell_sequences", [](long a_base, long a_growth, long t_exp, int k_max) {
        auto seq = shell_sequences(shell_params(a_base, a_growth, t_exp, k_max, "39/40"));
        std::vector<std::pair<long, std::string>> out;
        for (auto& [a, t] : seq) out.emplace_back(a, t.get_str());
        return out;
    });
    m.def("check_nonparallel_shells", [](long a_base, long a_growth, long t_exp, int k_max) {
        return check_nonparallel_shells(shell_params(a_base, a_growth, t_exp, k_max, "39/40"))
            .all_pass;
    });

    // packings and certification
    m.def(
        "write_ring_packing",
        [](const std::string& eps, const std::string& n_lo, const std::string& n_hi,
           const std::string& path) {
            RingParams params = select_ring_params(parse_rational(eps));
            Packing p = build_ring_packing(params, BigInt(n_lo), BigInt(n_hi));
            write_packing_file(path, p, config_hash_hex("py:" + eps + ":" + n_lo + ":" + n_hi));
            return p.cylinders.size();
        },
        py::arg("eps"), py::arg("n_lo"), py::arg("n_hi"), py::arg("path"));
    m.def(
        "certify_packing_file",
        [](const std::string& path, Prec precision, std::uint64_t seed) {
            Packing p = read_packing_file(path);
            CertifyOptions opts;
            opts.precision_ceiling = precision;
            opts.seed = seed;
            opts.radius_threshold = p.radius();
            return certificate_dict(certify_packing(p, PairStrategy{}, opts));
        },
        py::arg("path"), py::arg("precision") = 1024, py::arg("seed") = 1);
    m.def(
        "certify_ring_range",
        [](const std::string& eps, const std::string& n_lo, const std::string& n_hi,
           std::uint64_t far_samples, std::uint64_t seed) {
            RingParams params = select_ring_params(parse_rational(eps));
            RingRangeOptions opts;
            opts.seed = seed;
            if (far_samples) {
                opts.far_n_lo = params.r0;
                opts.far_n_hi = 4 * params.r0;
                opts.far_samples = far_samples;
            }
            return certificate_dict(certify_ring_range(params, BigInt(n_lo), BigInt(n_hi), opts));
        },
        py::arg("eps"), py::arg("n_lo"), py::arg("n_hi"), py::arg("far_samples") = 0,
        py::arg("seed") = 1);
    m.def(
        "shell_filter_audit",
        [](const std::string& min_dist, long a_base, long a_growth, long t_exp, int k_max,
           const std::string& alpha) {
            auto res = shell_filter(Lattice2::hexagonal(parse_rational(min_dist)),
                                    shell_params(a_base, a_growth, t_exp, k_max, alpha));
            std::vector<std::tuple<int, std::uint64_t, std::uint64_t, std::uint64_t>> out;
            for (auto& a : res.audit) out.emplace_back(a.shell, a.candidates, a.kept, a.removed);
            return out;
        },
        py::arg("min_dist"), py::arg("a_base") = 1, py::arg("a_growth") = 2, py::arg("t_exp") = 6,
        py::arg("k_max") = 3, py::arg("alpha") = "39/40");
    m.def(
        "certify_shell",
        [](const std::string& min_dist, long a_base, long a_growth, long t_exp, int k_max,
           const std::string& alpha, const std::string& eps) {
            ShellBuildOptions opts;
            opts.epsilon = parse_rational(eps);
            Packing p = build_shell_packing(Lattice2::hexagonal(parse_rational(min_dist)),
                                            shell_params(a_base, a_growth, t_exp, k_max, alpha),
                                            opts);
            CertifyOptions copts;
            copts.radius_threshold = p.radius();
            return certificate_dict(certify_shell_within(p, copts));
        },
        py::arg("min_dist"), py::arg("a_base") = 1, py::arg("a_growth") = 2, py::arg("t_exp") = 6,
        py::arg("k_max") = 3, py::arg("alpha") = "39/40", py::arg("eps") = "1/10");

    // density
    m.def(
        "ring_density_profile",
        [](const std::string& eps, const std::string& n_lo, const std::string& n_hi, int exp_lo,
           int exp_hi) {
            CircleSet circles =
                ring_dual_circle_classes(parse_rational(eps), BigInt(n_lo), BigInt(n_hi));
            DensityProfile prof = density_profile(circles, rat(1, 2),
                                                  Schedule::powers_of_two(exp_lo, exp_hi), 96);
            std::vector<std::tuple<std::string, double, double>> out;
            for (size_t i = 0; i < prof.values.size(); ++i)
                out.emplace_back(rat_string(prof.schedule.radii[i]), prof.values[i].lo_d(),
                                 prof.values[i].hi_d());
            return out;
        },
        py::arg("eps"), py::arg("n_lo"), py::arg("n_hi"), py::arg("exp_lo"), py::arg("exp_hi"));
    m.def(
        "ring_upper_density_estimate",
        [](const std::string& eps, const std::string& n_lo, const std::string& n_hi, int grid,
           int exp_lo, int exp_hi) {
            CircleSet circles =
                ring_dual_circle_classes(parse_rational(eps), BigInt(n_lo), BigInt(n_hi));
            std::vector<DensityProfile> fams;
            for (int i = 0; i < grid; ++i)
                fams.push_back(density_profile(
                    circles, rat(1, 2),
                    Schedule::subsequence(rat(i, grid - 1), exp_lo, exp_hi), 96));
            return bounds(subsequence_max_estimate(fams, rat(1, 20)).estimate);
        },
        py::arg("eps"), py::arg("n_lo"), py::arg("n_hi"), py::arg("grid"), py::arg("exp_lo"),
        py::arg("exp_hi"));
    m.def("upper_density_curve", [](const std::string& c, const std::string& eps) {
        return bounds(upper_density_curve(parse_rational(c), parse_rational(eps), 96));
    });
    m.def("curve_argmax", [](const std::string& eps) {
        CurveArgmax mx = curve_argmax(parse_rational(eps), 96);
        return py::make_tuple(rat_string(mx.c_star), rat_string(mx.pi_coefficient),
                              bounds(mx.value));
    });
    m.def(
        "disc_ball_area",
        [](const std::string& center_norm_sq, const std::string& disc_r, const std::string& ball_r) {
            return bounds(disc_ball_area(parse_rational(center_norm_sq), parse_rational(disc_r),
                                         parse_rational(ball_r), 96));
        });
    m.def(
        "hex_count_in_ball",
        [](const std::string& min_dist, const std::string& radius) {
            return Lattice2::hexagonal(parse_rational(min_dist)).count_in_ball(parse_rational(radius));
        },
        py::arg("min_dist"), py::arg("radius"));
    m.def(
        "sector_count",
        [](const std::string& min_dist, const std::string& radius, const std::string& theta1,
           const std::string& theta2) {
            SectorCounter counter(Lattice2::hexagonal(parse_rational(min_dist)),
                                  parse_rational(radius));
            auto pred = counter.predicted(parse_rational(theta1), parse_rational(theta2), 96);
            return py::make_tuple(counter.count(parse_rational(theta1), parse_rational(theta2)),
                                  bounds(pred));
        },
        py::arg("min_dist"), py::arg("radius"), py::arg("theta1"), py::arg("theta2"));
    m.def(
        "mc_volume_check",
        [](const std::string& x, const std::string& y, const std::string& h,
           const std::string& radius, const std::string& ball_r, std::uint64_t samples,
           std::uint64_t seed) {
            Rational rx = parse_rational(x), ry = parse_rational(y);
            RLine3 axis{{rx, ry, Rational(0)}, {ry, -rx, parse_rational(h)}};
            auto res = mc_volume_check(axis, parse_rational(radius), parse_rational(ball_r),
                                       samples, seed);
            py::dict out;
            out["volume"] = res.volume;
            out["volume_dual"] = res.volume_dual;
            out["stderr_diff"] = res.stderr_diff;
            out["hypothesis_ok"] = res.hypothesis_ok;
            return out;
        },
        py::arg("x"), py::arg("y"), py::arg("h"), py::arg("radius") = "1/2",
        py::arg("ball_r") = "30", py::arg("samples") = 1000000, py::arg("seed") = 1);
}
