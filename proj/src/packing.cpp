#include "cylpack/packing.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cylpack/formulas.hpp"

namespace cylpack {

namespace {

// If ksq is a perfect square of a rational, fold symbolic heights into plain
// rationals so exact comparisons see through the representation.
std::optional<Rational> rational_sqrt(const Rational& q) {
    if (sgn(q) < 0) return std::nullopt;
    BigInt num_root, den_root;
    if (!mpz_perfect_square_p(q.get_num().get_mpz_t())) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_den().get_mpz_t())) return std::nullopt;
    mpz_sqrt(num_root.get_mpz_t(), q.get_num().get_mpz_t());
    mpz_sqrt(den_root.get_mpz_t(), q.get_den().get_mpz_t());
    return rat(num_root, den_root);
}

std::optional<Rational> height_as_rational(const AxisHeight& h, const Rational& ksq) {
    if (h.k_coeff == 0) return h.base;
    if (auto s = rational_sqrt(ksq)) return h.base + h.k_coeff * *s;
    return std::nullopt;
}

}  // namespace

Interval AxisHeight::enclosure(const Rational& ksq, Prec prec) const {
    Interval out = Interval::from_rational(base, prec);
    if (k_coeff != 0)
        out = out + Interval::from_rational(k_coeff, prec) *
                        iv_sqrt(Interval::from_rational(ksq, prec));
    return out;
}

Rational Axis::anchor_norm_sq(const Lattice2* lattice) const {
    if (const auto* r = std::get_if<RationalAnchor>(&anchor)) return r->x * r->x + r->y * r->y;
    if (const auto* p = std::get_if<PolarAnchor>(&anchor)) return p->norm * p->norm;
    const auto& l = std::get<LatticeAnchor>(anchor);
    if (!lattice) throw std::invalid_argument("lattice anchor without a lattice");
    return l.scale * l.scale * lattice->norm_sq(l.point);
}

Interval Axis::anchor_x(const Lattice2* lattice, Prec prec) const {
    if (const auto* r = std::get_if<RationalAnchor>(&anchor)) return Interval::from_rational(r->x, prec);
    if (const auto* p = std::get_if<PolarAnchor>(&anchor))
        return Interval::from_rational(p->norm, prec) * interval_cos(p->angle, prec);
    const auto& l = std::get<LatticeAnchor>(anchor);
    if (!lattice) throw std::invalid_argument("lattice anchor without a lattice");
    return Interval::from_rational(l.scale, prec) * lattice->coord_x(l.point, prec);
}

Interval Axis::anchor_y(const Lattice2* lattice, Prec prec) const {
    if (const auto* r = std::get_if<RationalAnchor>(&anchor)) return Interval::from_rational(r->y, prec);
    if (const auto* p = std::get_if<PolarAnchor>(&anchor))
        return Interval::from_rational(p->norm, prec) * interval_sin(p->angle, prec);
    const auto& l = std::get<LatticeAnchor>(anchor);
    if (!lattice) throw std::invalid_argument("lattice anchor without a lattice");
    return Interval::from_rational(l.scale, prec) * lattice->coord_y(l.point, prec);
}

ILine3 Axis::to_line(const Lattice2* lattice, const Rational& ksq, Prec prec) const {
    Interval x = anchor_x(lattice, prec);
    Interval y = anchor_y(lattice, prec);
    Interval zero(0L, prec);
    if (vertical) return {{x, y, zero}, {zero, zero, Interval(1, prec)}};
    return {{x, y, zero}, {y, -x, height.enclosure(ksq, prec)}};
}

std::optional<RLine3> Axis::to_rational_line(const Lattice2*) const {
    const auto* r = std::get_if<RationalAnchor>(&anchor);
    if (!r) return std::nullopt;
    if (vertical) return RLine3{{r->x, r->y, Rational(0)}, {Rational(0), Rational(0), Rational(1)}};
    if (height.k_coeff != 0) return std::nullopt;
    return RLine3{{r->x, r->y, Rational(0)}, {r->y, -r->x, height.base}};
}

Rational Packing::radius() const {
    if (cylinders.empty()) throw std::logic_error("radius of an empty packing");
    const Rational& r = cylinders.front().radius;
    for (const auto& c : cylinders)
        if (c.radius != r) throw std::logic_error("packing radii differ");
    return r;
}

void Packing::validate() const {
    if (!cylinders.empty()) (void)radius();
    for (const auto& c : cylinders) {
        if (c.radius <= 0) throw std::logic_error("non-positive cylinder radius");
        if (!c.axis.vertical && std::holds_alternative<LatticeAnchor>(c.axis.anchor) && !lattice)
            throw std::logic_error("lattice anchor without a lattice");
    }
}

PairGeometry axis_pair_geometry(const Axis& a1, const Axis& a2, const Lattice2* lattice) {
    PairGeometry g;
    g.n1 = a1.anchor_norm_sq(lattice);
    g.n2 = a2.anchor_norm_sq(lattice);
    g.h1 = a1.height;
    g.h2 = a2.height;

    const auto* r1 = std::get_if<RationalAnchor>(&a1.anchor);
    const auto* r2 = std::get_if<RationalAnchor>(&a2.anchor);
    if (r1 && r2) {
        g.dot = r1->x * r2->x + r1->y * r2->y;
        return g;
    }
    const auto* l1 = std::get_if<LatticeAnchor>(&a1.anchor);
    const auto* l2 = std::get_if<LatticeAnchor>(&a2.anchor);
    if (l1 && l2) {
        if (!lattice) throw std::invalid_argument("lattice anchor without a lattice");
        g.dot = l1->scale * l2->scale * lattice->dot(l1->point, l2->point);
        return g;
    }
    const auto* p1 = std::get_if<PolarAnchor>(&a1.anchor);
    const auto* p2 = std::get_if<PolarAnchor>(&a2.anchor);
    if (p1 && p2) {
        Rational diff = angle_diff(p1->angle, p2->angle);
        g.angle_diff = diff;
        if (diff == 0) g.dot = p1->norm * p2->norm;  // collinear, same ray
        return g;
    }
    return g;  // mixed kinds: interval fallback
}

namespace {

// Exact distance^2 for a parallel axis pair from Gram data:
// |A2-A1|^2 - |cross(A1,A2)|^2 / (n1 + T1^2), with |cross|^2 = n1 n2 - dot^2.
Rational parallel_pair_distance_sq(const Rational& n1, const Rational& n2, const Rational& dot,
                                   const Rational& t1) {
    return (n1 + n2 - 2 * dot) - (n1 * n2 - dot * dot) / (n1 + t1 * t1);
}

}  // namespace

AxisDistanceSq axis_pair_distance_sq(const Axis& a1, const Axis& a2, const Lattice2* lattice,
                                     const Rational& ksq, Prec prec) {
    AxisDistanceSq out{std::nullopt, Interval(0L, prec)};
    if (a1.vertical || a2.vertical) {
        // Fall through to the coordinate route below unless both are vertical.
        if (a1.vertical && a2.vertical) {
            PairGeometry g = axis_pair_geometry(a1, a2, lattice);
            if (g.dot) {
                out.exact = g.n1 + g.n2 - 2 * *g.dot;
                out.enclosure = Interval::from_rational(*out.exact, prec);
                return out;
            }
        }
        Interval d = skew_distance_sq(a1.to_line(lattice, ksq, prec), a2.to_line(lattice, ksq, prec));
        out.enclosure = d;
        return out;
    }

    PairGeometry g = axis_pair_geometry(a1, a2, lattice);
    auto h1 = height_as_rational(g.h1, ksq);
    auto h2 = height_as_rational(g.h2, ksq);

    if (g.angle_diff && *g.angle_diff == 0 && g.dot) {
        // Collinear anchors: the axes lie in parallel vertical planes and
        // the distance is exactly the planar gap |A1 A2|, whether or not the
        // directions are proportional.
        out.exact = g.n1 + g.n2 - 2 * *g.dot;
        out.enclosure = Interval::from_rational(*out.exact, prec);
        return out;
    }

    if (g.dot && h1 && h2) {
        auto parts = axis_distance_parts_gram(g.n1, g.n2, *g.dot, *h1, *h2);
        if (parts.den > 0) {
            out.exact = parts.num / parts.den;
        } else {
            out.exact = parallel_pair_distance_sq(g.n1, g.n2, *g.dot, *h1);
        }
        out.enclosure = Interval::from_rational(*out.exact, prec);
        return out;
    }

    Interval t1 = g.h1.enclosure(ksq, prec);
    Interval t2 = g.h2.enclosure(ksq, prec);
    if (g.angle_diff || g.dot) {
        // Closed-form route with an interval cosine / heights.
        Interval d1 = iv_sqrt(Interval::from_rational(g.n1, prec));
        Interval d2 = iv_sqrt(Interval::from_rational(g.n2, prec));
        Interval c = g.angle_diff
                         ? iv_cos(Interval::from_rational(*g.angle_diff, prec))
                         : Interval::from_rational(*g.dot, prec) / (d1 * d2);
        auto parts = axis_distance_parts(d1, d2, c, t1, t2);
        if (parts.den.sign() > 0) {
            out.enclosure = parts.num / parts.den;
            return out;
        }
    }
    out.enclosure =
        skew_distance_sq(a1.to_line(lattice, ksq, prec), a2.to_line(lattice, ksq, prec));
    return out;
}

Tri axes_parallel(const Axis& a1, const Axis& a2, const Lattice2* lattice, const Rational& ksq) {
    if (a1.vertical || a2.vertical) {
        if (a1.vertical && a2.vertical) return Tri::kTrue;
        const Axis& tilted = a1.vertical ? a2 : a1;
        // (y, -x, H) is vertical only for a zero anchor.
        return tilted.anchor_norm_sq(lattice) == 0 ? Tri::kTrue : Tri::kFalse;
    }

    auto heights_match = [&](const Rational& lambda) -> bool {
        auto h1 = height_as_rational(a1.height, ksq);
        auto h2 = height_as_rational(a2.height, ksq);
        if (h1 && h2) return *h2 == lambda * *h1;
        return a2.height.base == lambda * a1.height.base &&
               a2.height.k_coeff == lambda * a1.height.k_coeff;
    };

    const auto* r1 = std::get_if<RationalAnchor>(&a1.anchor);
    const auto* r2 = std::get_if<RationalAnchor>(&a2.anchor);
    if (r1 && r2) {
        bool zero1 = r1->x == 0 && r1->y == 0, zero2 = r2->x == 0 && r2->y == 0;
        if (zero1 || zero2) return (zero1 && zero2) ? Tri::kTrue : Tri::kFalse;
        if (r1->x * r2->y - r2->x * r1->y != 0) return Tri::kFalse;
        Rational lambda = r1->x != 0 ? r2->x / r1->x : r2->y / r1->y;
        if (lambda <= 0) return Tri::kFalse;  // heights are positive
        return heights_match(lambda) ? Tri::kTrue : Tri::kFalse;
    }
    const auto* l1 = std::get_if<LatticeAnchor>(&a1.anchor);
    const auto* l2 = std::get_if<LatticeAnchor>(&a2.anchor);
    if (l1 && l2) {
        const auto &p1 = l1->point, &p2 = l2->point;
        bool zero1 = p1.a == 0 && p1.b == 0, zero2 = p2.a == 0 && p2.b == 0;
        if (zero1 || zero2) return (zero1 && zero2) ? Tri::kTrue : Tri::kFalse;
        if (static_cast<long long>(p1.a) * p2.b != static_cast<long long>(p2.a) * p1.b)
            return Tri::kFalse;
        Rational t = p1.a != 0 ? rat(static_cast<long>(p2.a), static_cast<long>(p1.a))
                               : rat(static_cast<long>(p2.b), static_cast<long>(p1.b));
        Rational lambda = t * l2->scale / l1->scale;
        if (lambda <= 0) return Tri::kFalse;
        return heights_match(lambda) ? Tri::kTrue : Tri::kFalse;
    }
    const auto* p1 = std::get_if<PolarAnchor>(&a1.anchor);
    const auto* p2 = std::get_if<PolarAnchor>(&a2.anchor);
    if (p1 && p2) {
        // Grid angles are rational radians in [0, 2*pi); distinct values are
        // never congruent mod pi, so in-plane parts are parallel only when
        // the angles are equal.
        if (p1->angle.radians() != p2->angle.radians()) return Tri::kFalse;
        Rational lambda = p2->norm / p1->norm;
        return heights_match(lambda) ? Tri::kTrue : Tri::kFalse;
    }
    // Mixed anchor kinds: decide from enclosures with escalation.
    for (Prec p = kDefaultPrec; p <= 4096; p *= 2) {
        Tri t = are_parallel(a1.to_line(lattice, ksq, p), a2.to_line(lattice, ksq, p));
        if (t != Tri::kUnknown) return t;
    }
    return Tri::kUnknown;
}

CircleSet dual_circle_classes(const Packing& p) {
    std::map<Rational, std::uint64_t> groups;
    for (const auto& c : p.cylinders) {
        if (!c.axis.vertical && c.axis.height.k_coeff == 0 && c.axis.height.base == 0)
            throw std::domain_error("axis parallel to plane");
        groups[c.axis.anchor_norm_sq(p.lattice_ptr())] += 1;
    }
    CircleSet out;
    out.reserve(groups.size());
    for (const auto& [nsq, count] : groups) out.push_back({nsq, count});
    return out;
}

CylinderSpec dual_cylinder(const CylinderSpec& c) {
    if (!c.axis.vertical && c.axis.height.k_coeff == 0 && c.axis.height.base == 0)
        throw std::domain_error("axis parallel to plane");
    CylinderSpec d = c;
    d.axis.vertical = true;
    return d;
}

// ------------------------------ serialization ------------------------------

namespace {

const char* kind_name(ConstructionKind k) {
    switch (k) {
        case ConstructionKind::kRing: return "ring";
        case ConstructionKind::kShell: return "shell";
        default: return "explicit";
    }
}

ConstructionKind kind_from(const std::string& s) {
    if (s == "ring") return ConstructionKind::kRing;
    if (s == "shell") return ConstructionKind::kShell;
    return ConstructionKind::kExplicit;
}

}  // namespace

void write_packing(std::ostream& os, const Packing& p, const std::string& config_hash) {
    os << "# cylpack packing v1\n";
    os << "# hash=" << config_hash << "\n";
    os << "# kind=" << kind_name(p.kind) << "\n";
    os << "# provenance=" << p.provenance << "\n";
    os << "# ksq=" << rat_string(p.height_ksq) << "\n";
    if (p.shell_alpha != 0) os << "# alpha=" << rat_string(p.shell_alpha) << "\n";
    if (p.lattice) os << "# lattice=" << p.lattice->describe() << "\n";
    if (!p.shell_audit.empty()) {
        os << "# shells=";
        for (size_t i = 0; i < p.shell_audit.size(); ++i) {
            const auto& s = p.shell_audit[i];
            os << (i ? "," : "") << s.shell << ":" << s.candidates << ":" << s.kept << ":"
               << s.removed;
        }
        os << "\n";
    }
    os << "# count=" << p.cylinders.size() << "\n";
    for (size_t i = 0; i < p.cylinders.size(); ++i) {
        const auto& c = p.cylinders[i];
        std::string tag = kind_name(p.kind);
        if (!p.shell_of.empty()) tag += std::to_string(p.shell_of[i]);
        if (const auto* r = std::get_if<RationalAnchor>(&c.axis.anchor)) {
            os << "R " << rat_string(r->x) << " " << rat_string(r->y);
        } else if (const auto* po = std::get_if<PolarAnchor>(&c.axis.anchor)) {
            os << "P " << rat_string(po->norm) << " " << po->angle.j.get_str() << " "
               << po->angle.k << " " << rat_string(po->angle.epsilon);
        } else {
            const auto& l = std::get<LatticeAnchor>(c.axis.anchor);
            os << "L " << l.point.a << " " << l.point.b << " " << rat_string(l.scale);
        }
        os << " " << rat_string(c.axis.height.base) << " " << rat_string(c.axis.height.k_coeff)
           << " " << rat_string(c.radius) << " " << tag;
        if (c.axis.vertical) os << " V";
        os << "\n";
    }
}

Packing read_packing(std::istream& is) {
    Packing p;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto starts = [&](const char* prefix) { return line.rfind(prefix, 0) == 0; };
            if (starts("# kind=")) p.kind = kind_from(line.substr(7));
            else if (starts("# provenance=")) p.provenance = line.substr(13);
            else if (starts("# ksq=")) p.height_ksq = parse_rational(line.substr(6));
            else if (starts("# alpha=")) p.shell_alpha = parse_rational(line.substr(8));
            else if (starts("# lattice=hex ")) p.lattice = Lattice2::hexagonal(parse_rational(line.substr(14)));
            else if (starts("# shells=")) {
                std::stringstream ss(line.substr(9));
                std::string item;
                while (std::getline(ss, item, ',')) {
                    ShellAudit a;
                    if (sscanf(item.c_str(), "%d:%lu:%lu:%lu", &a.shell, &a.candidates, &a.kept,
                               &a.removed) == 4)
                        p.shell_audit.push_back(a);
                }
            }
            continue;
        }
        std::stringstream ss(line);
        std::string type;
        ss >> type;
        CylinderSpec c;
        if (type == "R") {
            std::string x, y;
            ss >> x >> y;
            c.axis.anchor = RationalAnchor{parse_rational(x), parse_rational(y)};
        } else if (type == "P") {
            std::string norm, j, eps;
            long k;
            ss >> norm >> j >> k >> eps;
            AngleSpec a;
            a.j = BigInt(j);
            a.k = k;
            a.epsilon = parse_rational(eps);
            c.axis.anchor = PolarAnchor{parse_rational(norm), a};
        } else if (type == "L") {
            LatticeAnchor l;
            std::string scale;
            ss >> l.point.a >> l.point.b >> scale;
            l.scale = parse_rational(scale);
            c.axis.anchor = l;
        } else {
            throw std::runtime_error("bad packing record: " + line);
        }
        std::string hb, hk, radius, tag, flag;
        ss >> hb >> hk >> radius >> tag;
        c.axis.height = AxisHeight{parse_rational(hb), parse_rational(hk)};
        c.radius = parse_rational(radius);
        if (ss >> flag && flag == "V") c.axis.vertical = true;
        if (tag.rfind("shell", 0) == 0 && tag.size() > 5)
            p.shell_of.push_back(std::stoi(tag.substr(5)));
        p.cylinders.push_back(std::move(c));
    }
    if (p.shell_of.size() != p.cylinders.size()) p.shell_of.clear();
    p.validate();
    return p;
}

void write_packing_file(const std::string& path, const Packing& p, const std::string& config_hash) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_packing(os, p, config_hash);
}

Packing read_packing_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_packing(is);
}

}  // namespace cylpack
