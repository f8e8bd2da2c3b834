#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "coinlab/numerics.hpp"

namespace coinlab {

/// Closed-form raw parametrization of a closed strictly convex curve,
/// 2pi-periodic in t and positively oriented.
///
/// New table shapes are added by implementing this interface; derivatives up
/// to order four are needed for the second derivative of the curvature radius.
class CurveShape {
public:
    virtual ~CurveShape() = default;

    virtual Vec2 point(double t) const = 0;
    /// d^k p / dt^k for k = 1..4.
    virtual Vec2 derivative(int order, double t) const = 0;
    /// p(t0 + u) - p(t0). Overridden where a form exists whose direction
    /// relative to the frame at t0 does not suffer from rounding t0 + u.
    virtual Vec2 chord_from(double t0, double u) const { return point(t0 + u) - point(t0); }
    /// p'(t0 + u), with the same accuracy concern as chord_from.
    virtual Vec2 d1_from(double t0, double u) const { return derivative(1, t0 + u); }
    /// True when t is already an arclength parameter of a curve of length 2pi.
    virtual bool unit_speed() const { return false; }
    virtual std::string describe() const = 0;
};

enum class CurveKind { circle, ellipse };

class PlaneCurve {
public:
    explicit PlaneCurve(std::shared_ptr<const CurveShape> shape, CurveKind kind = CurveKind::ellipse,
                        double a = 1.0, double b = 1.0);

    Vec2 point(double t) const { return shape_->point(t); }
    Vec2 d1(double t) const { return shape_->derivative(1, t); }
    Vec2 d2(double t) const { return shape_->derivative(2, t); }
    Vec2 d3(double t) const { return shape_->derivative(3, t); }
    Vec2 d4(double t) const { return shape_->derivative(4, t); }
    Vec2 chord(double t0, double t1) const { return shape_->chord_from(t0, t1 - t0); }
    Vec2 chord_from(double t0, double u) const { return shape_->chord_from(t0, u); }
    Vec2 d1_from(double t0, double u) const { return shape_->d1_from(t0, u); }
    double speed(double t) const { return norm(d1(t)); }
    double raw_curvature(double t) const;

    CurveKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    bool unit_speed() const { return shape_->unit_speed(); }
    /// Circle, or an ellipse with equal axes.
    bool is_disc() const { return kind_ == CurveKind::circle || a_ == b_; }
    std::string describe() const { return shape_->describe(); }

private:
    std::shared_ptr<const CurveShape> shape_;
    CurveKind kind_;
    double a_;
    double b_;
};

PlaneCurve build_curve(CurveKind kind, double a = 1.0, double b = 1.0);
CurveKind parse_curve_kind(const std::string& name);

/// Cumulative arclength s(t) on a uniform t grid together with the inverse
/// map. Functions taking `phi` use the normalized parameter phi = sigma * s,
/// so one turn of the boundary has length 2pi. Both directions are lifted:
/// t and phi may be any real number and windings are carried through.
class ArcLengthTable {
public:
    ArcLengthTable(const PlaneCurve& curve, int n = 4096, double tol = 1e-12);

    double perimeter() const { return d_->length; }
    double scale() const { return d_->sigma; }
    double tolerance() const { return d_->tol; }
    int size() const { return d_->n; }
    const std::vector<double>& t_nodes() const { return d_->t; }
    const std::vector<double>& s_nodes() const { return d_->s; }

    /// Raw arclength from t = 0 to t (lifted).
    double arclength(double t) const;
    /// Raw arclength from t0 to t1, accurate for nearby arguments.
    double arclength_between(double t0, double t1) const;
    double phi_of_t(double t) const { return d_->sigma * arclength(t); }
    double t_of_phi(double phi) const;

private:
    struct Data {
        PlaneCurve curve;
        int n = 0;
        double tol = 0.0;
        double length = 0.0;
        double sigma = 1.0;
        double h = 0.0;
        std::vector<double> t;   // uniform nodes, t[n] = 2pi
        std::vector<double> s;   // s(t[i])
        // inverse nodes: t at uniform arclength, with dt/ds for Hermite seeding
        std::vector<double> inv_t;
        std::vector<double> inv_dt;
    };
    double local_arclength(double t0, double t1) const;
    double reduced_t_of_s(double s) const;

    std::shared_ptr<const Data> d_;
};

struct RhoValues {
    double rho = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Radius of curvature of the normalized boundary and its first two
/// derivatives with respect to phi.
class CurvatureProfile {
public:
    CurvatureProfile(PlaneCurve curve, ArcLengthTable table);

    RhoValues at_phi(double phi) const { return at_t(table_.t_of_phi(phi)); }
    RhoValues at_t(double t) const;
    double rho(double phi) const { return at_phi(phi).rho; }
    double rho_d1(double phi) const { return at_phi(phi).d1; }
    double rho_d2(double phi) const { return at_phi(phi).d2; }

    const PlaneCurve& curve() const { return curve_; }
    const ArcLengthTable& table() const { return table_; }

private:
    PlaneCurve curve_;
    ArcLengthTable table_;
};

struct RhoExtrema {
    bool disc = false;
    double min_d2 = 0.0;
    double argmin_d2 = 0.0;
    double max_d2 = 0.0;
    double argmax_d2 = 0.0;
    double max_d1 = 0.0;
    double argmax_d1 = 0.0;
    double max_abs_d2() const { return std::max(-min_d2, max_d2); }
};

/// Extremes of rho'' and rho' by dense sampling plus local refinement.
RhoExtrema min_rho_dd(const CurvatureProfile& profile, int grid = 8192);

/// Everything the dynamics needs about a table, built once.
class Table {
public:
    explicit Table(const PlaneCurve& curve, int nodes = 4096, double tol = 1e-12,
                   int extremum_grid = 8192);

    const PlaneCurve& curve() const { return profile_.curve(); }
    const ArcLengthTable& arclength() const { return profile_.table(); }
    const CurvatureProfile& profile() const { return profile_; }
    const RhoExtrema& extrema() const { return extrema_; }
    double scale() const { return profile_.table().scale(); }
    bool is_disc() const { return extrema_.disc; }

    /// Normalized boundary point gamma(phi) = sigma * p(t(phi)).
    Vec2 gamma(double phi) const;

private:
    CurvatureProfile profile_;
    RhoExtrema extrema_;
};

std::shared_ptr<const Table> make_table(CurveKind kind, double a = 1.0, double b = 1.0);

}  // namespace coinlab
