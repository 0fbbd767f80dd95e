#pragma once
// Catalog of boundary weights on the unit circle. Every weight exposes:
//   * pointwise evaluation (periodic in the angle),
//   * a singularity registry: the finite set of angles where the weight is
//     unbounded, zero, or merely non-smooth, with local exponent data
//     beta(th0 + s) ~ |s|^p (log 1/|s|)^q and, for graded singularities, the
//     analytic per-side mass tail(h) = integral of beta over (th0, th0+h),
//   * eval_offset(j, s): evaluation through the *signed displacement* s from
//     registry angle j. Panels adjacent to a singular angle are integrated in
//     offset coordinates; evaluating through the absolute angle there loses
//     relative accuracy to cancellation, which this interface avoids.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "steklov/errors.hpp"

namespace steklov {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline double wrap_angle(double th) {
    th = std::fmod(th, two_pi);
    if (th < 0) th += two_pi;
    return th;
}

// Shortest round-trip decimal formatting (used for canonical descriptors and
// report fields; deterministic across runs).
inline std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

struct singularity {
    double angle = 0;  // in [0, 2*pi)
    double p = 0;      // local power
    double q = 0;      // local log-power
    bool grade = false;
    std::function<double(double)> tail;  // per-side mass on (0, h]; may be empty
};

class weight {
  public:
    virtual ~weight() = default;

    // beta(th); periodic in th. Returns +infinity at unbounded registry angles.
    virtual double eval(double th) const = 0;

    // beta(angle_j + s) via the signed displacement s. The default evaluates
    // through the absolute angle; variants with graded singularities override
    // this with a cancellation-free local form.
    virtual double eval_offset(int j, double s) const {
        return eval(singularities()[j].angle + s);
    }

    virtual const std::vector<singularity>& singularities() const {
        static const std::vector<singularity> none;
        return none;
    }

    virtual bool in_llogl() const { return true; }

    virtual std::string descriptor() const = 0;
};

using weight_ptr = std::shared_ptr<const weight>;

// ---------------------------------------------------------------------------

class constant_weight final : public weight {
  public:
    explicit constant_weight(double c) : c_(c) {
        if (!(c > 0) || !std::isfinite(c))
            throw error(errc::invalid_parameter, "constant weight requires c > 0");
    }
    double eval(double) const override { return c_; }
    double value() const { return c_; }
    std::string descriptor() const override { return "constant:" + format_number(c_); }

  private:
    double c_;
};

// beta(th) = |phi'(e^{i th})| for phi(z) = (z+1)^2, i.e. 4|cos(th/2)|.
class cardioid_weight final : public weight {
  public:
    cardioid_weight() {
        sings_ = {{std::numbers::pi, 1.0, 0.0, false, nullptr}};
    }
    double eval(double th) const override { return 4.0 * std::abs(std::cos(th / 2)); }
    double eval_offset(int, double s) const override {
        return 4.0 * std::abs(std::sin(s / 2));
    }
    const std::vector<singularity>& singularities() const override { return sings_; }
    std::string descriptor() const override { return "cardioid"; }

  private:
    std::vector<singularity> sings_;
};

// beta(th) = |1 - e^{i n th}|^{-2/n}: Schwarz-Christoffel derivative magnitude
// for the regular n-gon with prevertices at the n-th roots of unity.
class ngon_weight final : public weight {
  public:
    explicit ngon_weight(int n) : n_(n) {
        if (n < 3) throw error(errc::invalid_parameter, "ngon requires n >= 3");
        const double p = -2.0 / n;
        const double amp = std::pow(double(n), -2.0 / n);
        for (int j = 0; j < n; ++j) {
            singularity s;
            s.angle = two_pi * j / n;
            s.p = p;
            s.q = 0;
            s.grade = true;
            s.tail = [amp, p](double h) { return amp * std::pow(h, 1 + p) / (1 + p); };
            sings_.push_back(std::move(s));
        }
    }
    double eval(double th) const override {
        // |1 - e^{i n th}| = 2|sin(n th / 2)|
        return std::pow(2.0 * std::abs(std::sin(n_ * th / 2)), -2.0 / n_);
    }
    double eval_offset(int, double s) const override {
        return std::pow(2.0 * std::abs(std::sin(n_ * s / 2)), -2.0 / n_);
    }
    const std::vector<singularity>& singularities() const override { return sings_; }
    int n() const { return n_; }
    std::string descriptor() const override { return "ngon:" + std::to_string(n_); }

  private:
    int n_;
    std::vector<singularity> sings_;
};

// Model cusp weight: c * |th|^{-1} * (log(e + 1/|th|))^{-1-1/alpha} on
// 0 < |th| <= w, cosine-blended to the constant 1 over one blend width.
// alpha in (0,1): slow cusp (in L log L). alpha >= 1: fast-cusp model (not in
// L log L; fixed shape constants, no free parameters).
class cusp_weight final : public weight {
  public:
    static constexpr double fast_c = 32.0;
    static constexpr double fast_w = 0.25;

    cusp_weight(double alpha, double c, double w, bool fast)
        : alpha_(alpha), c_(c), w_(w), fast_(fast) {
        if (!(alpha > 0) || !std::isfinite(alpha))
            throw error(errc::invalid_parameter, "cusp requires alpha > 0");
        if (fast ? !(alpha >= 1) : !(alpha < 1))
            throw error(errc::invalid_parameter,
                        fast ? "fastcusp requires alpha >= 1" : "cusp requires alpha in (0,1)");
        if (!(c > 0) || !(w > 0) || !(w < std::numbers::pi))
            throw error(errc::invalid_parameter, "cusp requires c > 0 and 0 < w < pi");
        gamma_ = 1.0 + 1.0 / alpha;
        wb_ = std::min(w_, std::numbers::pi - w_);
        bval_ = core(w_);

        const double cc = c_, g = gamma_;
        singularity s0;
        s0.angle = 0;
        s0.p = -1;
        s0.q = -gamma_;
        s0.grade = true;
        // integral over (0,h] of c s^{-1} log(e + 1/s)^{-gamma} ds
        //   = c * u^{1-gamma}/(gamma-1) * (1 + o(1)),  u = log(1/h);
        // at the terminal width h = 1e-12 the correction is below 1e-24.
        s0.tail = [cc, g](double h) {
            const double u = std::log(1.0 / h);
            return cc * std::pow(u, 1 - g) / (g - 1);
        };
        sings_.push_back(std::move(s0));
        add_kink(w_);
        add_kink(-w_);
        add_kink(w_ + wb_);
        add_kink(-(w_ + wb_));
    }

    static weight_ptr slow(double alpha, double c = 0.5, double w = 1.0) {
        return std::make_shared<cusp_weight>(alpha, c, w, false);
    }
    static weight_ptr fast(double alpha) {
        return std::make_shared<cusp_weight>(alpha, fast_c, fast_w, true);
    }

    double eval(double th) const override {
        // distance to 0 on the circle
        double t = std::abs(std::remainder(th, two_pi));
        if (t == 0) return std::numeric_limits<double>::infinity();
        if (t <= w_) return core(t);
        if (t <= w_ + wb_) {
            const double s = (t - w_) / wb_;
            const double mu = (1 + std::cos(std::numbers::pi * s)) / 2;
            return mu * bval_ + (1 - mu);
        }
        return 1.0;
    }
    double eval_offset(int j, double s) const override {
        if (j == 0) {
            const double t = std::abs(s);
            return t == 0 ? std::numeric_limits<double>::infinity() : core(t);
        }
        return weight::eval_offset(j, s);
    }
    const std::vector<singularity>& singularities() const override { return sings_; }
    bool in_llogl() const override { return alpha_ < 1.0; }
    double alpha() const { return alpha_; }
    double c() const { return c_; }
    double width() const { return w_; }
    std::string descriptor() const override {
        if (fast_) return "fastcusp:" + format_number(alpha_);
        return "cusp:" + format_number(alpha_) + ":c=" + format_number(c_) +
               ":w=" + format_number(w_);
    }

  private:
    double core(double t) const {
        return c_ / (t * std::pow(std::log(std::numbers::e + 1.0 / t), gamma_));
    }
    void add_kink(double a) {
        const double ang = wrap_angle(a);
        for (const auto& s : sings_)
            if (std::abs(s.angle - ang) < 1e-15) return;
        sings_.push_back({ang, 0, 0, false, nullptr});
    }

    double alpha_, c_, w_, gamma_, wb_, bval_;
    bool fast_;
    std::vector<singularity> sings_;
};

// Pushforward of an inner weight under the disk automorphism
// m_a(z) = (z+a)/(1+conj(a)z):  beta_a(th) = beta(psi(th)) |psi'(th)| with
// psi(th) = arg m_a(e^{i th}). Total mass is invariant.
class mobius_weight final : public weight {
  public:
    mobius_weight(weight_ptr inner, std::complex<double> a)
        : inner_(std::move(inner)), a_(a) {
        if (!(std::abs(a_) < 1.0))
            throw error(errc::invalid_parameter, "mobius requires |a| < 1");
        const auto& is = inner_->singularities();
        for (const auto& s : is) {
            // th0 = psi^{-1}(phi0) = arg m_{-a}(e^{i phi0})
            const std::complex<double> z(std::cos(s.angle), std::sin(s.angle));
            const std::complex<double> m = (z - a_) / (1.0 - std::conj(a_) * z);
            const double th0 = wrap_angle(std::arg(m));
            const std::complex<double> z0(std::cos(th0), std::sin(th0));
            const double dpsi0 =
                (1 - std::norm(a_)) / std::norm(1.0 + std::conj(a_) * z0);
            singularity t;
            t.angle = th0;
            t.p = s.p;
            t.q = s.q;
            t.grade = s.grade;
            if (s.tail) {
                auto base = s.tail;
                // first-order transport through the conformal factor; exact to
                // O(h^2) which is negligible at the terminal width
                t.tail = [base, dpsi0](double h) { return base(h * dpsi0); };
            }
            sings_.push_back(std::move(t));
            z0s_.push_back(z0);
        }
    }

    double eval(double th) const override {
        const std::complex<double> z(std::cos(th), std::sin(th));
        const std::complex<double> m = (z + a_) / (1.0 + std::conj(a_) * z);
        const double dpsi = (1 - std::norm(a_)) / std::norm(1.0 + std::conj(a_) * z);
        return inner_->eval(std::arg(m)) * dpsi;
    }

    double eval_offset(int j, double s) const override {
        // Stable boundary displacement delta = psi(th0+s) - psi(th0), computed
        // without subtracting nearly equal angles. With z0 = e^{i th0} and
        // E = e^{is} - 1:
        //   m(z0 e^{is}) * conj(m(z0)) = num / den,
        //   num = |z0+a|^2 + z0 E conj(z0+a),
        //   den = |1+conj(a) z0|^2 + conj(a) z0 E (1 + a conj(z0)).
        const std::complex<double> z0 = z0s_[j];
        const double sh = std::sin(s / 2);
        const std::complex<double> E(-2 * sh * sh, std::sin(s));
        const std::complex<double> num =
            std::norm(z0 + a_) + z0 * E * std::conj(z0 + a_);
        const std::complex<double> den =
            std::norm(1.0 + std::conj(a_) * z0) +
            std::conj(a_) * z0 * E * (1.0 + a_ * std::conj(z0));
        double delta = std::arg(num) - std::arg(den);
        // The true displacement has the sign of s and magnitude < 2*pi.
        if (s > 0 && delta <= 0) delta += two_pi;
        if (s < 0 && delta >= 0) delta -= two_pi;
        const std::complex<double> zz = z0 * (1.0 + E);
        const double dpsi = (1 - std::norm(a_)) / std::norm(1.0 + std::conj(a_) * zz);
        return inner_->eval_offset(j, delta) * dpsi;
    }

    const std::vector<singularity>& singularities() const override { return sings_; }
    bool in_llogl() const override { return inner_->in_llogl(); }
    const weight_ptr& inner() const { return inner_; }
    std::complex<double> a() const { return a_; }
    std::string descriptor() const override {
        return "mobius:" + format_number(a_.real()) + "," + format_number(a_.imag()) +
               ":" + inner_->descriptor();
    }

  private:
    weight_ptr inner_;
    std::complex<double> a_;
    std::vector<singularity> sings_;
    std::vector<std::complex<double>> z0s_;
};

inline weight_ptr mobius_pushforward(weight_ptr w, std::complex<double> a) {
    if (!(std::abs(a) < 1.0))
        throw error(errc::invalid_parameter, "mobius requires |a| < 1");
    if (a == std::complex<double>(0, 0)) return w;  // identity automorphism
    return std::make_shared<mobius_weight>(std::move(w), a);
}

// Piecewise-linear weight on explicit nodes. Non-periodic: evaluation outside
// the node hull is an interpolation-range error. Sign-changing values are
// allowed only when `allow_negative` is set (used by the indefinite-weight
// paths); the conformal-factor catalog is nonnegative.
class tabulated_weight final : public weight {
  public:
    tabulated_weight(std::vector<double> nodes, std::vector<double> values,
                     bool allow_negative = false, std::string desc = "tabulated")
        : nodes_(std::move(nodes)), values_(std::move(values)), desc_(std::move(desc)) {
        if (nodes_.size() < 2 || nodes_.size() != values_.size())
            throw error(errc::invalid_parameter,
                        "tabulated weight needs matching node/value lists (>= 2 entries)");
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
            if (!(nodes_[i] < nodes_[i + 1]))
                throw error(errc::invalid_parameter,
                            "tabulated nodes must be strictly ascending");
        if (!(nodes_.front() >= 0) || !(nodes_.back() <= two_pi + 1e-12))
            throw error(errc::invalid_parameter,
                        "tabulated nodes must lie in [0, 2*pi]");
        for (double v : values_) {
            if (!std::isfinite(v))
                throw error(errc::invalid_parameter, "tabulated values must be finite");
            if (!allow_negative && v < 0)
                throw error(errc::invalid_parameter,
                            "tabulated values must be nonnegative");
        }
        // Registry: interior breakpoints are kinks; sign crossings of the
        // linear interpolant are registered too so quadrature of beta_± is
        // panel-exact.
        for (std::size_t i = 0; i < nodes_.size(); ++i) add_kink(nodes_[i]);
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            if (values_[i] * values_[i + 1] < 0) {
                const double t = values_[i] / (values_[i] - values_[i + 1]);
                add_kink(nodes_[i] + t * (nodes_[i + 1] - nodes_[i]));
            }
        }
        std::sort(sings_.begin(), sings_.end(),
                  [](const singularity& a, const singularity& b) { return a.angle < b.angle; });
    }

    double eval(double th) const override {
        const double t = wrap_angle(th);
        double x = t;
        if (x < nodes_.front() || x > nodes_.back()) {
            // the hull may end at 2*pi while wrap_angle returns [0, 2*pi)
            if (x + two_pi <= nodes_.back() + 1e-15) x += two_pi;
            else
                throw error(errc::interpolation_range,
                            "angle outside tabulated node hull", t);
        }
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        std::size_t i = (it == nodes_.begin()) ? 0 : std::size_t(it - nodes_.begin()) - 1;
        if (i + 1 >= nodes_.size()) i = nodes_.size() - 2;
        const double u = (x - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
        return values_[i] + u * (values_[i + 1] - values_[i]);
    }

    const std::vector<singularity>& singularities() const override { return sings_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    std::string descriptor() const override { return desc_; }

  private:
    void add_kink(double a) {
        const double ang = wrap_angle(a);
        for (const auto& s : sings_)
            if (std::abs(s.angle - ang) < 1e-14) return;
        sings_.push_back({ang, 0, 0, false, nullptr});
    }

    std::vector<double> nodes_, values_;
    std::string desc_;
    std::vector<singularity> sings_;
};

// min(beta, M): used by the membership scans and the --cap option.
class capped_weight final : public weight {
  public:
    capped_weight(weight_ptr inner, double cap) : inner_(std::move(inner)), cap_(cap) {
        if (!(cap > 0)) throw error(errc::invalid_parameter, "cap must be positive");
        for (const auto& s : inner_->singularities()) {
            singularity t = s;
            t.p = 0;  // capped weight is bounded
            t.q = 0;
            if (s.tail) {
                auto base = s.tail;
                const double M = cap_;
                // mass of min(beta, M) over (0, h]: the cap is active near the
                // singularity, so the mass is min(M h, full tail)
                t.tail = [base, M](double h) { return std::min(M * h, base(h)); };
            }
            sings_.push_back(std::move(t));
        }
    }
    double eval(double th) const override { return std::min(inner_->eval(th), cap_); }
    double eval_offset(int j, double s) const override {
        return std::min(inner_->eval_offset(j, s), cap_);
    }
    const std::vector<singularity>& singularities() const override { return sings_; }
    bool in_llogl() const override { return true; }
    double cap() const { return cap_; }
    const weight_ptr& inner() const { return inner_; }
    std::string descriptor() const override {
        return inner_->descriptor() + "#cap=" + format_number(cap_);
    }

  private:
    weight_ptr inner_;
    double cap_;
    std::vector<singularity> sings_;
};

// --------------------------- descriptor parsing -----------------------------

inline const char* weight_grammar() {
    return "weight descriptor grammar:\n"
           "  constant:<c>               constant weight c > 0\n"
           "  cardioid                   4|cos(theta/2)|  (cardioid conformal factor)\n"
           "  ngon:<n>                   |1 - e^{i n theta}|^{-2/n}, n >= 3\n"
           "  cusp:<alpha>[:c=<c>][:w=<w>]  slow-cusp model, alpha in (0,1)\n"
           "                             defaults c=0.5, w=1\n"
           "  fastcusp:<alpha>           fast-cusp model, alpha >= 1 (fixed shape)\n"
           "  mobius:<a_re>,<a_im>:<inner>  pushforward under m_a, |a| < 1\n"
           "  file:<path>                two-column CSV theta,beta (piecewise linear)\n";
}

namespace detail {
inline double parse_num(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw error(errc::invalid_parameter, "cannot parse " + what + ": '" + s + "'");
    }
}
}  // namespace detail

inline weight_ptr load_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_error, "cannot open weight file: " + path);
    std::vector<double> nodes, values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double th, v;
        if (!(ls >> th >> v)) {
            if (first) { first = false; continue; }  // tolerate a header row
            throw error(errc::io_error, "malformed row in weight file: " + path);
        }
        first = false;
        nodes.push_back(th);
        values.push_back(v);
    }
    return std::make_shared<tabulated_weight>(std::move(nodes), std::move(values),
                                              /*allow_negative=*/true, "file:" + path);
}

inline weight_ptr parse_weight(const std::string& desc) {
    const auto bad = [&](const std::string& why) -> error {
        return error(errc::invalid_parameter,
                     "unknown weight descriptor '" + desc + "': " + why);
    };
    const auto head = desc.find(':');
    const std::string kind = desc.substr(0, head);
    const std::string rest = head == std::string::npos ? "" : desc.substr(head + 1);

    if (kind == "constant") {
        if (rest.empty()) throw bad("expected constant:<c>");
        return std::make_shared<constant_weight>(detail::parse_num(rest, "constant value"));
    }
    if (kind == "cardioid") {
        if (!rest.empty()) throw bad("cardioid takes no parameters");
        return std::make_shared<cardioid_weight>();
    }
    if (kind == "ngon") {
        if (rest.empty()) throw bad("expected ngon:<n>");
        const double n = detail::parse_num(rest, "ngon order");
        if (n != std::floor(n)) throw bad("ngon order must be an integer");
        return std::make_shared<ngon_weight>(int(n));
    }
    if (kind == "cusp" || kind == "fastcusp") {
        if (rest.empty()) throw bad("expected " + kind + ":<alpha>");
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto sep = rest.find(':', start);
            parts.push_back(rest.substr(start, sep - start));
            if (sep == std::string::npos) break;
            start = sep + 1;
        }
        const double alpha = detail::parse_num(parts[0], "cusp alpha");
        if (kind == "fastcusp") {
            if (parts.size() > 1) throw bad("fastcusp takes only <alpha>");
            return cusp_weight::fast(alpha);
        }
        double c = 0.5, w = 1.0;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            const auto& p = parts[i];
            if (p.rfind("c=", 0) == 0) c = detail::parse_num(p.substr(2), "cusp c");
            else if (p.rfind("w=", 0) == 0) w = detail::parse_num(p.substr(2), "cusp w");
            else throw bad("expected c=<c> or w=<w>, got '" + p + "'");
        }
        return cusp_weight::slow(alpha, c, w);
    }
    if (kind == "mobius") {
        const auto sep = rest.find(':');
        if (sep == std::string::npos) throw bad("expected mobius:<a_re>,<a_im>:<inner>");
        const std::string apart = rest.substr(0, sep);
        const std::string inner = rest.substr(sep + 1);
        const auto comma = apart.find(',');
        if (comma == std::string::npos) throw bad("expected <a_re>,<a_im>");
        const double re = detail::parse_num(apart.substr(0, comma), "mobius a_re");
        const double im = detail::parse_num(apart.substr(comma + 1), "mobius a_im");
        return mobius_pushforward(parse_weight(inner), {re, im});
    }
    if (kind == "file") {
        if (rest.empty()) throw bad("expected file:<path>");
        return load_tabulated_csv(rest);
    }
    throw bad("unknown variant '" + kind + "'");
}

}  // namespace steklov
