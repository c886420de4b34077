#include "qwts/walk.hpp"

#include "qwts/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qwts {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_in(double value, double lo, double hi, std::string_view what) {
    if (!(value >= lo && value <= hi)) {
        std::ostringstream os;
        os.precision(17);
        os << what << " = " << value << " outside [" << lo << ", " << hi << "]";
        throw DomainError(os.str());
    }
}

struct Shift {
    int dx1;
    int dx2;
};

// L, R / L, S, R / L, R, D, U
std::span<const Shift> shifts(WalkFamily family) noexcept {
    static constexpr std::array<Shift, 2> two{{{-1, 0}, {1, 0}}};
    static constexpr std::array<Shift, 3> three{{{-1, 0}, {0, 0}, {1, 0}}};
    static constexpr std::array<Shift, 4> four{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
    switch (family) {
    case WalkFamily::TwoState1D: return two;
    case WalkFamily::ThreeState1D: return three;
    case WalkFamily::FourState2D: return four;
    }
    return two;
}

} // namespace

int dimension(WalkFamily family) noexcept {
    return family == WalkFamily::FourState2D ? 2 : 1;
}

int coin_size(WalkFamily family) noexcept {
    switch (family) {
    case WalkFamily::TwoState1D: return 2;
    case WalkFamily::ThreeState1D: return 3;
    case WalkFamily::FourState2D: return 4;
    }
    return 0;
}

int init_param_count(WalkFamily family) noexcept {
    return coin_size(family) - 1;
}

std::string_view to_string(WalkFamily family) noexcept {
    switch (family) {
    case WalkFamily::TwoState1D: return "TwoState1D";
    case WalkFamily::ThreeState1D: return "ThreeState1D";
    case WalkFamily::FourState2D: return "FourState2D";
    }
    return "?";
}

WalkFamily parse_family(std::string_view text) {
    if (text == "TwoState1D" || text == "two") return WalkFamily::TwoState1D;
    if (text == "ThreeState1D" || text == "three") return WalkFamily::ThreeState1D;
    if (text == "FourState2D" || text == "four") return WalkFamily::FourState2D;
    throw std::invalid_argument("unknown walk family '" + std::string(text) + "'");
}

CoinMatrix build_coin_angle(double theta) {
    require_in(theta, 0.0, kHalfPi, "coin angle theta");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    CoinMatrix u(2, 2);
    u << c, s, s, -c;
    return u;
}

CoinMatrix build_coin(WalkFamily family, const CoinParam& coin) {
    if (coin.form == CoinParam::Form::Angle) {
        if (family != WalkFamily::TwoState1D) {
            throw DomainError("angle-form coin is defined for TwoState1D only");
        }
        return build_coin_angle(coin.value);
    }
    const double a = coin.value;
    require_in(a, 0.0, 1.0, "coin[0]");
    switch (family) {
    case WalkFamily::TwoState1D: {
        const double b = std::sqrt(1.0 - a * a);
        CoinMatrix u(2, 2);
        u << a, b, b, -a;
        return u;
    }
    case WalkFamily::ThreeState1D: {
        const double a2 = a * a;
        const double off = a * std::sqrt(2.0 * (1.0 - a2));
        CoinMatrix u(3, 3);
        u << -a2, off, 1.0 - a2,
             off, 2.0 * a2 - 1.0, off,
             1.0 - a2, off, -a2;
        return u;
    }
    case WalkFamily::FourState2D: {
        const double b = 1.0 - a;
        const double g = std::sqrt(a * b);
        CoinMatrix u(4, 4);
        u << -a, b, g, g,
             b, -a, g, g,
             g, g, -b, a,
             g, g, a, -b;
        return u;
    }
    }
    throw DomainError("unknown family");
}

CoinVector build_initial_state(WalkFamily family, const InitParam& init) {
    const auto expected = static_cast<std::size_t>(init_param_count(family));
    if (init.values.size() != expected) {
        throw DomainError("initial-state parameter for " + std::string(to_string(family)) +
                          " needs " + std::to_string(expected) + " components, got " +
                          std::to_string(init.values.size()));
    }
    const int m = coin_size(family);
    CoinVector phi(m);
    if (family == WalkFamily::TwoState1D) {
        const double xi = init.values[0];
        require_in(xi, 0.0, kHalfPi, "init[0]");
        phi << Complex(std::cos(xi), 0.0), Complex(0.0, std::sin(xi));
        return phi;
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    phi(0) = norm;
    for (std::size_t k = 0; k < init.values.size(); ++k) {
        const double p = init.values[k];
        require_in(p, 0.0, kTwoPi, "init[" + std::to_string(k) + "]");
        phi(static_cast<Eigen::Index>(k) + 1) = norm * std::polar(1.0, p);
    }
    return phi;
}

WalkSpec::WalkSpec(WalkFamily family, CoinParam coin, InitParam init)
    : family_(family), coin_(coin), init_(std::move(init)) {
    build_coin(family_, coin_);
    build_initial_state(family_, init_);
}

WalkSpec WalkSpec::from_point(WalkFamily family, std::span<const double> point) {
    const auto expected = static_cast<std::size_t>(1 + init_param_count(family));
    if (point.size() != expected) {
        throw DomainError("search point for " + std::string(to_string(family)) + " needs " +
                          std::to_string(expected) + " components");
    }
    InitParam init{{point.begin() + 1, point.end()}};
    if (family == WalkFamily::TwoState1D) {
        return WalkSpec(family, CoinParam::angle(point[0]), std::move(init));
    }
    return WalkSpec(family, CoinParam::raw(point[0]), std::move(init));
}

CoinMatrix WalkSpec::coin() const {
    return build_coin(family_, coin_);
}

CoinVector WalkSpec::initial_state() const {
    return build_initial_state(family_, init_);
}

LatticeWindow::LatticeWindow(int dimension, int radius)
    : dimension_(dimension), radius_(radius), width_(2 * radius + 1) {
    if (dimension != 1 && dimension != 2) throw std::invalid_argument("lattice dimension must be 1 or 2");
    if (radius < 0) throw std::invalid_argument("lattice radius must be nonnegative");
    size_ = dimension == 1 ? static_cast<std::size_t>(width_)
                           : static_cast<std::size_t>(width_) * static_cast<std::size_t>(width_);
}

bool LatticeWindow::contains(Site s) const noexcept {
    if (s.x1 < -radius_ || s.x1 > radius_) return false;
    if (dimension_ == 1) return s.x2 == 0;
    return s.x2 >= -radius_ && s.x2 <= radius_;
}

std::size_t LatticeWindow::index(Site s) const noexcept {
    const auto i1 = static_cast<std::size_t>(s.x1 + radius_);
    if (dimension_ == 1) return i1;
    return i1 * static_cast<std::size_t>(width_) + static_cast<std::size_t>(s.x2 + radius_);
}

Site LatticeWindow::site(std::size_t index) const noexcept {
    if (dimension_ == 1) return {static_cast<int>(index) - radius_, 0};
    const auto w = static_cast<std::size_t>(width_);
    return {static_cast<int>(index / w) - radius_, static_cast<int>(index % w) - radius_};
}

AmplitudeField::AmplitudeField(WalkFamily family, int time)
    : family_(family), time_(time), window_(dimension(family), time), m_(qwts::coin_size(family)),
      amps_(window_.size() * static_cast<std::size_t>(m_)) {}

std::vector<Complex> AmplitudeField::at(Site s) const {
    if (!window_.contains(s)) return std::vector<Complex>(static_cast<std::size_t>(m_));
    const auto v = at_index(window_.index(s));
    return {v.begin(), v.end()};
}

double AmplitudeField::total_norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto& a : amps_) sum += std::norm(a);
    return sum;
}

Distribution::Distribution(int time, LatticeWindow window, std::vector<double> mass)
    : time_(time), window_(window), mass_(std::move(mass)) {
    if (mass_.size() != window_.size()) throw std::invalid_argument("mass vector does not match window");
}

double Distribution::at(Site s) const noexcept {
    return window_.contains(s) ? mass_[window_.index(s)] : 0.0;
}

double Distribution::total() const noexcept {
    double sum = 0.0;
    for (double m : mass_) sum += m;
    return sum;
}

Distribution Distribution::widened(int radius) const {
    if (radius < window_.radius()) throw std::invalid_argument("widened radius smaller than current");
    LatticeWindow wide(window_.dimension(), radius);
    std::vector<double> mass(wide.size(), 0.0);
    for (std::size_t i = 0; i < mass_.size(); ++i) mass[wide.index(window_.site(i))] = mass_[i];
    return {time_, wide, std::move(mass)};
}

AmplitudeField initial_field(const WalkSpec& spec) {
    AmplitudeField field(spec.family(), 0);
    const CoinVector phi = spec.initial_state();
    auto origin = field.at_index(0);
    for (std::size_t c = 0; c < origin.size(); ++c) origin[c] = phi(static_cast<Eigen::Index>(c));
    return field;
}

AmplitudeField step(const AmplitudeField& field, const CoinMatrix& coin) {
    const int m = field.coin_size();
    if (coin.rows() != m || coin.cols() != m) throw std::invalid_argument("coin size does not match field");
    const auto moves = shifts(field.family());
    const LatticeWindow& src = field.window();
    AmplitudeField next(field.family(), field.time() + 1);
    const LatticeWindow& dst = next.window();

    std::vector<Complex> rotated(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < src.size(); ++i) {
        const auto psi = field.at_index(i);
        bool zero = true;
        for (const auto& a : psi) zero = zero && a == Complex{};
        if (zero) continue;
        for (int r = 0; r < m; ++r) {
            Complex acc{};
            for (int c = 0; c < m; ++c) acc += coin(r, c) * psi[static_cast<std::size_t>(c)];
            rotated[static_cast<std::size_t>(r)] = acc;
        }
        const Site s = src.site(i);
        for (int c = 0; c < m; ++c) {
            const auto cc = static_cast<std::size_t>(c);
            const Site to{s.x1 + moves[cc].dx1, s.x2 + moves[cc].dx2};
            next.at_index(dst.index(to))[cc] += rotated[cc];
        }
    }
    return next;
}

AmplitudeField evolve(const WalkSpec& spec, int steps) {
    if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
    const CoinMatrix coin = spec.coin();
    AmplitudeField field = initial_field(spec);
    for (int t = 0; t < steps; ++t) field = step(field, coin);
    return field;
}

Distribution distribution(const AmplitudeField& field) {
    const LatticeWindow& w = field.window();
    std::vector<double> mass(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double p = 0.0;
        for (const auto& a : field.at_index(i)) p += std::norm(a);
        mass[i] = p;
    }
    return {field.time(), w, std::move(mass)};
}

std::vector<double> expectation(const Distribution& dist) {
    const LatticeWindow& w = dist.window();
    const auto masses = dist.masses();
    double e1 = 0.0;
    double e2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Site s = w.site(i);
        e1 += s.x1 * masses[i];
        e2 += s.x2 * masses[i];
    }
    if (w.dimension() == 1) return {e1};
    return {e1, e2};
}

} // namespace qwts
