#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qwts {

using Complex = std::complex<double>;
using CoinMatrix = Eigen::MatrixXcd;
using CoinVector = Eigen::VectorXcd;

enum class WalkFamily { TwoState1D, ThreeState1D, FourState2D };

/// Lattice dimension d of the family.
int dimension(WalkFamily family) noexcept;
/// Number of chirality states m of the family.
int coin_size(WalkFamily family) noexcept;
/// Length of the initial-state parameter vector.
int init_param_count(WalkFamily family) noexcept;

std::string_view to_string(WalkFamily family) noexcept;
/// Accepts the enum name or the short forms "two", "three", "four".
WalkFamily parse_family(std::string_view text);

/// Coin parameter. The raw form is the single entry in [0,1] used by all three
/// families; the angle form theta in [0, pi/2] exists for TwoState1D only and
/// corresponds to the raw value cos(theta).
struct CoinParam {
    enum class Form { Raw, Angle };

    Form form = Form::Raw;
    double value = 0.0;

    static CoinParam raw(double v) { return {Form::Raw, v}; }
    static CoinParam angle(double theta) { return {Form::Angle, theta}; }
};

struct InitParam {
    std::vector<double> values;
};

/// Validated (family, coin, initial state) triple. Immutable.
class WalkSpec {
public:
    WalkSpec(WalkFamily family, CoinParam coin, InitParam init);

    /// Builds a spec from a search-space point. For TwoState1D the point is
    /// (theta, xi) in angle form; otherwise (raw coin, phases...).
    static WalkSpec from_point(WalkFamily family, std::span<const double> point);

    WalkFamily family() const noexcept { return family_; }
    const CoinParam& coin_param() const noexcept { return coin_; }
    const InitParam& init_param() const noexcept { return init_; }

    CoinMatrix coin() const;
    CoinVector initial_state() const;

private:
    WalkFamily family_;
    CoinParam coin_;
    InitParam init_;
};

CoinMatrix build_coin(WalkFamily family, const CoinParam& coin);
/// [[cos t, sin t], [sin t, -cos t]] for t in [0, pi/2].
CoinMatrix build_coin_angle(double theta);
CoinVector build_initial_state(WalkFamily family, const InitParam& init);

/// Lattice site; x2 is unused (zero) for one-dimensional walks.
struct Site {
    int x1 = 0;
    int x2 = 0;

    auto operator<=>(const Site&) const = default;
};

/// Dense box window [-r, r]^d. Sites are ordered lexicographically by (x1, x2).
class LatticeWindow {
public:
    LatticeWindow(int dimension, int radius);

    int dimension() const noexcept { return dimension_; }
    int radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return size_; }

    bool contains(Site s) const noexcept;
    std::size_t index(Site s) const noexcept;
    Site site(std::size_t index) const noexcept;

private:
    int dimension_;
    int radius_;
    int width_;
    std::size_t size_;
};

/// State Psi_n over the window covering |x|_1 <= n.
class AmplitudeField {
public:
    AmplitudeField(WalkFamily family, int time);

    WalkFamily family() const noexcept { return family_; }
    int time() const noexcept { return time_; }
    const LatticeWindow& window() const noexcept { return window_; }
    int coin_size() const noexcept { return m_; }

    /// Zero vector for sites outside the window.
    std::vector<Complex> at(Site s) const;
    std::span<Complex> at_index(std::size_t i) noexcept {
        return {amps_.data() + i * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
    }
    std::span<const Complex> at_index(std::size_t i) const noexcept {
        return {amps_.data() + i * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
    }

    double total_norm_squared() const noexcept;

private:
    WalkFamily family_;
    int time_;
    LatticeWindow window_;
    int m_;
    std::vector<Complex> amps_;
};

/// Probability measure mu_n over a lattice window.
class Distribution {
public:
    Distribution(int time, LatticeWindow window, std::vector<double> mass);

    int time() const noexcept { return time_; }
    int dimension() const noexcept { return window_.dimension(); }
    const LatticeWindow& window() const noexcept { return window_; }
    std::span<const double> masses() const noexcept { return mass_; }

    /// Zero outside the window.
    double at(Site s) const noexcept;
    double total() const noexcept;

    /// Same measure over a larger window (extra sites carry zero mass).
    Distribution widened(int radius) const;

private:
    int time_;
    LatticeWindow window_;
    std::vector<double> mass_;
};

/// Psi_0: all amplitude at the origin equal to the initial state.
AmplitudeField initial_field(const WalkSpec& spec);
/// One application of S (I (x) U).
AmplitudeField step(const AmplitudeField& field, const CoinMatrix& coin);
AmplitudeField evolve(const WalkSpec& spec, int steps);

Distribution distribution(const AmplitudeField& field);
/// E(X_n), one component per lattice dimension.
std::vector<double> expectation(const Distribution& dist);

} // namespace qwts
