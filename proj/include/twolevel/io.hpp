#ifndef TWOLEVEL_IO_HPP
#define TWOLEVEL_IO_HPP

// JSON and CSV serialization.
//
// PulseSpec JSON, discriminated by "type":
//   {"type": "cosine", "chi": 1.5707963, "omega": 1.0}
//   {"type": "harmonic_sum", "omega": 1.0,
//    "coefficients": [{"harmonic": 1, "amplitude": 1.77}, {"harmonic": 3, "amplitude": 0.59}]}
//   {"type": "gaussian", "area": 1.5707963, "center": 5.0, "width": 0.01}
// Complex numbers are written as [real, imaginary].

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "core.hpp"

namespace twolevel {

using json = nlohmann::json;

inline json to_json(PulseSpec const& pulse)
{
    return std::visit([](auto const& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CosinePulse>) {
            return {{"type", "cosine"}, {"chi", p.chi}, {"omega", p.omega}};
        }
        else if constexpr (std::is_same_v<T, HarmonicSumPulse>) {
            json coeffs = json::array();
            for (auto const& c : p.coefficients) coeffs.push_back({{"harmonic", c.k}, {"amplitude", c.amplitude}});
            return {{"type", "harmonic_sum"}, {"omega", p.omega}, {"coefficients", coeffs}};
        }
        else {
            return {{"type", "gaussian"}, {"area", p.area}, {"center", p.center}, {"width", p.width}};
        }
    }, pulse.shape());
}

/// Parse a PulseSpec; throws std::invalid_argument on schema violations.
inline PulseSpec pulse_from_json(json const& j)
{
    auto number = [&](char const* key) -> double {
        if (!j.contains(key) || !j.at(key).is_number())
            throw std::invalid_argument(std::string("pulse JSON: missing numeric field '") + key + "'");
        return j.at(key).get<double>();
    };
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw std::invalid_argument("pulse JSON: expected an object with a string 'type'");
    auto const type = j.at("type").get<std::string>();
    if (type == "cosine") return PulseSpec{CosinePulse{number("chi"), number("omega")}};
    if (type == "gaussian") return PulseSpec{GaussianPulse{number("area"), number("center"), number("width")}};
    if (type == "harmonic_sum") {
        HarmonicSumPulse h{number("omega"), {}};
        if (!j.contains("coefficients") || !j.at("coefficients").is_array())
            throw std::invalid_argument("pulse JSON: harmonic_sum needs a 'coefficients' array");
        for (auto const& c : j.at("coefficients")) {
            if (!c.contains("harmonic") || !c.at("harmonic").is_number_integer() || !c.contains("amplitude") ||
                !c.at("amplitude").is_number())
                throw std::invalid_argument("pulse JSON: coefficient needs integer 'harmonic' and numeric 'amplitude'");
            h.coefficients.push_back({c.at("harmonic").get<int>(), c.at("amplitude").get<double>()});
        }
        return PulseSpec{std::move(h)};
    }
    throw std::invalid_argument("pulse JSON: unknown type '" + type + "'");
}

inline json to_json(complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(AmplitudeState const& s) { return {{"a1", to_json(s.a1)}, {"a2", to_json(s.a2)}}; }

//-----------------------------------------------------------------------------
/// Fixed 17-significant-digit formatting, so CSV output is bit-stable.
inline std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline constexpr char const* trajectory_csv_header = "t,P1,P2,re_a1,im_a1,re_a2,im_a2";

/// One row per grid point. A non-null `analytic` pulse appends the degenerate-limit
/// reference P1_analytic,P2_analytic computed from the pulse action.
inline void write_trajectory_csv(std::ostream& os, Trajectory const& traj, PulseSpec const* analytic = nullptr)
{
    os << trajectory_csv_header;
    if (analytic) os << ",P1_analytic,P2_analytic";
    os << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        double const t = traj.time(i);
        auto const& s = traj.state(i);
        auto const p = probabilities(s);
        os << format_number(t) << ',' << format_number(p.p1) << ',' << format_number(p.p2) << ','
           << format_number(s.a1.real()) << ',' << format_number(s.a1.imag()) << ','
           << format_number(s.a2.real()) << ',' << format_number(s.a2.imag());
        if (analytic) {
            auto const ref = populations_for_action(action(*analytic, t));
            os << ',' << format_number(ref.p1) << ',' << format_number(ref.p2);
        }
        os << '\n';
    }
}

}  // namespace twolevel

#endif  // TWOLEVEL_IO_HPP
