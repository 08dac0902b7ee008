#ifndef FAULTSEARCH_IO_HPP
#define FAULTSEARCH_IO_HPP

/**
 * \file io.hpp
 *
 * Text formats. Numbers are written as the shortest string that reads back to
 * the same value, so files round-trip exactly.
 *
 * Strategy file:
 *
 *     # faultsearch strategy v1
 *     setting orc 3          (or: setting line)
 *     1:0.5 2:1 3:2          one robot per line, ray:turn pairs
 *     +1 -2 +4               line setting: signed turns, alternating signs
 *
 * A line robot with no turns is written as a bare "+" or "-". Blank lines and
 * lines starting with '#' after the header are ignored. "inf" is accepted as
 * a turn.
 *
 * CSV files start with a "# faultsearch <kind> v1" comment naming the schema.
 */

#include <charconv>
#include <cmath>
#include <concepts>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "faultsearch/cover.hpp"
#include "faultsearch/potential.hpp"
#include "faultsearch/simulator.hpp"
#include "faultsearch/strategy.hpp"

namespace faultsearch {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line) : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

template <std::floating_point Real>
std::string format_real(Real v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_real: conversion failed");
    return std::string(buf, end);
}

template <std::floating_point Real>
Real parse_real(std::string_view s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<Real>::infinity();
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    Real v{};
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

inline constexpr std::string_view strategy_header = "# faultsearch strategy v1";

template <std::floating_point Real = double>
struct StrategyFile {
    Setting setting = Setting::orc;
    int m = 2;
    std::vector<RoundPlan<Real>> plans;   ///< orc
    std::vector<TurnSequence<Real>> lines;  ///< line

    std::size_t robots() const { return setting == Setting::orc ? plans.size() : lines.size(); }
};

template <std::floating_point Real>
void write_strategies(std::ostream& os, const std::vector<RoundPlan<Real>>& plans, int m) {
    os << strategy_header << '\n' << "setting orc " << m << '\n';
    for (const auto& p : plans) {
        for (std::size_t i = 0; i < p.rounds.size(); ++i)
            os << (i ? " " : "") << p.rounds[i].ray << ':' << format_real(p.rounds[i].turn);
        os << '\n';
    }
}

template <std::floating_point Real>
void write_strategies(std::ostream& os, const std::vector<TurnSequence<Real>>& lines) {
    os << strategy_header << '\n' << "setting line\n";
    for (const auto& t : lines) {
        if (t.turns.empty()) {
            os << (t.first_direction > 0 ? "+" : "-") << '\n';
            continue;
        }
        for (std::size_t i = 0; i < t.turns.size(); ++i)
            os << (i ? " " : "") << (t.side(i) > 0 ? '+' : '-') << format_real(t.turns[i]);
        os << '\n';
    }
}

template <std::floating_point Real = double>
StrategyFile<Real> read_strategies(std::istream& is) {
    StrategyFile<Real> out;
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line) || line != strategy_header) throw ParseError("missing strategy header", 1);
    ++lineno;
    bool have_setting = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream ls(line);
        if (!have_setting) {
            std::string word, kind;
            ls >> word >> kind;
            if (word != "setting") throw ParseError("expected 'setting line' or 'setting orc <m>'", lineno);
            if (kind == "line") {
                out.setting = Setting::line;
                out.m = 2;
            } else if (kind == "orc") {
                out.setting = Setting::orc;
                if (!(ls >> out.m) || out.m < 1) throw ParseError("setting orc needs a ray count", lineno);
            } else {
                throw ParseError("unknown setting '" + kind + "'", lineno);
            }
            have_setting = true;
            continue;
        }
        std::string tok;
        try {
            if (out.setting == Setting::orc) {
                RoundPlan<Real> plan;
                while (ls >> tok) {
                    const auto colon = tok.find(':');
                    if (colon == std::string::npos) throw ParseError("expected ray:turn, got '" + tok + "'", lineno);
                    const int ray = std::stoi(tok.substr(0, colon));
                    plan.rounds.push_back({ray, parse_real<Real>(std::string_view(tok).substr(colon + 1))});
                }
                validate(plan, out.m);
                out.plans.push_back(std::move(plan));
            } else {
                TurnSequence<Real> t;
                bool first = true;
                while (ls >> tok) {
                    if (tok[0] != '+' && tok[0] != '-') throw ParseError("line turns need a sign: '" + tok + "'", lineno);
                    const int dir = tok[0] == '+' ? 1 : -1;
                    if (first) t.first_direction = dir;
                    if (tok.size() == 1) {
                        if (!first) throw ParseError("bare sign only allowed alone", lineno);
                        first = false;
                        continue;
                    }
                    if (dir != t.side(t.turns.size())) throw ParseError("turn signs must alternate", lineno);
                    t.turns.push_back(parse_real<Real>(std::string_view(tok).substr(1)));
                    first = false;
                }
                validate(t);
                out.lines.push_back(std::move(t));
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (!have_setting) throw ParseError("missing setting line", lineno);
    return out;
}

template <std::floating_point Real>
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow<Real>>& rows) {
    os << "# faultsearch sweep v1\n" << "ray,x,just_above,tau,ratio,robot_order\n";
    for (const auto& r : rows) {
        os << r.target.ray << ',' << format_real(r.target.x) << ',' << (r.just_above ? 1 : 0) << ','
           << format_real(r.tau) << ',' << format_real(r.ratio) << ',';
        for (std::size_t i = 0; i < r.robot_order.size(); ++i) os << (i ? " " : "") << r.robot_order[i];
        os << '\n';
    }
}

template <std::floating_point Real>
void write_assignment_csv(std::ostream& os, const std::vector<AssignedInterval<Real>>& assigned) {
    os << "# faultsearch assignment v1\n" << "robot,round,t_prime,t\n";
    for (const auto& a : assigned)
        os << a.robot << ',' << a.round << ',' << format_real(a.left) << ',' << format_real(a.right) << '\n';
}

template <std::floating_point Real>
void write_trace_csv(std::ostream& os, const GrowthTrace<Real>& trace) {
    os << "# faultsearch trace v1\n" << "step,robot,mu_star,x,step_ratio,log_potential\n";
    for (const auto& s : trace.steps)
        os << s.step << ',' << s.interval.robot << ',' << format_real(s.mu_star) << ',' << format_real(s.x) << ','
           << format_real(s.step_ratio) << ',' << format_real(s.log_potential) << '\n';
}

}  // namespace faultsearch

#endif
