#include "fmglab/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fmglab/error.hpp"
#include "fmglab/linstab.hpp"
#include "fmglab/parallel.hpp"
#include "poly.hpp"

namespace fmg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTangentialTol = 1e-12;
constexpr double kEventMergeTol = 1e-12;

cplx principal_pow(cplx z, double e) { return std::exp(e * std::log(z)); }

/// P(i omega) = c u^2 e^{i alpha pi} + u e^{i alpha pi / 2} - a with u = omega^alpha.
cplx p_on_axis(double omega, const LinearFDDE& eq) {
    const double u = std::pow(omega, eq.alpha);
    const double half = eq.alpha * std::numbers::pi / 2.0;
    return eq.c * u * u * std::polar(1.0, 2.0 * half) + u * std::polar(1.0, half) - eq.a;
}

std::vector<double> merged_taus(const CrossingSet& set, Direction dir, std::size_t k) {
    std::vector<double> out;
    for (const auto& c : set.omegas)
        if (c.direction == dir) out.insert(out.end(), c.tau_seq.begin(), c.tau_seq.end());
    std::sort(out.begin(), out.end());
    if (out.size() > k) out.resize(k);
    return out;
}

}  // namespace

const char* to_string(Direction d) noexcept {
    return d == Direction::LeftToRight ? "LeftToRight" : "RightToLeft";
}

double Crossing::period() const noexcept { return kTwoPi / omega; }

double Crossing::tau(std::size_t j) const noexcept { return (phase + kTwoPi * double(j)) / omega; }

cplx characteristic(cplx lambda, const LinearFDDE& eq, double tau) {
    const cplx delayed = eq.b * std::exp(-lambda * tau);
    if (lambda == cplx{}) return -eq.a - delayed;
    const cplx la = principal_pow(lambda, eq.alpha);
    return eq.c * la * la + la - eq.a - delayed;
}

cplx characteristic_derivative(cplx lambda, const LinearFDDE& eq, double tau) {
    const double al = eq.alpha;
    return 2.0 * al * eq.c * principal_pow(lambda, 2.0 * al - 1.0) + al * principal_pow(lambda, al - 1.0) +
           tau * eq.b * std::exp(-lambda * tau);
}

double crossing_magnitude(double omega, const LinearFDDE& eq) {
    return std::norm(p_on_axis(omega, eq)) - eq.b * eq.b;
}

std::array<double, 5> crossing_polynomial(const LinearFDDE& eq) {
    const double half = eq.alpha * std::numbers::pi / 2.0;
    const double ch = std::cos(half);
    const double cf = std::cos(2.0 * half);
    const double a = eq.a, b = eq.b, c = eq.c;
    return {a * a - b * b, -2.0 * a * ch, 1.0 - 2.0 * a * c * cf, 2.0 * c * ch, c * c};
}

double crossing_magnitude_expanded(double omega, const LinearFDDE& eq) {
    const auto coef = crossing_polynomial(eq);
    return detail::poly_eval({coef.begin(), coef.end()}, std::pow(omega, eq.alpha));
}

double crossing_frequency_bound(const LinearFDDE& eq) {
    const auto coef = crossing_polynomial(eq);
    return std::pow(detail::poly_root_bound({coef.begin(), coef.end()}), 1.0 / eq.alpha);
}

int unstable_roots_at_zero_delay(const LinearFDDE& eq) {
    const double a1 = eq.a1();
    const double scale = std::max({1.0, std::abs(eq.a), std::abs(eq.b)});
    if (std::abs(a1) <= 1e-14 * scale)
        throw Error(ErrorCode::DegenerateRoot, "a + b = 0 puts a characteristic root at the origin");
    const double limit = eq.alpha * std::numbers::pi / 2.0;
    auto unstable = [limit](cplx mu) { return std::abs(std::arg(mu)) < limit; };

    if (eq.c == 0.0) return a1 > 0.0 ? 1 : 0;

    const double disc = 1.0 + 4.0 * eq.c * a1;
    if (disc >= 0.0) {
        const double qv = -0.5 * (1.0 + std::sqrt(disc));
        const cplx mu1{qv / eq.c, 0.0};
        const cplx mu2{-a1 / qv, 0.0};
        return int(unstable(mu1)) + int(unstable(mu2));
    }
    const cplx mu{-1.0 / (2.0 * eq.c), std::sqrt(-disc) / (2.0 * std::abs(eq.c))};
    return unstable(mu) ? 2 : 0;
}

bool stability_at_zero_delay(const LinearFDDE& eq) { return unstable_roots_at_zero_delay(eq) == 0; }

CrossingSet find_crossings(const LinearFDDE& eq, const CrossingOptions& opts) {
    CrossingSet set;
    set.tau0_unstable = unstable_roots_at_zero_delay(eq);
    set.tau0_stable = set.tau0_unstable == 0;
    if (eq.b == 0.0) return set;

    const auto coef = crossing_polynomial(eq);
    const detail::Poly poly(coef.begin(), coef.end());
    const double u_max = detail::poly_root_bound(poly);

    for (double u : detail::poly_real_roots(poly, 0.0, u_max)) {
        const double omega = std::pow(u, 1.0 / eq.alpha);
        if (opts.omega_max > 0.0 && omega > opts.omega_max) {
            std::ostringstream os;
            os << "crossing at omega = " << omega << " lies beyond omega_max = " << opts.omega_max;
            throw Error(ErrorCode::WindowTooSmall, os.str());
        }
        Crossing cr;
        cr.omega = omega;
        const cplx p = p_on_axis(omega, eq);
        double theta = std::atan2(-p.imag() / eq.b, p.real() / eq.b);
        if (theta <= 0.0) theta += kTwoPi;
        cr.phase = theta;

        const cplx lam{0.0, omega};
        const double tau0 = theta / omega;
        const cplx delayed = eq.b * std::exp(-lam * tau0);
        const cplx dl = -lam * delayed / (characteristic_derivative(lam, eq, tau0));
        if (!(std::abs(dl.real()) > kTangentialTol * std::abs(dl))) {
            std::ostringstream os;
            os << "tangential crossing at omega = " << omega;
            throw Error(ErrorCode::TangentialCrossing, os.str());
        }
        cr.drift = dl.real();
        cr.direction = dl.real() > 0.0 ? Direction::LeftToRight : Direction::RightToLeft;
        for (std::size_t j = 0; j < opts.k_max; ++j) cr.tau_seq.push_back(cr.tau(j));
        set.omegas.push_back(std::move(cr));
    }
    return set;
}

StabilityVerdict classify_two_term(const LinearFDDE& eq, const CrossingOptions& opts) {
    return classify_two_term(eq, find_crossings(eq, opts), opts);
}

StabilityVerdict classify_two_term(const LinearFDDE& eq, const CrossingSet& set, const CrossingOptions& opts) {
    (void)eq;
    StabilityVerdict v;
    v.stable_at_zero = set.tau0_stable;
    std::ostringstream meta;
    meta << "unstable roots at tau=0: " << set.tau0_unstable << "; crossing frequencies:";
    for (const auto& c : set.omegas) meta << ' ' << c.omega << (c.direction == Direction::LeftToRight ? "(LR)" : "(RL)");
    v.meta = meta.str();

    if (set.omegas.empty()) {
        v.tag = set.tau0_stable ? VerdictTag::StableAllDelay : VerdictTag::UnstableAllDelay;
        return v;
    }

    // Beyond the horizon the destabilizing sequences outnumber the stabilizing ones by
    // more than the initial deficit, so the root count can no longer return to zero.
    double rate = 0.0, offset = 0.0;
    for (const auto& c : set.omegas) {
        if (c.direction == Direction::LeftToRight) {
            rate += c.omega;
            offset += c.phase;
        } else {
            rate -= c.omega;
            offset += kTwoPi - c.phase;
        }
    }
    if (!(rate > 0.0)) throw Error(ErrorCode::DomainError, "stabilizing crossings dominate; root bookkeeping failed");
    const double horizon = std::max(0.0, (offset - std::numbers::pi * set.tau0_unstable) / rate) * (1.0 + 1e-9);

    std::size_t n_events = 0;
    for (const auto& c : set.omegas)
        if (c.phase <= c.omega * horizon) n_events += std::size_t((c.omega * horizon - c.phase) / kTwoPi) + 1;
    if (n_events > opts.max_events) {
        std::ostringstream os;
        os << n_events << " crossing events before the stability horizon " << horizon;
        throw Error(ErrorCode::HorizonTooLong, os.str());
    }

    std::vector<std::pair<double, int>> events;
    events.reserve(n_events);
    for (const auto& c : set.omegas) {
        const int step = c.direction == Direction::LeftToRight ? 2 : -2;
        for (std::size_t j = 0;; ++j) {
            const double t = c.tau(j);
            if (t > horizon) break;
            events.emplace_back(t, step);
        }
    }
    std::sort(events.begin(), events.end());

    int count = set.tau0_unstable;
    bool stable = set.tau0_stable;
    for (std::size_t i = 0; i < events.size();) {
        const double t = events[i].first;
        while (i < events.size() && events[i].first - t <= kEventMergeTol * t) count += events[i++].second;
        if (count < 0) throw Error(ErrorCode::DomainError, "negative unstable-root count while walking crossings");
        if ((count == 0) != stable) {
            stable = !stable;
            v.switches.push_back(t);
        }
    }

    if (v.switches.empty()) {
        v.tag = set.tau0_stable ? VerdictTag::StableAllDelay : VerdictTag::UnstableAllDelay;
    } else if (!set.tau0_stable) {
        v.tag = VerdictTag::InstabilitySwitch;
    } else if (v.switches.size() == 1) {
        v.tag = VerdictTag::SingleStableRegion;
        v.tau_star = v.switches.front();
    } else {
        v.tag = VerdictTag::StabilitySwitch;
    }

    const Direction away = set.tau0_stable ? Direction::LeftToRight : Direction::RightToLeft;
    const Direction back = set.tau0_stable ? Direction::RightToLeft : Direction::LeftToRight;
    v.s1 = merged_taus(set, away, opts.k_max);
    v.s2 = merged_taus(set, back, opts.k_max);
    return v;
}

StabilityVerdict classify(const ModelSpec& spec, double x_star, const CrossingOptions& opts) {
    if (!spec.is_two_term()) return classify_fractional_mg(spec, x_star, opts.k_max);
    return classify_two_term(linearize(spec, x_star), opts);
}

VerdictTag verdict_at_a1(double a1, double b, double c, double alpha, const CrossingOptions& opts) {
    return classify_two_term(LinearFDDE{a1 - b, b, c, alpha}, opts).tag;
}

std::string A1Transition::label() const {
    return std::string(short_label(from)) + "|" + std::string(short_label(to));
}

namespace {

/// Shrinks [lo, hi] onto the first point where the verdict leaves `from`.
A1Transition bisect_a1(double b, double c, double alpha, double lo, double hi, VerdictTag from,
                       const CrossingOptions& opts) {
    VerdictTag to = verdict_at_a1(hi, b, c, alpha, opts);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= 1e-11 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
        const VerdictTag vm = verdict_at_a1(mid, b, c, alpha, opts);
        if (vm == from) {
            lo = mid;
        } else {
            hi = mid;
            to = vm;
        }
    }
    return {0.5 * (lo + hi), from, to};
}

}  // namespace

A1Transition locate_a1_transition(double b, double c, double alpha, double lo, double hi,
                                  const std::string& boundary, const CrossingOptions& opts) {
    if (!(hi > lo)) std::swap(lo, hi);
    const VerdictTag v_lo = verdict_at_a1(lo, b, c, alpha, opts);
    const VerdictTag v_hi = verdict_at_a1(hi, b, c, alpha, opts);
    if (!boundary.empty()) {
        const auto bar = boundary.find('|');
        if (bar == std::string::npos) throw Error(ErrorCode::InvalidSpec, "boundary label must read From|To");
        const VerdictTag want_from = verdict_tag_from_string(boundary.substr(0, bar));
        const VerdictTag want_to = verdict_tag_from_string(boundary.substr(bar + 1));
        if (v_lo != want_from || v_hi != want_to) {
            std::ostringstream os;
            os << "bracket ends are " << short_label(v_lo) << " and " << short_label(v_hi) << ", expected "
               << boundary;
            throw Error(ErrorCode::NoTransition, os.str());
        }
    }
    if (v_lo == v_hi) throw Error(ErrorCode::NoTransition, "same verdict at both ends of the bracket");
    A1Transition t = bisect_a1(b, c, alpha, lo, hi, v_lo, opts);
    if (t.to != v_hi) {
        std::ostringstream os;
        os << "bracket holds more than one transition (" << t.label() << " at a1 = " << t.a1 << " then on to "
           << short_label(v_hi) << ")";
        throw Error(ErrorCode::MultipleTransitions, os.str());
    }
    return t;
}

double find_a1_threshold(double b, double c, double alpha, const std::string& boundary, Interval bracket,
                         const CrossingOptions& opts) {
    return locate_a1_transition(b, c, alpha, bracket.lo, bracket.hi, boundary, opts).a1;
}

std::vector<A1Transition> sweep_a1(double b, double c, double alpha, double lo, double hi, std::size_t n,
                                   const CrossingOptions& opts, unsigned jobs) {
    n = std::max<std::size_t>(n, 2);
    std::vector<double> grid(n);
    std::vector<VerdictTag> tags(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * double(i) / double(n - 1);
    parallel_for(n, jobs, [&](std::size_t i) { tags[i] = verdict_at_a1(grid[i], b, c, alpha, opts); });

    std::vector<A1Transition> out;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double left = grid[i];
        VerdictTag from = tags[i];
        // Chain through regions thinner than the grid spacing.
        for (int guard = 0; from != tags[i + 1] && guard < 16; ++guard) {
            const A1Transition t = bisect_a1(b, c, alpha, left, grid[i + 1], from, opts);
            out.push_back(t);
            const double step = 1e-10 * std::max(1.0, std::abs(t.a1));
            left = std::min(t.a1 + step, grid[i + 1]);
            from = t.to;
        }
    }
    return out;
}

std::vector<RegionRow> scan_region(double b, double alpha, Interval a1_range, std::size_t n_a1, Interval c_range,
                                   std::size_t n_c, const CrossingOptions& opts, unsigned jobs) {
    n_a1 = std::max<std::size_t>(n_a1, 1);
    n_c = std::max<std::size_t>(n_c, 1);
    auto at = [](Interval r, std::size_t i, std::size_t n) {
        return n == 1 ? r.lo : r.lo + (r.hi - r.lo) * double(i) / double(n - 1);
    };
    std::vector<RegionRow> rows(n_a1 * n_c);
    parallel_for(rows.size(), jobs, [&](std::size_t idx) {
        RegionRow& row = rows[idx];
        row.c = at(c_range, idx / n_a1, n_c);
        row.a1 = at(a1_range, idx % n_a1, n_a1);
        try {
            row.verdict = classify_two_term(LinearFDDE{row.a1 - b, b, row.c, alpha}, opts);
        } catch (const Error& e) {
            row.error = e.code();
        }
    });
    return rows;
}

namespace {

constexpr double kProbeOffset = 1e-9;

bool has_region(const std::vector<A1Transition>& ts, VerdictTag tag) {
    return std::any_of(ts.begin(), ts.end(), [tag](const A1Transition& t) { return t.to == tag; });
}

struct Pocket {
    double lo = 0.0;
    double hi = 0.0;
};

/// First region of `tag` inside a sweep, as the interval between its two transitions.
std::optional<Pocket> find_pocket(const std::vector<A1Transition>& ts, VerdictTag tag, double range_hi) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i].to != tag) continue;
        const double end = i + 1 < ts.size() ? ts[i + 1].a1 : range_hi;
        return Pocket{ts[i].a1, end};
    }
    return std::nullopt;
}

struct CriticalSetup {
    double sign = 1.0;         // sign of c in this case
    double a1_lo = 0.0;        // sweep range used by the structural predicates
    double a1_hi = 0.0;
};

CriticalSetup setup_for(double b, double alpha, CriticalC which) {
    const double eps = kProbeOffset * std::abs(b);
    switch (which) {
        case CriticalC::c0:
            if (!(b < 0.0 && alpha < 0.5))
                throw Error(ErrorCode::UnsupportedRegime, "c0 needs b < 0 and alpha < 1/2");
            return {-1.0, eps, 0.0};
        case CriticalC::c1:
        case CriticalC::c2:
            if (!(b > 0.0 && alpha > 0.5 && alpha < 1.0))
                throw Error(ErrorCode::UnsupportedRegime, "c1/c2 need b > 0 and 1/2 < alpha < 1");
            return {1.0, -eps, -eps};
        case CriticalC::c5:
        case CriticalC::c7:
            if (!(b < 0.0 && alpha > 0.5 && alpha < 1.0))
                throw Error(ErrorCode::UnsupportedRegime, "c5/c7 need b < 0 and 1/2 < alpha < 1");
            return {1.0, 2.0 * b + eps, -eps};
    }
    return {};
}

/// Structural predicate, true on the large-|c| side of the critical value.
bool structure_above(double b, double c, double alpha, CriticalC which, const CriticalSetup& s,
                     const CrossingOptions& opts) {
    switch (which) {
        case CriticalC::c0: {
            // SSR between IS and SS exists only for c < c0; thresholds grow like 1/|c|.
            const double hi = 2.0 / std::abs(c) + 10.0 * std::abs(b);
            return has_region(sweep_a1(b, c, alpha, s.a1_lo, hi, 400, opts), VerdictTag::SingleStableRegion);
        }
        case CriticalC::c1:
            return verdict_at_a1(s.a1_hi, b, c, alpha, opts) == VerdictTag::SingleStableRegion;
        case CriticalC::c2:
            return verdict_at_a1(s.a1_hi, b, c, alpha, opts) != VerdictTag::StableAllDelay;
        case CriticalC::c7:
            return verdict_at_a1(s.a1_lo, b, c, alpha, opts) == VerdictTag::StabilitySwitch;
        case CriticalC::c5:
            return has_region(sweep_a1(b, c, alpha, s.a1_lo, s.a1_hi, 2000, opts), VerdictTag::StabilitySwitch);
    }
    return false;
}

/// c5: the SS pocket inside the SSR band shrinks to a point. Bisection keeps the pocket
/// in view by re-sweeping a window around its last known position.
double track_pocket_collapse(double b, double alpha, double lo, double hi, const CriticalSetup& s,
                             const CrossingOptions& opts, double tol) {
    auto pocket_at = [&](double c, const std::optional<Pocket>& hint) -> std::optional<Pocket> {
        if (hint) {
            const double w = hint->hi - hint->lo;
            const double pad = 3.0 * w + 1e-6 * std::abs(b);
            const double l = std::max(s.a1_lo, hint->lo - pad);
            const double h = std::min(s.a1_hi, hint->hi + pad);
            const auto ts = sweep_a1(b, c, alpha, l, h, 400, opts);
            if (auto p = find_pocket(ts, VerdictTag::StabilitySwitch, h)) return p;
        }
        const auto ts = sweep_a1(b, c, alpha, s.a1_lo, s.a1_hi, 2000, opts);
        return find_pocket(ts, VerdictTag::StabilitySwitch, s.a1_hi);
    };

    auto pocket = pocket_at(hi, std::nullopt);
    if (!pocket) throw Error(ErrorCode::NoTransitionInBracket, "no SS pocket at the upper end of the bracket");
    const double span = hi - lo;
    for (int round = 0; round < 8; ++round) {
        const double lo0 = lo;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (auto p = pocket_at(mid, pocket)) {
                hi = mid;
                pocket = p;
            } else {
                lo = mid;
            }
        }
        if (lo > lo0 + tol || lo0 - span <= 0.0) break;
        // The pocket survived all the way down: the coarse lower end missed a thin pocket.
        hi = lo;
        lo = std::max(0.5 * lo0, lo0 - span);
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double find_critical_c(double b, double alpha, CriticalC which, Interval bracket, const CrossingOptions& opts) {
    const CriticalSetup s = setup_for(b, alpha, which);
    auto pred = [&](double mag) { return structure_above(b, s.sign * mag, alpha, which, s, opts); };

    double lo, hi;  // magnitudes |c|
    if (bracket.lo == 0.0 && bracket.hi == 0.0) {
        // c*|b| is invariant under lambda -> s*lambda, so scan the invariant on a log grid.
        constexpr int n = 61;
        double prev_mag = 0.0;
        bool prev = false, found = false;
        for (int i = 0; i < n; ++i) {
            const double mag = std::pow(10.0, -3.0 + 6.0 * i / (n - 1)) / std::abs(b);
            const bool now = pred(mag);
            if (i > 0 && now && !prev) {
                lo = prev_mag;
                hi = mag;
                found = true;
                break;
            }
            prev = now;
            prev_mag = mag;
        }
        if (!found) throw Error(ErrorCode::NoTransitionInBracket, "no structural change for c*|b| in [1e-3, 1e3]");
    } else {
        lo = std::min(std::abs(bracket.lo), std::abs(bracket.hi));
        hi = std::max(std::abs(bracket.lo), std::abs(bracket.hi));
        if (std::signbit(bracket.lo) != std::signbit(s.sign) && bracket.lo != 0.0)
            throw Error(ErrorCode::NoTransitionInBracket, "bracket has the wrong sign for this case");
        if (pred(lo) == pred(hi)) throw Error(ErrorCode::NoTransitionInBracket, "predicate agrees at both ends");
        if (pred(lo)) throw Error(ErrorCode::NoTransitionInBracket, "structure is inverted across the bracket");
    }

    const double tol = 1e-9 * std::max(1.0, hi);
    if (which == CriticalC::c5) return s.sign * track_pocket_collapse(b, alpha, lo, hi, s, opts, tol);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid)) hi = mid;
        else lo = mid;
    }
    return s.sign * 0.5 * (lo + hi);
}

const char* to_string(CriticalC which) noexcept {
    switch (which) {
        case CriticalC::c0: return "c0";
        case CriticalC::c1: return "c1";
        case CriticalC::c2: return "c2";
        case CriticalC::c5: return "c5";
        case CriticalC::c7: return "c7";
    }
    return "?";
}

CriticalC critical_c_from_string(const std::string& s) {
    for (auto w : {CriticalC::c0, CriticalC::c1, CriticalC::c2, CriticalC::c5, CriticalC::c7})
        if (s == to_string(w)) return w;
    throw Error(ErrorCode::InvalidSpec, "unknown critical value '" + s + "'");
}

}  // namespace fmg
