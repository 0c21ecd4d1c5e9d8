#!/usr/bin/env python3
"""Generate golden values for the C++ test suites.

Every value here comes from an mpmath computation at 30+ significant digits
that does not share code with the C++ library: theta values are brute-force
direct sums, integrals use mpmath's own quadrature, and the inside-interval
quantities are summed from Fourier rows.  Run from the repository root:

    python3 tests/fixtures/make_fixtures.py > tests/fixtures/golden.hpp
"""
import sys
import mpmath as mp

mp.mp.dps = 32


def theta_it(z, t):
    """Direct series for theta(z, i t), real z, t > 0."""
    z = mp.mpf(z)
    t = mp.mpf(t)
    nmax = int(mp.sqrt(90 / (mp.pi * t))) + 3
    s = mp.mpf(1)
    for n in range(1, nmax + 1):
        s += 2 * mp.exp(-mp.pi * n * n * t) * mp.cos(2 * mp.pi * n * z)
    return s


def force_reflecting(beta, L):
    s = L * mp.sqrt(2 * beta)
    return mp.sqrt(beta / 2) * (1 - mp.exp(-s)) / mp.sinh(s)


def parity_reflecting(beta, L, x):
    k = mp.sqrt(2 * beta)
    return (mp.sinh(k * x) + mp.sinh(k * (L - x))) / mp.sinh(k * L)


def density_outside_absorbing(beta, x):
    f = lambda u: 2 * beta * mp.exp(-4 * beta * u) / mp.sqrt(2 * mp.pi * u) * mp.erf(x / mp.sqrt(2 * u))
    return -mp.quad(f, [0, x * x / 8, x * x, 1, mp.inf])


def parity_outside_absorbing(beta, x, y):
    c = lambda u: 2 * mp.sqrt(2 * u)
    f = lambda u: 4 * beta * mp.exp(-4 * beta * u) * mp.erf((x + y) / c(u)) * mp.erf((y - x) / c(u))
    return 1 + mp.quad(f, [0, 0.01, 0.1, 1, mp.inf])


def flux_inside_rows(beta, L, x, tol=mp.mpf('1e-28')):
    """Inside flux from the Fourier double series, inner index summed exactly."""
    t = mp.mpf(x) / L
    total = mp.mpf(0)
    m = 0
    while True:
        c = mp.sqrt((m * mp.pi) ** 2 + 4 * beta * L * L)
        envelope = (mp.cosh(c * (1 - t)) + mp.cosh(c * t)) / (c * mp.sinh(c))
        term = mp.cos(m * mp.pi * t) / (c * mp.sinh(c)) * (mp.cosh(c * (1 - t)) - (-1) ** m * mp.cosh(c * t))
        total += term if m == 0 else 2 * term
        if m > 5 and envelope < tol:
            break
        m += 1
    return 2 * beta * total


def density_inside_rows(beta, L, x, tol=mp.mpf('1e-28')):
    """Inside density, cosine expansion in x with the y-ODE solved exactly."""
    x = mp.mpf(x)
    s = L * mp.sqrt(2 * beta)
    total = mp.sqrt(beta / 2) * (mp.coth(s) + mp.cosh(s * (1 - 2 * x / L)) / mp.sinh(s))
    m = 0
    while True:
        k = m * mp.pi / L
        kap = mp.sqrt(k * k + 4 * beta)
        w = mp.mpf(0.5) if m == 0 else mp.mpf(1)
        envelope = (4 * beta / L) / (k * k + 2 * beta) * (mp.sinh(kap * x) + mp.sinh(kap * (L - x))) / mp.sinh(kap * L)
        term = w * (4 * beta / L) / (k * k + 2 * beta) * ((-1) ** m * mp.sinh(kap * x) + mp.sinh(kap * (L - x))) * mp.cos(k * x) / mp.sinh(kap * L)
        total -= term
        if m > 5 and envelope < tol:
            break
        m += 1
    return total


def density_inside_partial(beta, L, x, N):
    """Literal square truncation 1..N of both printed density series."""
    x = mp.mpf(x)
    th = mp.pi * x / L
    s1 = mp.fsum(8 * beta * L * (1 - (-1) ** n) / (n * mp.pi * (n * n * mp.pi ** 2 + 4 * beta * L * L)) * mp.sin(n * th)
                 for n in range(1, N + 1))
    cos_m = [mp.cos(m * th) for m in range(N + 1)]
    sin_n = [mp.sin(n * th) for n in range(N + 1)]
    terms = []
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            if (m + n) % 2 == 0:
                continue
            terms.append(32 * beta * L * n / (mp.pi * (n * n - m * m) * ((m * m + n * n) * mp.pi ** 2 + 4 * beta * L * L))
                         * cos_m[m] * sin_n[n])
    return s1 + mp.fsum(terms)


def flux_outside(beta, x):
    return 4 * beta / mp.pi * mp.besselk(0, 2 * abs(x) * mp.sqrt(2 * beta))


def force_absorbing_theta(beta, L):
    a = 4 * beta * L * L

    def f1(y):
        return mp.exp(-a * y) / y * (1 - theta_it(0, 1 / (mp.pi * y)) ** 2)

    def f2(y):
        return mp.exp(-a * y) * theta_it(mp.mpf(1) / 2, mp.pi * y) ** 2

    lo = mp.mpf(1) / 400
    pts = [lo, 1 / (4 * a), 1 / a, 4 / a, 20 / a, 200 / a]
    pts = sorted(set(p for p in pts if p >= lo))
    return 2 * beta / mp.pi * mp.quad(f1, pts) + 2 * beta * mp.quad(f2, pts)


def force_absorbing_fluxlimit(beta, L):
    """lim J_out(-x) - J_in(x) via Richardson on an even analytic residual."""
    x0 = mp.mpf('0.004') * L
    g = [flux_outside(beta, x0 / 2 ** k) - flux_inside_rows(beta, L, x0 / 2 ** k, tol=mp.mpf('1e-26'))
         for k in range(3)]
    r1 = [(4 * g[k + 1] - g[k]) / 3 for k in range(2)]
    return (16 * r1[1] - r1[0]) / 15


def emit(name, value, note):
    print(f"// {note}")
    print(f"inline constexpr double {name} = {mp.nstr(value, 25)};")


def main():
    print("// Generated by tests/fixtures/make_fixtures.py (mpmath", mp.__version__, ", dps", mp.mp.dps, ").")
    print("// Do not edit by hand.")
    print("#pragma once\n")
    print("namespace casimir::golden {\n")
    emit("kTheta0i", theta_it(0, 1), "theta(0, i), direct series")
    emit("kTheta0iClosed", mp.pi ** mp.mpf(0.25) / mp.gamma(mp.mpf(0.75)), "pi^(1/4)/Gamma(3/4)")
    emit("kErf1", mp.erf(1), "erf(1)")
    emit("kBesselK0At1", mp.besselk(0, 1), "K0(1)")
    emit("kBesselK0At20", mp.besselk(0, 20), "K0(20)")
    emit("kTwoK0At2", 2 * mp.besselk(0, 2), "int_0^inf exp(-1/u-u)/u du = 2 K0(2)")
    emit("kForceReflB1L1", force_reflecting(1, 1), "reflecting force, beta=1, L=1")
    emit("kParityReflB1L2Mid", parity_reflecting(1, 2, 1), "reflecting parity V(L/2), beta=1, L=2")
    emit("kDensityOutAbsB1Xm1", density_outside_absorbing(1, -1), "half-space absorbing density, beta=1, x=-1")
    emit("kParityOutAbsB1", parity_outside_absorbing(1, -2, -1), "half-space absorbing parity V(-2,-1), beta=1")
    emit("kDensityInAbsB1L1Mid", density_inside_rows(1, 1, mp.mpf('0.5')), "inside absorbing density, beta=1, L=1, x=0.5")
    emit("kDensityInAbsB1L1MidN512", density_inside_partial(1, 1, mp.mpf('0.5'), 512),
         "inside absorbing density, literal square partial sum N=512")
    emit("kFluxInB1L1X01", flux_inside_rows(1, 1, mp.mpf('0.1')), "inside flux, beta=1, L=1, x=0.1")
    emit("kFluxInB1L1X03", flux_inside_rows(1, 1, mp.mpf('0.3')), "inside flux, beta=1, L=1, x=0.3")
    for L, tag in [(mp.mpf('0.5'), "L05"), (mp.mpf(1), "L1"), (mp.mpf(2), "L2")]:
        a = force_absorbing_theta(1, L)
        b = force_absorbing_fluxlimit(1, L)
        rel = abs(a - b) / abs(a)
        print(f"// theta-integral vs flux-limit routes differ by {mp.nstr(rel, 3)} relative")
        if rel > mp.mpf('1e-12'):
            sys.exit(f"absorbing force routes disagree at L={L}: {a} vs {b}")
        emit(f"kForceAbsB1{tag}", a, f"absorbing force, beta=1, L={mp.nstr(L, 3)}")
    print("\n}  // namespace casimir::golden")


if __name__ == "__main__":
    main()
