"""Modified Coulomb ground state by double precision Riccati shooting.

u = rho*psi'/psi in t = ln(rho) from the regular start, matched at rho = 4
to the decaying log-derivative integrated in from rho = 300. Prints 1 - E
for the default coupling, then the coupling that reproduces a target E.
"""
import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

al = 0.0072973525693
a2 = al * al


def V(r):
    return -0.5 / r + (-a2 / 4) / r**2 + 0.75 * a2 / (r**2 * (r + a2) ** 2)


def left(eps, rm):
    F0 = -a2 / 4 + 0.75 / a2
    s = 0.5 + np.sqrt(0.25 + F0)
    f = lambda t, u: [u[0] - u[0] ** 2 + np.exp(2 * t) * (V(np.exp(t)) - eps)]
    sol = solve_ivp(f, [np.log(1e-9), np.log(rm)], [s], method="DOP853", rtol=1e-13, atol=1e-13)
    return sol.y[0, -1] / rm


def right(eps, rm):
    R = 300.0
    f = lambda r, y: [V(r) - eps - y[0] ** 2]
    sol = solve_ivp(f, [R, rm], [-np.sqrt(V(R) - eps)], method="DOP853", rtol=1e-13, atol=1e-13)
    return sol.y[0, -1]


def binding(a):
    global al, a2
    al, a2 = a, a * a
    eps = brentq(lambda e: left(e, 4.0) - right(e, 4.0), -0.07, -0.055, xtol=1e-16)
    return 1 - 1 / np.sqrt(1 - 4 * a2 * eps)


print("1 - E at default alpha:", repr(binding(0.0072973525693)))
target = 1 - 0.99999334014853888012
a = brentq(lambda x: binding(x) - target, 0.0072, 0.0074, xtol=1e-15)
print("alpha for target:", repr(a), "1/alpha:", 1 / a)
