"""Oracle values for the norm functionals.

Potentials come from symbolic differentiation of the eigenfunctions (as in
gen_potential_oracle.py), lambdified to numpy and integrated with tensor
Gauss–Legendre rules on fixed panels; each value is recomputed with doubled
nodes and the change is printed. Profile functionals of the Gaussian use
mpmath at 30 digits.
"""
import mpmath as mp
import numpy as np
import sympy as sp

mp.mp.dps = 30
x, s, r = sp.symbols("x s r", real=True)


def gl_panels(edges, nodes):
    t, w = np.polynomial.legendre.leggauss(nodes)
    a, b = edges[:-1, None], edges[1:, None]
    return ((b - a) / 2 * t + (a + b) / 2).ravel(), ((b - a) / 2 * w).ravel()


def wvn3_lp(p, nodes, big_r=20000.0):
    g = 2 / sp.pi * (r / 2 - sp.sin(2 * r) / 4)
    psi = sp.sqrt(2 / sp.pi) * sp.sin(r) / r * (1 + g**2) ** (-1)
    v = sp.simplify(1 + (sp.diff(psi, r, 2) + 2 / r * sp.diff(psi, r)) / psi)
    f = sp.lambdify(r, v, "numpy")
    edges = np.concatenate([[1e-3], np.arange(1, int(big_r / (np.pi / 2)) + 1) * np.pi / 2])
    xs, ws = gl_panels(edges, nodes)
    body = np.sum(np.abs(f(xs)) ** p * xs**2 * ws)
    body += abs(float(v.limit(r, 0))) ** p * 1e-9 / 3
    last = xs > edges[-1] - 200 * np.pi
    k = np.sum((np.abs(f(xs)) ** p * xs**p * ws)[last]) / np.sum(ws[last])
    # ⟨|V|^p r^p⟩ · ∫_R^∞ r^{2−p} dr
    tail = k * edges[-1] ** (3 - p) / (p - 3)
    return 4 * np.pi * (body + tail)


def ij2_lp(p, nodes, big_x=4000.0):
    g = 2 * x - sp.sin(2 * x)
    psi = (1 + g**2 + s**4) ** (-1) * sp.sin(x)
    v = 1 + (sp.diff(psi, x, 2) + sp.diff(psi, s, 2)) / psi
    f = sp.lambdify((x, s), sp.simplify(v), "numpy")
    xs, wx = gl_panels(np.arange(0, int(big_x / (np.pi / 2)) + 1) * np.pi / 2, nodes)
    total = 0.0
    for chunk in np.array_split(np.arange(xs.size), 200):
        x1, w1 = xs[chunk], wx[chunk]
        s1 = 2 * np.sqrt(1 + x1) + 2
        t, wt = gl_panels(np.linspace(0, 1, 9), nodes)
        near_s = s1[:, None] * t[None, :]
        near = np.sum(np.abs(f(x1[:, None], near_s)) ** p * s1[:, None] * wt[None, :], axis=1)
        # s = s1/u on [s1, ∞)
        u, wu = gl_panels(np.linspace(0, 1, 9), nodes)
        far_s = s1[:, None] / u[None, :]
        far = np.sum(np.abs(f(x1[:, None], far_s)) ** p * s1[:, None] / u[None, :] ** 2 * wu[None, :], axis=1)
        total += np.sum((near + far) * w1)
    return 4 * total


def gaussian_dyadic(p):
    # Σ_j (∫_{2^j}^{2^{j+1}} e^{−p r²} r^{p−1} dr)^{1/p}
    tot = mp.mpf(0)
    for j in range(-60, 8):
        a, b = mp.mpf(2) ** j, mp.mpf(2) ** (j + 1)
        tot += mp.quad(lambda t: mp.exp(-p * t * t) * t ** (p - 1), [a, b]) ** (1 / mp.mpf(p))
    return tot


def gaussian_dyadic_inf():
    tot = mp.mpf(0)
    peak = 1 / mp.sqrt(2)
    for j in range(-200, 8):
        a, b = mp.mpf(2) ** j, mp.mpf(2) ** (j + 1)
        tot += max(t * mp.exp(-t * t) for t in ([a, b, peak] if a <= peak <= b else [a, b]))
    return tot


rows = []
for name, fn in [("wvn3_n1_a1_lp4", lambda k: wvn3_lp(4, k)), ("ij2_n1_a1_lp4", lambda k: ij2_lp(4, k))]:
    coarse, fine = fn(24), fn(48)
    print(name, fine, abs(fine - coarse) / fine)
    rows.append((name, fine))
rows.append(("gaussian_dyadic_p4", gaussian_dyadic(4)))
rows.append(("gaussian_dyadic_inf", gaussian_dyadic_inf()))

with open("norm_oracle.csv", "w") as out:
    out.write("name,value\n")
    for name, val in rows:
        out.write(f"{name},{mp.nstr(mp.mpf(val), 17)}\n")
