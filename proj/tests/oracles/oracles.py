"""Independent reference values frozen into the C++ unit tests.

Run: python3 tests/oracles/oracles.py
"""
from fractions import Fraction
import itertools
import math

import mpmath as mp
import numpy as np


def bump():
    # kappa(u) = exp(-1/(1-4u^2)) on |u| < 1/2; kappa_hat(x) = int kappa(u) e^{-ixu} du
    x, w = np.polynomial.legendre.leggauss(4000)
    u = 0.25 * (x + 1.0)
    wk = 0.25 * w * np.exp(-1.0 / (1.0 - 4.0 * u * u))
    k2 = 2.0 * np.sum(0.25 * w * np.exp(-2.0 / (1.0 - 4.0 * u * u)))
    gx, gw = np.polynomial.legendre.leggauss(32)
    total = 0.0
    for a in np.arange(0.0, 512.0, 0.25):
        t = a + 0.125 * (gx + 1.0)
        kh = 2.0 * (np.cos(np.outer(t, u)) @ wk)
        total += 0.125 * np.sum(gw * t * kh * kh)
    c = 1.0 / total
    return {"int_t_khat2": total, "c": c, "gamma": c * k2, "kappa_hat0": 2.0 * wk.sum()}


def lam(p1, p2):
    return 2.0 * (2.0 - np.cos(p1) - np.cos(p2))


def lam_J(offsets, p1, p2):
    acc = 0.0
    for a, b in offsets:
        acc = acc + (1.0 - np.cos(a * p1 + b * p2))
    return acc / len(offsets)


def box(rho):
    return [(a, b) for a in range(-rho, rho + 1) for b in range(-rho, rho + 1) if (a, b) != (0, 0)]


def v2(offsets):
    return Fraction(sum(a * a for a, _ in offsets), 2 * len(offsets))


def theta(offsets, res=4096):
    best = math.inf
    k = 2.0 * np.pi * np.arange(res) / res
    for i in range(res):
        p1 = k[i]
        l = lam(p1, k)
        lj = lam_J(offsets, p1, k)
        if i == 0:
            l, lj = l[1:], lj[1:]
        best = min(best, float(np.min(lj / l)))
    return best


def green_forms():
    out = {}
    nn = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    for N in range(3, 7):
        S = 4 ** N
        x = np.arange(S)
        f = np.cos(2 * np.pi * x / S)[:, None] * np.ones((1, S)) / S ** 2
        f -= f.mean()
        fh = np.fft.fft2(f)
        k = 2 * np.pi * np.fft.fftfreq(S) 
        P1, P2 = np.meshgrid(k, k, indexing="ij")
        lj = lam_J(nn, P1, P2)
        lj[0, 0] = 1.0
        g = np.sum(np.abs(fh) ** 2 / lj) / S ** 2
        out[N] = 0.25 * g
    return out


def z_tilde(gamma_beta, qmax=10):
    mp.mp.dps = 60
    F = lambda phi: 1 + 2 * mp.nsum(lambda q: mp.e ** (-gamma_beta * q * q / 2) * mp.cos(q * phi), [1, mp.inf])
    return [mp.quad(lambda phi: mp.log(F(phi)) * mp.cos(q * phi), [0, mp.pi]) * 2 / mp.pi for q in range(1, qmax + 1)]


def brute_2x1(beta, m2, window=40):
    # -Delta_J on the 2 x 1 torus (nn, normalised): (sigma, -Delta_J sigma) = (s0 - s1)^2 / 2
    a = 2 * math.pi / math.sqrt(beta)
    Z = e00 = e01 = 0.0
    for k0 in range(-window, window + 1):
        for k1 in range(-window, window + 1):
            s0, s1 = a * k0, a * k1
            w = math.exp(-0.5 * (0.5 * (s0 - s1) ** 2 + m2 * (s0 * s0 + s1 * s1)))
            Z += w
            e00 += w * s0 * s0
            e01 += w * s0 * s1
    return e00 / Z, e01 / Z


def gauss_hermite(n):
    x, w = np.polynomial.hermite_e.hermegauss(n)
    return x, w / math.sqrt(2 * math.pi)


def regulator_case():
    # one j = 1 block (L = 2) at block (1, 1) on an 8 x 8 block torus (side 16)
    L, j, n = 2, 1, 8
    R = n * L
    b = L ** j
    xs = np.arange(R)
    phi = np.cos(2 * np.pi * xs / R)[:, None] + 0.5 * np.sin(2 * np.pi * 2 * xs / R)[None, :] \
        + 0.25 * np.cos(2 * np.pi * (xs[:, None] + xs[None, :]) / R)
    dirs = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    at = lambda x, y: phi[x % R, y % R]
    X = {(1, 1)}
    sites = [(bx * b + a, by * b + c) for bx, by in X for a in range(b) for c in range(b)]
    sset = set(sites)
    grad2 = lambda x, y: sum(0.5 * (at(x + d[0], y + d[1]) - at(x, y)) ** 2 for d in dirs)
    bulk = sum(grad2(x, y) for x, y in sites)
    inner = [(x, y) for x, y in sites if any(((x + d[0]) % R, (y + d[1]) % R) not in sset for d in dirs)]
    boundary = L ** j * sum(grad2(x, y) for x, y in inner)
    W2 = w2 = 0.0
    for bx, by in X:
        star = [((bx + u) % n, (by + v) % n) for u in range(-3, 4) for v in range(-3, 4)]
        m1 = m2 = 0.0
        for sx, sy in star:
            for a in range(b):
                for c in range(b):
                    x, y = sx * b + a, sy * b + c
                    for d in dirs:
                        g1 = at(x + d[0], y + d[1]) - at(x, y)
                        m1 = max(m1, abs(g1))
                        for e in dirs:
                            g2 = at(x + d[0] + e[0], y + d[1] + e[1]) - at(x + d[0], y + d[1]) - at(x + e[0], y + e[1]) + at(x, y)
                            m2 = max(m2, abs(g2))
        W2 += (L ** (2 * j) * m2) ** 2
        w2 += max((L ** j * m1) ** 2, (L ** (2 * j) * m2) ** 2)
    return {"bulk": bulk, "boundary": boundary, "W2": W2, "w2": w2}


def preimage(L, k, z):
    # sum over Y subsets of the L^2 k fine blocks whose closure is all k coarse blocks
    z = Fraction(z)
    return ((1 + z) ** (L * L) - 1) ** k


if __name__ == "__main__":
    print("bump", bump())
    print("v2 nn", v2([(1, 0), (-1, 0), (0, 1), (0, -1)]), "J1", v2(box(1)), "J2", v2(box(2)))
    print("theta J1", theta(box(1)), "theta J2", theta(box(2)))
    print("green", green_forms())
    for gb in (20.0, 40.0):
        z = z_tilde(gb)
        print("z_tilde", gb, [mp.nstr(v, 17) for v in z[:4]])
    print("brute 2x1 beta=10 m2=0.5", brute_2x1(10.0, 0.5))
    x, w = gauss_hermite(5)
    print("gh5", list(x), list(w))
    print("regulator", regulator_case())
    print("preimage L=3 z=1/2", preimage(3, 1, Fraction(1, 2)), "L=2 k=2 z=1/3", preimage(2, 2, Fraction(1, 3)))
