"""Symbolic curvature for small test metrics, used as an independent reference."""
import sympy as sp

X = sp.symbols("x0:6", real=True)


def christoffel(g):
    ginv = g.inv()
    n = g.shape[0]
    return [[[sp.simplify(sum(ginv[a, d] * (sp.diff(g[d, b], X[c]) + sp.diff(g[d, c], X[b]) - sp.diff(g[b, c], X[d]))
                              for d in range(n)) / 2)
              for c in range(n)] for b in range(n)] for a in range(n)]


def ricci(g):
    """R_bd = d_a G^a_db - d_d G^a_ab + G^a_ae G^e_db - G^a_de G^e_ab."""
    n = g.shape[0]
    G = christoffel(g)
    R = sp.zeros(n, n)
    for b in range(n):
        for d in range(n):
            R[b, d] = sp.simplify(sum(
                sp.diff(G[a][d][b], X[a]) - sp.diff(G[a][a][b], X[d])
                + sum(G[a][a][e] * G[e][d][b] - G[a][d][e] * G[e][a][b] for e in range(n))
                for a in range(n)))
    return R


def at(expr, point):
    subs = dict(zip(X, point))
    return sp.lambdify([], expr.subs(subs) if hasattr(expr, "subs") else expr, "numpy")()
