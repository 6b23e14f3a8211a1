"""Closed-form catalog data in the degree parameters, kept apart from the package encoding."""
import sympy

d, d1, d2, N = sympy.symbols("d d1 d2 N")
F2 = [(-1, 0), (0, -1), (0, 1), (1, 2)]
F1 = [(-1, 0), (0, -1), (0, 1), (1, 1)]
F0 = [(-1, 0), (0, -1), (0, 1), (1, 0)]
P2 = [(-1, 0), (0, -1), (1, 1)]
FN = [(-1, 0), (0, -1), (0, 1), (1, N + 2)]

# fan, boundary degrees, blow-up groups (ray, dim, count), tangency ray, tangency order
SYMBOLIC = {
    "P2(1,4)": (F2, (d, 2 * d, 0, d), [(0, d, 1), (1, 1, 2 * d)], 3, d),
    "P2(4,1)": (F2, (d, 2 * d, 0, d), [(0, d, 1), (3, 1, d)], 1, 2 * d),
    "F0(2,2)": (P2, (d1 + d2,) * 3, [(1, 1, d1 + d2), (2, d1, 1), (2, d2, 1)], 0, d1 + d2),
    "F1(0,4)": (F2, (d2, 2 * d2, 0, d2), [(0, d2, 1), (1, 1, 2 * d2), (3, d2 - d1, 1)], 3, d1),
    "F1(4,0)": (F2, (d2, 2 * d2, 0, d2), [(0, d2, 1), (3, 1, d1), (3, d2 - d1, 1)], 1, 2 * d2),
    "F1(1,3)": (F1, (d1, d1 + d2, d2, d1), [(0, d1, 1), (1, 1, d1 + d2), (3, d1, 1)], 2, d2),
    "F1(3,1)": (F1, (d1, d1 + d2, d2, d1), [(0, d1, 1), (2, 1, d2), (3, d1, 1)], 1, d1 + d2),
    "F2(2,2)": (F0, (d1, d2, d2, d1), [(0, d1, 1), (1, 1, d2), (3, d1, 1)], 2, d2),
    "FN(-N,N+4)": (FN, (d1, 2 * d1 + d2, d2 - N * d1, d1), [(0, d1, 1), (1, 1, 2 * d1 + d2), (3, d1, 1)], 2, d2 - N * d1),
    "FN(N+4,-N)": (FN, (d1, 2 * d1 + d2, d2 - N * d1, d1), [(0, d1, 1), (2, 1, d2 - N * d1), (3, d1, 1)], 1, 2 * d1 + d2),
}
