"""Gauss-Kronrod 7/15 rule on [-1, 1] (QUADPACK qk15 tables)."""
import numpy as np

# Kronrod abscissae, descending; XGK[1], XGK[3], XGK[5], XGK[7] are the Gauss nodes.
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# the 15 nodes in ascending order with matching weights
NODES = np.concatenate((-XGK[:-1], XGK[::-1]))
KRONROD_WEIGHTS = np.concatenate((WGK[:-1], WGK[::-1]))
GAUSS_WEIGHTS = np.zeros(15)
for _i, _w in zip((1, 3, 5), WG[:3]):
    GAUSS_WEIGHTS[_i] = _w
    GAUSS_WEIGHTS[14 - _i] = _w
GAUSS_WEIGHTS[7] = WG[3]
