"""Daubechies scaling functions on a dyadic grid.

Filter coefficients for orders 2..10 are embedded as constants (values
carry full double precision; they satisfy sum(h) = sqrt(2) and the
even-shift orthonormality identities to ~1e-15).  The scaling function
phi is realised by cascade refinement on a dyadic grid: values at the
integers come from the eigenvector of the refinement matrix, then each
halving of the grid step applies the two-scale relation

    phi(x) = sqrt(2) * sum_k h_k phi(2 x - k),

down to ``_DEPTH`` levels.  Point evaluation interpolates linearly
between grid nodes.
"""

from functools import lru_cache

import numpy as np

from .errors import ConfigError

_DEPTH = 12

_DB_FILTERS: dict[int, tuple[float, ...]] = {
    2: (
        0.48296291314453416, 0.8365163037378079, 0.2241438680420134,
        -0.12940952255126037,
    ),
    3: (
        0.33267055295008263, 0.8068915093110925, 0.45987750211849154,
        -0.13501102001025458, -0.08544127388202666, 0.03522629188570953,
    ),
    4: (
        0.2303778133088965, 0.7148465705529157, 0.6308807679298589,
        -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
        0.0328830116668852, -0.010597401785069032,
    ),
    5: (
        0.16010239797419293, 0.6038292697971896, 0.7243085284377729,
        0.13842814590132074, -0.24229488706638203, -0.032244869584638375,
        0.07757149384004572, -0.006241490212798274, -0.012580751999081999,
        0.0033357252854737712,
    ),
    6: (
        0.11154074335010947, 0.49462389039845306, 0.7511339080210954,
        0.31525035170919763, -0.22626469396543983, -0.12976686756726194,
        0.09750160558732304, 0.027522865530305727, -0.03158203931748603,
        0.0005538422011614961, 0.004777257510945511, -0.0010773010853084796,
    ),
    7: (
        0.07785205408500918, 0.3965393194819173, 0.7291320908462351,
        0.4697822874051931, -0.14390600392856498, -0.22403618499387498,
        0.07130921926683026, 0.08061260915108308, -0.03802993693501441,
        -0.01657454163066688, 0.01255099855609984, 0.0004295779729213665,
        -0.0018016407040474908, 0.00035371379997452024,
    ),
    8: (
        0.05441584224310401, 0.31287159091429995, 0.6756307362972898,
        0.5853546836542067, -0.015829105256349306, -0.2840155429615469,
        0.0004724845739132828, 0.12874742662047847, -0.017369301001807547,
        -0.044088253930794755, 0.013981027917398282, 0.008746094047405777,
        -0.004870352993451574, -0.00039174037337694705, 0.0006754494064505693,
        -0.00011747678412476953,
    ),
    9: (
        0.038077947363878345, 0.24383467461259034, 0.6048231236901112,
        0.6572880780513005, 0.13319738582500756, -0.2932737832791749,
        -0.09684078322297646, 0.14854074933810638, 0.03072568147933338,
        -0.06763282906132997, 0.00025094711483145197, 0.022361662123679096,
        -0.004723204757751397, -0.00428150368246343, 0.0018476468830562265,
        0.00023038576352319597, -0.0002519631889427101, 3.93473203162716e-05,
    ),
    10: (
        0.026670057900555554, 0.1881768000776915, 0.5272011889317256,
        0.6884590394536035, 0.2811723436605775, -0.24984642432731538,
        -0.19594627437737705, 0.12736934033579325, 0.09305736460357235,
        -0.07139414716639708, -0.029457536821875813, 0.033212674059341,
        0.0036065535669561697, -0.010733175483330575, 0.001395351747052901,
        0.001992405295185056, -0.0006858566949597116, -0.00011646685512928545,
        9.358867032006959e-05, -1.3264202894521244e-05,
    ),
}


def daubechies_filter(order):
    """Low-pass filter h_0..h_{2N-1} for the order-N Daubechies wavelet."""
    if order not in _DB_FILTERS:
        raise ConfigError(f"Daubechies order must be in 2..10, got {order}")
    return np.asarray(_DB_FILTERS[order], dtype=float)


@lru_cache(maxsize=None)
def scaling_table(order, depth=_DEPTH):
    """Values of phi on the grid {k 2^-depth : 0 <= k <= (2N-1) 2^depth}.

    Returns a read-only array ``tab`` with ``tab[k] = phi(k * 2**-depth)``.
    """
    h = daubechies_filter(order)
    width = len(h) - 1  # support is [0, 2N-1)
    # phi at the integers: eigenvector of A[i, j] = sqrt(2) h_{2i - j}
    idx = np.arange(1, width)
    a = np.zeros((width - 1, width - 1))
    for row, i in enumerate(idx):
        for col, j in enumerate(idx):
            k = 2 * i - j
            if 0 <= k <= width:
                a[row, col] = np.sqrt(2.0) * h[k]
    eigvals, eigvecs = np.linalg.eig(a)
    pos = int(np.argmin(np.abs(eigvals - 1.0)))
    v = np.real(eigvecs[:, pos])
    v = v / v.sum()
    values = np.zeros(width + 1)
    values[1:width] = v  # phi(0) = phi(2N-1) = 0

    for level in range(1, depth + 1):
        step = width * 2**level + 1
        finer = np.zeros(step)
        finer[::2] = values
        # odd nodes x = m 2^-level: phi(x) = sqrt(2) sum_k h_k phi(2x - k)
        m = np.arange(1, step, 2)
        acc = np.zeros(m.size)
        for k, hk in enumerate(h):
            src = m - k * 2 ** (level - 1)  # index of 2x - k on the coarser grid
            ok = (src >= 0) & (src < values.size)
            acc[ok] += hk * values[src[ok]]
        finer[1::2] = np.sqrt(2.0) * acc
        values = finer
    values.flags.writeable = False
    return values


def scaling_function(order, x, depth=_DEPTH):
    """phi(x) by linear interpolation in the cascade table; 0 off-support."""
    tab = scaling_table(order, depth)
    x = np.asarray(x, dtype=float)
    pos = x * 2.0**depth
    lo = np.floor(pos).astype(np.int64)
    frac = pos - lo
    inside = (lo >= 0) & (lo < tab.size - 1)
    out = np.zeros_like(x, dtype=float)
    safe = np.where(inside, lo, 0)
    out = np.where(inside, (1.0 - frac) * tab[safe] + frac * tab[safe + 1], 0.0)
    return out


def periodized_scaling(order, level, shift, t, depth=_DEPTH):
    """Periodized scaling function phi_{level, shift} on [0, 1].

    phi_{J,k}(t) = 2^{J/2} sum_l phi(2^J t + 2^J l - k) with the sum
    running over the integers l that land inside the support of phi.
    """
    if not 0 <= shift < 2**level:
        raise ConfigError(f"wavelet shift {shift} outside 0..{2**level - 1}")
    t = np.asarray(t, dtype=float)
    width = 2 * order - 1
    u = (2.0**level) * t - shift
    out = np.zeros_like(u, dtype=float)
    l_lo = int(np.floor((0.0 - float(np.max(u, initial=0.0))) / 2**level)) - 1
    l_hi = int(np.ceil((width - float(np.min(u, initial=0.0))) / 2**level)) + 1
    for l in range(l_lo, l_hi + 1):
        out += scaling_function(order, u + l * 2**level, depth)
    return 2.0 ** (level / 2.0) * out
