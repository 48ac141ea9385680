"""Thermal-fluctuation contribution to the two-time correlator.

The reservoir adds to <a^dag(t) a(s)> the noise term v*(t, s) with

    v(t, s) = int_0^inf dw/2pi J(w) n(w) e^{-i w (t - s)} F(t, w) F*(s, w),
    F(t, w) = int_0^t u(sigma) e^{i w sigma} d sigma,

evaluated on a fixed frequency grid dense enough to resolve the phases
e^{i w t} out to the end of the time grid.  The time integral defining F
uses a Filon-type trapezoid rule (piecewise-linear u against an exactly
integrated phase factor), streamed in time chunks so the full
(n_omega x n_time) transform array never has to be stored.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Optional

import numpy as np

from . import spectral
from .errors import ImaginaryLeak, NotConverged
from .numerics import DEFAULT_QUAD, QuadSpec
from .propagator import PropagatorTable
from .spectral import BathSpec, SpectralDensity

__all__ = [
    "FluctuationTable",
    "compute_transform",
    "v_two_time",
    "v_equal_time",
    "v_steady",
]

#: Upper edge of the infrared quadrature panel, in units of omega0.
_IR_EDGE = 0.2


def _filon_weights(theta: np.ndarray):
    """Endpoint weights for the phase-weighted linear panel integral

        int_0^1 e^{i theta y} [(1 - y) a + y b] dy = alpha a + beta b.

    A short Taylor series takes over below |theta| ~ 1e-4 where the closed
    form loses digits to cancellation.
    """
    theta = np.asarray(theta, dtype=float)
    itheta = 1j * theta
    with np.errstate(divide="ignore", invalid="ignore"):
        e = np.exp(itheta)
        e0 = (e - 1.0) / itheta
        e1 = (e - e0) / itheta
    th2 = theta * theta
    e0_series = 1.0 + itheta / 2.0 - th2 / 6.0 - 1j * theta * th2 / 24.0
    e1_series = 0.5 + itheta / 3.0 - th2 / 8.0 - 1j * theta * th2 / 30.0
    small = np.abs(theta) < 1e-4
    e0 = np.where(small, e0_series, e0)
    e1 = np.where(small, e1_series, e1)
    return e0 - e1, e1


def _frequency_grid(
    sd: SpectralDensity,
    t_max: float,
    spec: QuadSpec,
    spacing: Optional[float] = None,
):
    """Nodes and weights for int_0^cutoff with phases up to e^{i w t_max}.

    Three zones: an infrared panel integrated by the midpoint rule in
    x = w**p (p = min(s, 1)), which absorbs the integrable w**(s-1)
    behaviour of J(w) n(w) at the origin; a fine Simpson zone with spacing
    pi / (8 t_max) out to 12 omega_c, where the integrand still matters;
    and a coarse Simpson tail whose contribution is suppressed by
    e^{-w/omega_c} < e^{-12}.  Simpson keeps the phase-curvature error at
    O((spacing * t_max)**4) with no O(h^2) endpoint terms.
    """
    h = spacing if spacing is not None else math.pi / (8.0 * max(t_max, 1.0))
    ir_edge = _IR_EDGE * sd.omega0
    cutoff = spec.tail_cutoff_multiplier * sd.omega_c
    fine_edge = min(12.0 * sd.omega_c, cutoff)

    p = min(sd.s, 1.0)
    n_ir = max(64, int(math.ceil(1.5 * ir_edge / h)))
    x_edges = np.linspace(0.0, ir_edge**p, n_ir + 1)
    x_mid = 0.5 * (x_edges[1:] + x_edges[:-1])
    nodes = [x_mid ** (1.0 / p)]
    weights = [np.diff(x_edges) * x_mid ** (1.0 / p - 1.0) / p]

    for lo, hi, zone_spacing in (
        (ir_edge, fine_edge, h),
        (fine_edge, cutoff, 0.1 * sd.omega_c),
    ):
        if hi <= lo:
            continue
        m = max(2, int(math.ceil((hi - lo) / zone_spacing)))
        m += m % 2
        zone = np.linspace(lo, hi, m + 1)
        hz = (hi - lo) / m
        wz = np.full(m + 1, 2.0 * hz / 3.0)
        wz[1::2] = 4.0 * hz / 3.0
        wz[0] = wz[-1] = hz / 3.0
        nodes.append(zone)
        weights.append(wz)
    return np.concatenate(nodes), np.concatenate(weights)


class FluctuationTable:
    """Frequency-grid evaluator of the noise correlation v(t, s).

    Construction precomputes the quadrature grid and the per-node factor
    J(w) n(w) / 2pi; the propagator transform F is streamed on demand, so
    memory stays at one time chunk of the (n_omega x n_time) array.

    ``time_stride`` subsamples the propagator grid for the transform;
    the transform error grows only with the stride-level resolution of u
    (quadratic, tiny for any sane stride), so long horizons can trade a
    little of it for a proportional cut in scan cost.  All time arguments
    must lie on the (possibly strided) table grid, exposed via ``dt``,
    ``n_steps``, ``times`` and ``index_of``.
    """

    def __init__(
        self,
        sd: SpectralDensity,
        bath: BathSpec,
        ptable: PropagatorTable,
        spec: QuadSpec = DEFAULT_QUAD,
        omega_spacing: Optional[float] = None,
        time_stride: int = 1,
    ):
        if ptable.sd is not None and ptable.sd != sd:
            raise ValueError("propagator table was built for a different spectrum")
        if time_stride < 1 or ptable.grid.n_steps % time_stride != 0:
            raise ValueError("time_stride must divide the grid step count")
        self.sd = sd
        self.bath = bath
        self.ptable = ptable
        self.spec = spec
        self.time_stride = time_stride
        grid = ptable.grid
        self.dt = grid.dt * time_stride
        self.n_steps = grid.n_steps // time_stride
        self.u = ptable.u[::time_stride]
        self.omega, self._wq = _frequency_grid(sd, grid.t_max, spec, omega_spacing)
        jn = spectral.j_omega(sd, self.omega) * spectral.bose_occupation(
            bath, self.omega
        )
        self._coeff = self._wq * jn / (2.0 * math.pi)
        self._alpha, self._beta = _filon_weights(self.omega * self.dt)
        self._chunk = max(16, (1 << 23) // self.omega.size)
        self._diag: Optional[np.ndarray] = None

    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)

    def index_of(self, t: float) -> int:
        """Grid index of a time that must lie (close to) on the table grid."""
        k = int(round(t / self.dt))
        if k < 0 or k > self.n_steps or abs(k * self.dt - t) > 1e-9 * max(1.0, t):
            raise ValueError(f"t = {t:g} is not on the table grid")
        return k

    def _scan(self, n_stop: int, visit: Callable[[int, np.ndarray], None]) -> None:
        """Stream the transform rows F(t_k, .), k = 0..n_stop.

        ``visit(k0, block)`` receives consecutive rows k0..k0+len(block)-1.
        """
        dt = self.dt
        u = self.u
        step = np.exp(1j * self.omega * dt)
        carry = np.zeros(self.omega.size, dtype=complex)
        visit(0, carry[None, :])
        for k0 in range(0, n_stop, self._chunk):
            k1 = min(k0 + self._chunk, n_stop)
            m = k1 - k0
            # e^{i w t_k} rows by recurrence; the chunk's first row is a
            # fresh exp, so rounding drift stays below chunk_size * eps
            phase = np.empty((m, self.omega.size), dtype=complex)
            phase[0] = np.exp(1j * self.omega * (dt * k0))
            for j in range(1, m):
                np.multiply(phase[j - 1], step, out=phase[j])
            ks = np.arange(k0, k1)
            inc = phase
            inc *= dt * (
                u[ks, None] * self._alpha[None, :]
                + u[ks + 1, None] * self._beta[None, :]
            )
            block = np.cumsum(inc, axis=0, out=inc)
            block += carry
            visit(k0 + 1, block)
            carry = block[-1].copy()

    def _rows(self, indices) -> Dict[int, np.ndarray]:
        wanted: List[int] = sorted(set(int(k) for k in indices))
        out: Dict[int, np.ndarray] = {}

        def visit(k0: int, block: np.ndarray) -> None:
            for k in wanted:
                j = k - k0
                if 0 <= j < block.shape[0]:
                    out[k] = block[j].copy()

        self._scan(wanted[-1], visit)
        return out

    def transform(self, t: float) -> np.ndarray:
        """F(t, .) on the frequency grid."""
        k = self.index_of(t)
        return self._rows([k])[k]

    def two_time(self, t: float, s: float) -> complex:
        """v(t, s) for two grid times."""
        kt, ks = self.index_of(t), self.index_of(s)
        rows = self._rows([kt, ks])
        phase = np.exp(-1j * self.omega * (t - s))
        return complex(np.sum(self._coeff * phase * rows[kt] * np.conj(rows[ks])))

    def two_time_row(self, t: float) -> np.ndarray:
        """v(t, s_k) for one grid time t against every grid time s_k."""
        n = self.n_steps
        kt = self.index_of(t)
        if kt == 0:
            # F(0, .) = 0, so the whole row vanishes identically
            return np.zeros(n + 1, dtype=complex)
        base = self._coeff * self._rows([kt])[kt]
        dt = self.dt
        step = np.exp(1j * self.omega * dt)
        out = np.empty(n + 1, dtype=complex)

        def visit(k0: int, block: np.ndarray) -> None:
            # p holds e^{i w (s_k - t)}, refreshed per chunk to cap
            # rounding drift from the multiplicative update
            p = np.exp(1j * self.omega * (dt * k0 - t))
            for j in range(block.shape[0]):
                out[k0 + j] = (np.conj(block[j]) * p) @ base
                p *= step

        self._scan(n, visit)
        return out

    def diagonal(self) -> np.ndarray:
        """v(t_k, t_k) for every grid time; cached after the first call."""
        if self._diag is None:
            n = self.n_steps
            out = np.empty(n + 1)

            def visit(k0: int, block: np.ndarray) -> None:
                mag2 = block.real**2 + block.imag**2
                out[k0 : k0 + block.shape[0]] = mag2 @ self._coeff

            self._scan(n, visit)
            self._diag = out
        return self._diag

    def equal_time(self, t: float) -> float:
        """v(t, t), which is real by construction; a non-negligible
        imaginary part signals a broken frequency grid."""
        v = self.two_time(t, t)
        if abs(v.imag) > 1e-10 * (1.0 + abs(v.real)):
            raise ImaginaryLeak(
                f"v({t:g}, {t:g}) has imaginary part {v.imag:.2e}"
            )
        return v.real

    def steady(
        self, window_fraction: float = 0.25, drift_tol: float = 0.01
    ) -> float:
        """Long-time limit of v(t, t): the mean over the trailing window of
        the grid.

        In the localized regime v(t, t) keeps a slowly decaying beat between
        the bound mode and the band edge, so pointwise flatness is the wrong
        test; instead the means of the two halves of the window (each spanning
        several beat periods) are compared, and NotConverged is raised when
        they differ by more than ``drift_tol`` relatively."""
        diag = self.diagonal()
        m = max(4, int(window_fraction * diag.size))
        tail = diag[-m:]
        mean = float(np.mean(tail))
        if mean == 0.0:
            return 0.0
        half = m // 2
        drift = abs(float(np.mean(tail[:half])) - float(np.mean(tail[half:]))) / abs(
            mean
        )
        if drift > drift_tol:
            raise NotConverged(
                f"trailing-window means of v(t, t) differ by {drift:.1%}; "
                "extend the time grid"
            )
        return mean


def compute_transform(
    sd: SpectralDensity,
    bath: BathSpec,
    ptable: PropagatorTable,
    t: float,
    spec: QuadSpec = DEFAULT_QUAD,
) -> np.ndarray:
    """Propagator transform F(t, .) on the table's frequency grid."""
    return FluctuationTable(sd, bath, ptable, spec).transform(t)


def v_two_time(
    sd: SpectralDensity,
    bath: BathSpec,
    ptable: PropagatorTable,
    t: float,
    s: float,
    spec: QuadSpec = DEFAULT_QUAD,
) -> complex:
    """Noise correlation v(t, s) for two grid times."""
    return FluctuationTable(sd, bath, ptable, spec).two_time(t, s)


def v_equal_time(
    sd: SpectralDensity,
    bath: BathSpec,
    ptable: PropagatorTable,
    t: float,
    spec: QuadSpec = DEFAULT_QUAD,
) -> float:
    """Noise population v(t, t)."""
    return FluctuationTable(sd, bath, ptable, spec).equal_time(t)


def v_steady(
    sd: SpectralDensity,
    bath: BathSpec,
    ptable: PropagatorTable,
    spec: QuadSpec = DEFAULT_QUAD,
) -> float:
    """Long-time limit of the noise population."""
    return FluctuationTable(sd, bath, ptable, spec).steady()
