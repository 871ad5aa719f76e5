"""Plot-ready data products behind the service endpoints.

Each function takes a validated request model and returns a header plus
long-format rows of plain floats, deterministic for a given request.
"""

import numpy as np

from .closedform import dissipative_cat, unitary_variance, wigner_analytic_grid
from .hilbert import wigner_grid
from .lindblad import (
    BathParams,
    MomentVector,
    critical_temperature,
    evolve_moments_trajectory,
    position_variance,
    steady_variance,
)
from .model import CouplingSet, DeviceParams, derive_couplings
from .verify import realize_auto


def _axis(lo, hi, step):
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def wigner_rows(req):
    """Long-format (gamma_t, x, y, w[, w_numeric]) rows of the cat Wigner
    function at each requested scaled time."""
    beta = complex(req.beta_re, req.beta_im)
    xs = _axis(req.x_min, req.x_max, req.step)
    ys = _axis(req.y_min, req.y_max, req.step)
    times = sorted(req.times) if req.sort_times else list(req.times)
    header = ["gamma_t", "x", "y", "w"]
    if req.numeric:
        header.append("w_numeric")
    rows = []
    for gt in times:
        cat = dissipative_cat(beta, req.phase, req.g_s, req.omega, req.gamma,
                              gt / req.gamma)
        w = wigner_analytic_grid(cat, xs, ys)
        w_num = None
        if req.numeric:
            rho, _ = realize_auto(cat, req.dim)
            w_num = wigner_grid(rho, xs, ys)
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                row = [gt, float(x), float(y), float(w[iy, ix])]
                if w_num is not None:
                    row.append(float(w_num[iy, ix]))
                rows.append(row)
    return header, rows


def cat_evolve_rows(req):
    """Trajectory of the symbolic cat record: dyad labels, drive label,
    decoherence exponent and cross-dyad weight against gamma * t."""
    beta = complex(req.beta_re, req.beta_im)
    if req.times is not None:
        times = list(req.times)
    else:
        times = list(_axis(0.0, req.t_max, req.t_step))
    header = ["gamma_t", "drive_re", "drive_im", "beta_plus_re",
              "beta_plus_im", "beta_minus_re", "beta_minus_im", "delta_r",
              "delta_i", "cross_weight"]
    rows = []
    for gt in times:
        cat = dissipative_cat(beta, req.phase, req.g_s, req.omega, req.gamma,
                              gt / req.gamma)
        rows.append([
            float(gt),
            cat.drive.real, cat.drive.imag,
            cat.beta_plus.real, cat.beta_plus.imag,
            cat.beta_minus.real, cat.beta_minus.imag,
            float(cat.delta_r), float(cat.delta_i), cat.cross_weight,
        ])
    return header, rows


def squeeze_unitary_rows(req):
    """(omega_t, variance) trace of the unitary squeezing formula."""
    cs = CouplingSet.from_couplings(quadratic=req.gprime)
    scaled = _axis(0.0, req.t_max, req.t_step)
    values = unitary_variance(req.k, cs, req.omega, scaled / req.omega)
    values = np.atleast_1d(values)
    rows = [[float(s), float(v)] for s, v in zip(scaled, values)]
    return ["omega_t", "variance"], rows


def squeeze_dissipative_rows(req):
    """(temperature, omega_t, variance, steady_variance) long-format rows
    from the moment ODEs, one trace per bath temperature."""
    cs = CouplingSet.from_couplings(quadratic=req.gprime)
    scaled = _axis(0.0, req.t_max, req.t_step)
    header = ["temperature", "omega_t", "variance", "steady_variance"]
    rows = []
    for temp in req.temperatures:
        bath = BathParams.for_mode(req.gamma, temp, req.omega)
        asymptote = steady_variance(req.k, cs, req.omega, bath)
        traj = evolve_moments_trajectory(
            MomentVector.vacuum(), req.k, cs, req.omega, bath,
            scaled / req.omega, tol=req.tol)
        for s, m in zip(scaled, traj):
            rows.append([float(temp), float(s), position_variance(m),
                         asymptote])
    return header, rows


def steady_sweep_rows(req):
    """(T_over_omega, variance) sweep plus the critical temperature."""
    cs = CouplingSet.from_couplings(quadratic=req.gprime)
    temps = _axis(req.temp_min, req.temp_max, req.temp_step)
    rows = []
    for temp in temps:
        bath = BathParams.for_mode(req.gamma, float(temp), req.omega)
        rows.append([float(temp) / req.omega,
                     steady_variance(req.k, cs, req.omega, bath)])
    t_c = critical_temperature(req.gamma, req.omega, req.gprime)
    return ["T_over_omega", "variance"], rows, float(t_c)


def coupling_report(req):
    """Derived coupling constants for a device description."""
    dev = DeviceParams(
        josephson_energy=req.josephson_energy,
        charging_energy=req.charging_energy,
        gate_charge=req.gate_charge,
        external_field=req.external_field,
        cantilever_freq=req.cantilever_freq,
        cantilever_mass=req.cantilever_mass,
        tip_moment=req.tip_moment,
        tip_distance=req.tip_distance,
        loop_area=req.loop_area,
        field_gradient=req.field_gradient,
        zero_point=req.zero_point,
    )
    cs = derive_couplings(dev)
    return {
        "tip_field": cs.tip_field,
        "field_gradient": cs.field_gradient,
        "zero_point": cs.zero_point,
        "flux_offset": cs.flux_offset,
        "flux_coupling": cs.flux_coupling,
        "qubit_freq": cs.qubit_freq,
        "linear_coupling": cs.linear_coupling,
        "quadratic_coupling": cs.quadratic_coupling,
        "josephson_energy": cs.josephson_energy,
    }
