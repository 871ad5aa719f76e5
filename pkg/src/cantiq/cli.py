"""Command-line client.

Each subcommand reads a flat key=value scenario file, sends it to the
simulation service and writes the returned rows as CSV. By default the
service runs in-process (no server needed); ``--server`` points the same
commands at a remote instance.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

import asyncio
import os
import sys

import click
import httpx

from .errors import ConfigError
from .scenarios import load_scenario
from .service import create_app

EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _request(server, path, payload):
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            return client.post(path, json=payload)

    async def in_process():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, timeout=None,
                                     base_url="http://cantiq.local") as client:
            return await client.post(path, json=payload)

    return asyncio.run(in_process())


def _post(server, path, payload):
    resp = _request(server, path, payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        detail = resp.json().get("detail")
    except ValueError:
        detail = resp.text
    if isinstance(detail, dict) and detail.get("kind") == "numerical":
        click.echo(f"numerical failure: {detail.get('error')}: "
                   f"{detail.get('message')}", err=True)
        sys.exit(EXIT_NUMERICAL)
    click.echo(f"request rejected: {detail}", err=True)
    sys.exit(EXIT_CONFIG)


def _load(config_path, **overrides):
    try:
        fields, out_name = load_scenario(config_path)
    except ConfigError as err:
        click.echo(f"config error: {err}", err=True)
        sys.exit(EXIT_CONFIG)
    for key, value in overrides.items():
        if value is not None:
            fields[key] = value
    return fields, out_name


def _write_csv(out_dir, filename, header, rows):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, filename)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _scenario_options(fn):
    fn = click.option(
        "--server", default=None, metavar="URL",
        help="Remote service URL; default computes in-process.")(fn)
    fn = click.option(
        "--out", "out_dir", envvar="CANTIQ_OUT", default=".",
        show_default=True, metavar="DIR",
        help="Output directory (env CANTIQ_OUT).")(fn)
    fn = click.option(
        "--config", "config_path", required=True,
        type=click.Path(exists=False), metavar="FILE",
        help="Scenario file (flat key = value).")(fn)
    return fn


@click.group()
def main():
    """Cantilever / charge-qubit simulator: figure data and verification."""


@main.command("wigner")
@_scenario_options
@click.option("--dim", type=int, default=None,
              help="Fock-space cutoff override.")
@click.option("--numeric", is_flag=True, default=False,
              help="Add a brute-force Wigner column.")
@click.option("--sorted", "sort_times", is_flag=True, default=False,
              help="Emit times in ascending order.")
def wigner_cmd(config_path, out_dir, server, dim, numeric, sort_times):
    """Wigner function of the decohering cat, long format (x, y, W)."""
    fields, out_name = _load(config_path, dim=dim,
                             numeric=True if numeric else None,
                             sort_times=True if sort_times else None)
    data = _post(server, "/wigner", fields)
    click.echo(_write_csv(out_dir, out_name or "wigner.csv",
                          data["header"], data["rows"]))


@main.command("cat-evolve")
@_scenario_options
def cat_evolve_cmd(config_path, out_dir, server):
    """Trajectory of the cat record: dyad labels, coherence weight."""
    fields, out_name = _load(config_path)
    data = _post(server, "/cat-evolve", fields)
    click.echo(_write_csv(out_dir, out_name or "cat-evolve.csv",
                          data["header"], data["rows"]))


@main.command("squeeze-unitary")
@_scenario_options
def squeeze_unitary_cmd(config_path, out_dir, server):
    """Position variance under the conditional unitary evolution."""
    fields, out_name = _load(config_path)
    data = _post(server, "/squeeze-unitary", fields)
    click.echo(_write_csv(out_dir, out_name or "squeeze-unitary.csv",
                          data["header"], data["rows"]))


@main.command("squeeze-dissipative")
@_scenario_options
@click.option("--tol", type=float, default=None,
              help="Moment-ODE tolerance override.")
def squeeze_dissipative_cmd(config_path, out_dir, server, tol):
    """Position variance with damping, one trace per temperature."""
    fields, out_name = _load(config_path, tol=tol)
    data = _post(server, "/squeeze-dissipative", fields)
    click.echo(_write_csv(out_dir, out_name or "squeeze-dissipative.csv",
                          data["header"], data["rows"]))


@main.command("steady-sweep")
@_scenario_options
def steady_sweep_cmd(config_path, out_dir, server):
    """Steady-state variance against temperature; prints T_c."""
    fields, out_name = _load(config_path)
    data = _post(server, "/steady-sweep", fields)
    path = _write_csv(out_dir, out_name or "steady-sweep.csv",
                      data["header"], data["rows"])
    click.echo(f"critical_temperature = {data['critical_temperature']!r}")
    click.echo(path)


@main.command("params")
@_scenario_options
def params_cmd(config_path, out_dir, server):
    """Derived coupling constants for a device description."""
    fields, out_name = _load(config_path)
    data = _post(server, "/params", fields)
    couplings = data["couplings"]
    for key, value in couplings.items():
        click.echo(f"{key} = {value!r}")
    if out_name:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, out_name)
        with open(path, "w", newline="") as fh:
            fh.write("parameter,value\n")
            for key, value in couplings.items():
                fh.write(f"{key},{value!r}\n")
        click.echo(path)


@main.command("verify")
@click.option("--server", default=None, metavar="URL",
              help="Remote service URL; default computes in-process.")
@click.option("--config", "config_path", default=None, metavar="FILE",
              help="Optional profile file (dim, tol).")
@click.option("--dim", type=int, default=None,
              help="Fock-space cutoff of the checks.")
@click.option("--tol", type=float, default=None,
              help="Integrator tolerance of the checks.")
def verify_cmd(server, config_path, dim, tol):
    """Run the full cross-check suite; nonzero exit on any failure."""
    fields = {}
    if config_path is not None:
        fields, _ = _load(config_path)
    if dim is not None:
        fields["dim"] = dim
    if tol is not None:
        fields["tol"] = tol
    data = _post(server, "/verify", fields)
    for check in data["checks"]:
        mark = "PASS" if check["passed"] else "FAIL"
        click.echo(f"[{mark}] {check['name']}: {check['value']:.3e} "
                   f"(threshold {check['threshold']:.0e}) - {check['detail']}")
    if not data["passed"]:
        sys.exit(EXIT_VERIFY_FAILED)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve_cmd(host, port):
    """Run the simulation service under uvicorn."""
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
