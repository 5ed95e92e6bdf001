"""Command-line verification harness.

Subcommands: dims, basis, check (counterexample | conformal | intertwine |
stokes | stein-weiss | almansi) and suite.  Reports are machine readable
(--format json) or line oriented (--format text); environment variables
prefixed CLIFFVERIFY_ override any option (for example
CLIFFVERIFY_SUITE_SEED=7).  The process exits nonzero iff any check fails.
"""

from __future__ import annotations

import json
import sys

import click

from . import checks, spaces
from .checks import RunConfig, SCHEMA_VERSION


def _emit(payload: dict, reports, fmt: str, out: str | None):
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = []
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.check_id} [{r.theorem}] "
                         f"wall_time={r.wall_time_s}s")
        lines.append("RESULT " + ("PASS" if payload["pass"] else "FAIL"))
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(reports, fmt: str, out: str | None):
    payload = {
        "schema_version": SCHEMA_VERSION,
        "checks": [r.to_json() for r in reports],
        "pass": all(r.passed for r in reports),
    }
    _emit(payload, reports, fmt, out)
    if not payload["pass"]:
        raise SystemExit(1)


_common = [
    click.option("--seed", type=int, default=1, show_default=True,
                 help="PRNG seed; fixtures are fully determined by it."),
    click.option("--trials", type=int, default=3, show_default=True),
    click.option("--format", "fmt", type=click.Choice(["json", "text"]),
                 default="json", show_default=True),
    click.option("--out", type=click.Path(dir_okay=False), default=None,
                 help="Write the report here instead of stdout."),
]


def common_options(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
def cli():
    """Exact verification engine for Rarita-Schwinger type operators."""


@cli.command()
@click.option("--m", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="json", show_default=True)
def dims(m, k, fmt):
    """Report ranks of H_k and M_k and the Almansi-Fischer rank identity."""
    h = spaces.harmonic_basis(m, k).scalar_rank
    mk = spaces.monogenic_basis(m, k, "left").scalar_rank
    mk_r = spaces.monogenic_basis(m, k, "right").scalar_rank
    mkm1 = spaces.monogenic_basis(m, k - 1, "left").scalar_rank if k >= 1 else 0
    payload = {
        "m": m,
        "k": k,
        "harmonic_scalar_rank": h,
        "harmonic_clifford_rank": h * (1 << m),
        "monogenic_left_rank": mk,
        "monogenic_right_rank": mk_r,
        "almansi_rank_identity": mk + mkm1 == h * (1 << m) if k >= 1 else mk == h * (1 << m),
    }
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, val in payload.items():
            click.echo(f"{key}: {val}")


@cli.command()
@click.option("--m", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--kind", type=click.Choice(["harmonic", "left-monogenic",
                                           "right-monogenic"]),
              default="left-monogenic", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def basis(m, k, kind, out):
    """Emit an explicit polynomial space basis as JSON (stable ordering)."""
    if kind == "harmonic":
        b = spaces.harmonic_basis(m, k)
    else:
        b = spaces.monogenic_basis(m, k, kind.split("-")[0])
    text = json.dumps(b.to_json(), indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


@cli.group()
def check():
    """Run a single named verification."""


@check.command("counterexample")
@click.option("--m", type=int, default=3, show_default=True)
@common_options
def check_counterexample_cmd(m, seed, trials, fmt, out):
    _finish([checks.check_counterexample(m)], fmt, out)


@check.command("conformal")
@click.option("--m", type=int, default=3, show_default=True)
@click.option("--k", type=int, default=1, show_default=True)
@common_options
def check_conformal_cmd(m, k, seed, trials, fmt, out):
    _finish([checks.check_conformal(m, k, seed, trials)], fmt, out)


@check.command("intertwine")
@click.option("--map", "map_kind",
              type=click.Choice(list(checks.ELEMENTARY_KINDS)), required=True)
@click.option("--m", type=int, default=3, show_default=True)
@click.option("--k", type=int, default=1, show_default=True)
@common_options
def check_intertwine_cmd(map_kind, m, k, seed, trials, fmt, out):
    _finish([checks.check_intertwine(map_kind, m, k, seed, trials)], fmt, out)


@check.command("stokes")
@click.option("--theorem",
              type=click.Choice(list(checks.STOKES_THEOREMS)), required=True)
@click.option("--m", type=int, default=3, show_default=True)
@click.option("--k", type=int, default=1, show_default=True)
@common_options
def check_stokes_cmd(theorem, m, k, seed, trials, fmt, out):
    _finish([checks.check_stokes(theorem, m, k, seed, trials)], fmt, out)


@check.command("stein-weiss")
@click.option("--m", type=int, default=3, show_default=True)
@click.option("--k", type=int, default=1, show_default=True)
@common_options
def check_stein_weiss_cmd(m, k, seed, trials, fmt, out):
    _finish([checks.check_stein_weiss(m, k, seed, trials)], fmt, out)


@check.command("almansi")
@click.option("--m", type=int, default=3, show_default=True)
@click.option("--k", type=int, default=1, show_default=True)
@common_options
def check_almansi_cmd(m, k, seed, trials, fmt, out):
    _finish([checks.check_almansi(m, k)], fmt, out)


@cli.command()
@click.option("--m", "m_values", type=int, multiple=True, default=(3, 4),
              show_default=True, help="Repeatable: dimensions to cover.")
@click.option("--k", "k_values", type=int, multiple=True, default=(0, 1, 2),
              show_default=True, help="Repeatable: degrees to cover.")
@click.option("--workers", type=int, default=1, show_default=True)
@common_options
def suite(m_values, k_values, workers, seed, trials, fmt, out):
    """Run the full verification suite; exit status 0 iff everything passes."""
    config = RunConfig(
        m_values=tuple(m_values), k_values=tuple(sorted(k_values)),
        seed=seed, trials=trials, workers=workers, out=out, format=fmt)
    reports = checks.run_suite(config)
    payload = checks.suite_report_json(config, reports)
    _emit(payload, reports, fmt, out)
    if not payload["pass"]:
        raise SystemExit(1)


def main(argv=None):
    return cli(args=argv, standalone_mode=True,
               auto_envvar_prefix="CLIFFVERIFY")


if __name__ == "__main__":
    main()
