import typer
from typing import Annotated, Optional
from rich.table import Table

from . import ExitCode, OutputFormat, console, context, emit_csv, emit_json, logger, rational_option, usage_errors
from ...core.dyadic import dyadic_orbit_values, dz, dz_double_identity_check, orbit
from ...core.numtheory import euler_sharpened_check, half_totient, multiplicative_order, mu_orbit
from ...core.takagi import closed_form
from ...exceptions import InternalInvariantError

orbit_app: typer.Typer = typer.Typer(help="二倍轨道与闭式")


def _fail_invariant(e: InternalInvariantError) -> None:
    logger().error(str(e))
    raise typer.Exit(code=ExitCode.VIOLATION)


@orbit_app.command("orbit")
def cmd_orbit(
    n: Annotated[Optional[int], typer.Option("--n", help="奇数 n ≥ 3")] = None,
    m: Annotated[Optional[int], typer.Option("--m", help="M_n 中的起点")] = None,
    lam: Annotated[Optional[str], typer.Option("--lambda", help="λ ∈ [0,1]，形如 m/q")] = None,
):
    """μ_n 轨道（--n --m）或 d_Z(2^k λ) 轨道（--lambda）"""
    if lam is None and (n is None or m is None):
        raise typer.BadParameter("需要 --lambda，或同时给出 --n 与 --m")
    if lam is not None and (n is not None or m is not None):
        raise typer.BadParameter("--lambda 不能与 --n/--m 同时使用")

    try:
        if lam is not None:
            value = rational_option(lam, "--lambda")
            with usage_errors("--lambda"):
                orb = orbit(value)
            payload = {
                "lambda": value,
                "j": orb.reduced.j if orb.reduced else 0,
                "n": orb.reduced.n if orb.reduced else 1,
                "preperiod": orb.preperiod,
                "cycle": orb.cycle,
                "period": orb.minimal_period,
                "ell": orb.half_totient,
                "cross_check": "ok",
            }
            if orb.reduced and orb.reduced.n >= 3:
                payload["order_of_2"] = multiplicative_order(2, orb.reduced.n)
        else:
            with usage_errors("--n/--m"):
                mo = mu_orbit(n, m)
                sign = euler_sharpened_check(n, 2)
            payload = {
                "n": n,
                "m": m,
                "states": mo.states,
                "period": mo.period,
                "ell": mo.half_totient,
                "euler": sign.value,
                "cross_check": "ok",
            }
    except InternalInvariantError as e:
        _fail_invariant(e)

    fmt = context.config.output
    if fmt == OutputFormat.JSON:
        emit_json(payload)
    elif fmt == OutputFormat.CSV:
        emit_csv(["key", "value"], [(k, " ".join(str(x) for x in v) if isinstance(v, list) else v) for k, v in payload.items()])
    else:
        table = Table(show_header=False, border_style="border")
        for key, value in payload.items():
            shown = "[" + ", ".join(str(x) for x in value) + "]" if isinstance(value, list) else str(value)
            table.add_row(f"[primary]{key}[/primary]", shown)
        console().print(table)


@orbit_app.command("dz")
def cmd_dz(
    x: Annotated[str, typer.Option("--x", help="有理数 x，形如 m/q")],
    count: Annotated[int, typer.Option("--count", min=0, help="输出 d_Z(2^k x) 的前 count 项")] = 8,
):
    """d_Z(x)、二倍恒等式检查与轨道前缀"""
    value = rational_option(x, "--x")
    frac = value - (value.numerator // value.denominator)
    payload = {
        "x": value,
        "dz": dz(value),
        "double_identity": dz_double_identity_check(value),
        "orbit": dyadic_orbit_values(frac, count) if count else [],
    }
    if context.config.output == OutputFormat.JSON:
        emit_json(payload)
    elif context.config.output == OutputFormat.CSV:
        emit_csv(["k", "dz"], list(enumerate(payload["orbit"])))
    else:
        con = console()
        con.print(f"d_Z({value}) = [accent]{payload['dz']}[/accent]")
        status = "[success]成立[/success]" if payload["double_identity"] else "[error]不成立[/error]"
        con.print(f"d_Z(2x) = d_Z(2·d_Z(x)) = min(2d, 1−2d): {status}")
        if payload["orbit"]:
            con.print("轨道: " + ", ".join(str(v) for v in payload["orbit"]))
    if not payload["double_identity"]:
        raise typer.Exit(code=ExitCode.VIOLATION)


@orbit_app.command("closed-form")
def cmd_closed_form(
    lam: Annotated[str, typer.Option("--lambda", help="λ ∈ [0,1]，形如 m/q")],
    keep_zero: Annotated[bool, typer.Option("--keep-zero", help="保留 scale 为 0 的项")] = False,
):
    """Σ 2^{-k} ψ(d_Z(2^k λ)) 的有限闭式 (weight, scale)"""
    value = rational_option(lam, "--lambda")
    try:
        with usage_errors("--lambda"):
            form = closed_form(value, keep_zero=keep_zero)
    except InternalInvariantError as e:
        _fail_invariant(e)

    fmt = context.config.output
    if fmt == OutputFormat.JSON:
        emit_json({
            "lambda": value,
            "source": form.source.value,
            "j": form.preperiod_length,
            "ell": form.block_length,
            "terms": [[t.weight, t.scale] for t in form.terms],
        })
    elif fmt == OutputFormat.CSV:
        emit_csv(["weight", "scale"], [(t.weight, t.scale) for t in form.terms])
    else:
        if form.reduced is not None:
            r = form.reduced
            console().print(f"λ = {value}: m={r.m}, j={r.j}, n={r.n}, ℓ={half_totient(r.n)}")
        if not form.terms:
            console().print("[dim]空和（值为 0）[/dim]")
        body = " + ".join(f"{t.weight}·φ*({t.scale}·u)" for t in form.terms)
        if body:
            console().print(f"Σ = {body}")
