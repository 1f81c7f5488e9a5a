import random
import typer
from typing import Annotated, List, Optional
from rich.table import Table

from . import ExitCode, OutputFormat, console, context, emit_csv, emit_json, logger, rational_option, usage_errors
from ...core.checker import reduced_fractions
from ...core.dyadic import orbit
from ...core.errfun import parse_error_function
from ...core.takagi import closed_form, eval_closed, orbit_series
from ...exceptions import InternalInvariantError
from ...utils import format_real, parse_rational, split_args

bound_app: typer.Typer = typer.Typer(help="Φ(λ, u) 上界与恒等式检查")

RANDOM_DENOMINATOR_MAX = 10_000


def _factor_pairs(values: Optional[List[str]]) -> list[tuple]:
    pairs = []
    for text in values or []:
        parts = split_args(text)
        if len(parts) != 2:
            raise typer.BadParameter(f"分解应写成 λ',μ'，得到 {text!r}", param_hint="--factor")
        pairs.append(tuple(rational_option(p, "--factor") for p in parts))
    return pairs


@bound_app.command("bound")
def cmd_bound(
    lam: Annotated[str, typer.Option("--lambda", help="λ ∈ [0,1]，形如 m/q")],
    u: Annotated[str, typer.Option("--u", help="位移 u = x − y，形如 m/q")],
    phi: Annotated[str, typer.Option("--phi", help="误差函数：pow:c,p / quad:c / zero / table:path.csv")],
    factor: Annotated[Optional[List[str]], typer.Option("--factor", help="额外的分解 λ',μ'（λ'·μ' = λ），可重复")] = None,
):
    """汇总 (λ, u, φ) 的全部上界估计"""
    lam_value = rational_option(lam, "--lambda")
    u_value = rational_option(u, "--u")
    with usage_errors("--phi"):
        phi_model = parse_error_function(phi)
    pairs = _factor_pairs(factor)

    with usage_errors("--lambda"):
        report = context.engine.bounds.build_report(lam_value, u_value, phi_model, factors=pairs)

    fmt = context.config.output
    if fmt == OutputFormat.JSON:
        emit_json(report)
    elif fmt == OutputFormat.CSV:
        emit_csv(
            ["rule", "value", "certified", "best", "detail"],
            [
                (e.rule.value, format_real(e.upper_estimate), e.certified, i == report.best, e.detail)
                for i, e in enumerate(report.estimates)
            ],
        )
    else:
        table = Table(title=f"λ = {report.lam}, u = {report.u}, φ = {report.phi}", border_style="border")
        table.add_column("规则")
        table.add_column("上界", justify="right")
        table.add_column("认证")
        table.add_column("说明", style="dim")
        for i, e in enumerate(report.estimates):
            style = "best" if i == report.best else None
            table.add_row(
                e.rule.value,
                str(e.upper_estimate),
                "[success]✓[/success]" if e.certified else "[warning]✗[/warning]",
                e.detail,
                style=style,
            )
        console().print(table)
        if report.unbounded:
            console().print("[error]φ* 无下界，Φ(λ, u) 没有有限上界[/error]")

    if report.unbounded:
        raise typer.Exit(code=ExitCode.UNBOUNDED)


def _psi_identity(t):
    return t


def _psi_square(t):
    return t * t


def _random_sweep(count: int, seed: int) -> list[str]:
    """随机有理 λ 上比较闭式与最小周期求和，返回失败项"""
    rng = random.Random(seed)
    failures = []
    for _ in range(count):
        q = rng.randint(1, RANDOM_DENOMINATOR_MAX)
        lam = parse_rational(f"{rng.randint(0, q)}/{q}")
        orb = orbit(lam)
        form = closed_form(lam)
        for psi in (_psi_identity, _psi_square):
            closed = eval_closed(form, psi)
            oracle = orbit_series(orb, psi)
            if closed != oracle:
                failures.append(f"λ={lam} ψ={psi.__name__}: 闭式 {closed} ≠ 周期求和 {oracle}")
    return failures


@bound_app.command("identity")
def cmd_identity(
    denominator_max: Annotated[int, typer.Option("--denominator-max", help="λ 的分母上界（≥ 2）")] = 200,
    random_count: Annotated[int, typer.Option("--random", min=0, help="额外的随机闭式/周期求和比对次数")] = 0,
):
    """精确检查 Σ weight·scale² = λ(1−λ) 对 (0, 1) 内全部最简 λ 成立"""
    if denominator_max < 2:
        raise typer.BadParameter(f"需要 ≥ 2，得到 {denominator_max}", param_hint="--denominator-max")

    failures = []
    # λ ∈ {0, 1} 的闭式为空和，不计入
    fractions = [lam for lam in reduced_fractions(denominator_max) if 0 < lam < 1]
    for lam in fractions:
        try:
            form = closed_form(lam)
        except InternalInvariantError as e:
            failures.append(str(e))
            continue
        total = sum(t.weight * t.scale * t.scale for t in form.terms)
        if total != lam * (1 - lam):
            failures.append(f"λ={lam}: Σ w·s² = {total} ≠ {lam * (1 - lam)}")
        else:
            logger().debug("λ=%s: Σ w·s² = %s", lam, total)

    if random_count:
        try:
            failures.extend(_random_sweep(random_count, context.config.seed))
        except InternalInvariantError as e:
            failures.append(str(e))

    summary = {
        "denominator_max": denominator_max,
        "checked": len(fractions),
        "random": random_count,
        "seed": context.config.seed,
        "failures": failures,
        "passed": not failures,
    }
    fmt = context.config.output
    if fmt == OutputFormat.JSON:
        emit_json(summary)
    elif fmt == OutputFormat.CSV:
        emit_csv(["failure"], [(f,) for f in failures])
    elif failures:
        for f in failures:
            console().print(f"[error]{f}[/error]")
        console().print(f"[error]{len(failures)} 项失败[/error]")
    else:
        message = f"all {len(fractions)} reduced fractions in (0, 1) pass"
        if random_count:
            message += f"; {random_count} random closed forms match (seed {context.config.seed})"
        console().print(f"[success]{message}[/success]")

    if failures:
        raise typer.Exit(code=ExitCode.VIOLATION)
