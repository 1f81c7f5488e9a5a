import typer
from typing import Annotated
from rich.table import Table

from . import ExitCode, OutputFormat, console, context, emit_csv, emit_json, logger, usage_errors
from ...core.checker import parse_test_function, reduced_fractions
from ...core.errfun import parse_error_function
from ...exceptions import UnboundedRegularization
from ...utils import format_real, parse_interval

check_app: typer.Typer = typer.Typer(help="具体函数上的 φ-Jensen 凸性验证")


@check_app.command("check")
def cmd_check(
    f: Annotated[str, typer.Option("--f", help="测试函数：quad:a,b,c / negquad:a / poly:c0,c1,… / abs / table:path.csv")],
    phi: Annotated[str, typer.Option("--phi", help="误差函数：pow:c,p / quad:c / zero / table:path.csv")],
    domain: Annotated[str, typer.Option("--domain", help="定义域 lo,hi")] = "0,1",
    grid: Annotated[int, typer.Option("--grid", help="中点检查的网格点数")] = 50,
    lambda_den_max: Annotated[int, typer.Option("--lambda-den-max", help="λ 的分母上界")] = 12,
    pairs: Annotated[int, typer.Option("--pairs", help="λ 上界检查的网格点数")] = 12,
):
    """中点不等式、Φ(λ, u) 上界与 (lo, hi) 的缺口曲线"""
    with usage_errors("--domain"):
        lo, hi = parse_interval(domain)
    with usage_errors("--f"):
        test_fn = parse_test_function(f, lo, hi)
    with usage_errors("--phi"):
        phi_model = parse_error_function(phi)
    if lambda_den_max < 1:
        raise typer.BadParameter(f"需要 ≥ 1，得到 {lambda_den_max}", param_hint="--lambda-den-max")

    checker = context.engine.checker
    try:
        with usage_errors("--grid/--pairs"):
            midpoint = checker.verify_midconvex(test_fn, phi_model, grid)
            lambda_violations = []
            for lam in reduced_fractions(lambda_den_max):
                if lam in (0, 1):
                    continue
                lambda_violations.extend(checker.verify_lambda_bound(test_fn, phi_model, lam, pairs))
            profile = checker.gap_profile(test_fn, phi_model, lo, hi, lambda_den_max)
    except UnboundedRegularization as e:
        logger().error("%s", e)
        raise typer.Exit(code=ExitCode.UNBOUNDED)

    failed_rows = [row for row in profile if row.bound is not None and not row.holds]
    passed = not midpoint and not lambda_violations and not failed_rows
    logger().info(
        "%s / %s: %d midpoint, %d λ violations, %d profile failures",
        test_fn.spec, phi_model.spec, len(midpoint), len(lambda_violations), len(failed_rows),
    )

    fmt = context.config.output
    if fmt == OutputFormat.JSON:
        emit_json({
            "f": test_fn.spec,
            "phi": phi_model.spec,
            "domain": [lo, hi],
            "midpoint_violations": midpoint,
            "lambda_violations": lambda_violations,
            "profile": profile,
            "passed": passed,
        })
    elif fmt == OutputFormat.CSV:
        rows = []
        for cert in midpoint + lambda_violations:
            section = "midpoint" if cert.rule == "midpoint" else "lambda"
            rows.append((section, cert.lam, cert.lam.numerator, cert.lam.denominator, format_real(cert.x),
                         format_real(cert.y), format_real(cert.lhs), format_real(cert.rhs), cert.rule, False))
        for row in profile:
            bound = "" if row.bound is None else format_real(row.bound)
            rows.append(("profile", row.lam, row.lam.numerator, row.lam.denominator, lo, hi,
                         format_real(row.gap), bound, row.rule, row.holds))
        emit_csv(["section", "lambda", "num", "den", "x", "y", "gap", "bound", "rule", "holds"], rows)
    else:
        con = console()
        table = Table(title=f"{test_fn.spec} on [{lo}, {hi}], φ = {phi_model.spec}", border_style="border")
        table.add_column("λ")
        table.add_column("缺口", justify="right")
        table.add_column("上界", justify="right")
        table.add_column("规则", style="dim")
        for row in profile:
            mark = "" if row.holds else "error"
            table.add_row(str(row.lam), str(row.gap), "—" if row.bound is None else str(row.bound), row.rule, style=mark or None)
        con.print(table)
        for cert in (midpoint + lambda_violations)[:10]:
            con.print(f"[error]x={cert.x} y={cert.y} λ={cert.lam}: {cert.lhs} > {cert.rhs} ({cert.rule})[/error]")
        if passed:
            con.print("[success]网格上全部成立[/success]")
        else:
            con.print(f"[error]{len(midpoint)} 个中点反例，{len(lambda_violations)} 个 λ 反例[/error]")

    if not passed:
        raise typer.Exit(code=ExitCode.VIOLATION)
