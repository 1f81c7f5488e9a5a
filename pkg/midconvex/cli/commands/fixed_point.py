import typer
from fractions import Fraction
from typing import Annotated
from rich.table import Table

import numpy as np

from . import OutputFormat, console, context, emit_csv, emit_json, logger, usage_errors
from ...core.errfun import eval_phi, parse_error_function
from ...core.takagi import fixed_point_solve, operator_defect
from ...data_types import PsiFunction

fixed_point_app: typer.Typer = typer.Typer(help="T_ψ 的不动点迭代")

PREVIEW_EXPONENT = 3


@fixed_point_app.command("fixed-point")
def cmd_fixed_point(
    psi: Annotated[str, typer.Option("--psi", help="ψ(t)，与 --phi 相同的写法：pow:c,p / quad:c / zero / table:path.csv")],
    grid_exp: Annotated[int, typer.Option("--grid-exp", help="网格 {i·2^{-N}} 的 N")] = 10,
    iters: Annotated[int, typer.Option("--iters", help="迭代次数")] = 40,
):
    """在二进网格上迭代 f ↦ 𝒯_ψ f，输出网格值与函数方程残差"""
    with usage_errors("--psi"):
        base = parse_error_function(psi)
    psi_fn = PsiFunction(evaluator=lambda t: eval_phi(base, t), description=base.spec, exact=False)

    with usage_errors("--grid-exp/--iters"):
        solution = fixed_point_solve(psi_fn, grid_exp, iters)

    pointwise = operator_defect(solution, psi_fn)
    residual = float(np.max(pointwise))
    sup_psi = max(abs(float(psi_fn(Fraction(i, 1 << grid_exp)))) for i in range((1 << (grid_exp - 1)) + 1))
    banach = 2.0 ** (1 - iters) * sup_psi
    logger().info("fixed point %s: N=%d I=%d residual=%.3e (≤ %.3e)", base.spec, grid_exp, iters, residual, banach)

    size = solution.size - 1
    labels = [Fraction(i, size) for i in range(solution.size)]
    fmt = context.config.output
    if fmt == OutputFormat.JSON:
        emit_json({
            "psi": base.spec,
            "grid_exponent": grid_exp,
            "iterations": iters,
            "residual": residual,
            "banach_bound": banach,
            "values": [[lam, float(v)] for lam, v in zip(labels, solution.values)],
        })
    elif fmt == OutputFormat.CSV:
        emit_csv(
            ["lambda", "value", "residual"],
            [(lam, repr(float(v)), repr(float(r))) for lam, v, r in zip(labels, solution.values, pointwise)],
        )
    else:
        step = max(1, size >> PREVIEW_EXPONENT)
        table = Table(title=f"T_ψ, ψ = {base.spec}, N = {grid_exp}, I = {iters}", border_style="border")
        table.add_column("λ")
        table.add_column("T_ψ(λ)", justify="right")
        for i in range(0, solution.size, step):
            table.add_row(str(labels[i]), f"{solution.values[i]:.12g}")
        console().print(table)
        console().print(f"残差 max|f − 𝒯_ψ f| = [accent]{residual:.3e}[/accent]，压缩估计 ≤ {banach:.3e}")
