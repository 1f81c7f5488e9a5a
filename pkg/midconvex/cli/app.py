import logging
from typing import Annotated, Optional

import typer

from .commands import CommandConfig, OutputFormat, context
from .commands.bound import bound_app
from .commands.check import check_app
from .commands.fixed_point import fixed_point_app
from .commands.orbit import orbit_app
from .theme import BUILTIN_THEMES, theme_manager

app: typer.Typer = typer.Typer(
    help="φ-Jensen 凸性的 Takagi 型误差估计：二倍轨道、闭式、上界与验证",
    no_args_is_help=True,
    add_completion=False,
)
app.add_typer(orbit_app)
app.add_typer(bound_app)
app.add_typer(fixed_point_app)
app.add_typer(check_app)


@app.callback()
def configure(
    output: Annotated[OutputFormat, typer.Option("--output", "-o", help="输出格式")] = OutputFormat.TEXT,
    seed: Annotated[int, typer.Option("--seed", help="随机扫描的种子")] = 0,
    theme: Annotated[Optional[str], typer.Option("--theme", help=f"配色主题：{', '.join(BUILTIN_THEMES)}")] = None,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="输出调试日志")] = False,
):
    """全局选项"""
    if theme is not None:
        if theme not in BUILTIN_THEMES:
            raise typer.BadParameter(f"未知主题 {theme}，可用: {', '.join(BUILTIN_THEMES)}", param_hint="--theme")
        theme_manager.set_theme(theme)
    context.config = CommandConfig(output=output, seed=seed, theme=theme_manager.theme.name, verbose=verbose)
    theme_manager.set_level(logging.DEBUG if verbose else logging.WARNING)
