import csv
import io
import json
from contextlib import contextmanager
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Optional

import typer
from pydantic import BaseModel, Field

from ... import Engine
from ...exceptions import InvalidArgument, OutOfDomain
from ...utils import parse_rational
from ..theme import theme_manager


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class ExitCode(int, Enum):
    OK = 0
    VIOLATION = 1
    USAGE = 2
    UNBOUNDED = 3


class CommandConfig(BaseModel):
    """全局选项"""
    output: OutputFormat = Field(default=OutputFormat.TEXT, description="输出格式")
    seed: int = Field(default=0, description="随机扫描的种子")
    theme: str = Field(default="default", description="配色主题")
    verbose: bool = Field(default=False, description="输出调试日志")


class CliContext(BaseModel):
    model_config = {"arbitrary_types_allowed": True}

    config: CommandConfig = Field(default_factory=CommandConfig)
    engine: Engine = Field(default_factory=Engine)


context: CliContext = CliContext()


def rational_option(value: Optional[str], name: str) -> Optional[Fraction]:
    """把 "m/q" 形式的参数解析为最简分数，失败时按用法错误退出"""
    if value is None:
        return None
    try:
        return parse_rational(value)
    except InvalidArgument as e:
        raise typer.BadParameter(str(e), param_hint=name)


@contextmanager
def usage_errors(hint: Optional[str] = None):
    """把核心模块的参数错误转换成 typer 的用法错误（退出码 2）"""
    try:
        yield
    except (InvalidArgument, OutOfDomain) as e:
        raise typer.BadParameter(str(e), param_hint=hint)


def jsonable(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json", by_alias=True)
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    return value


def emit_json(payload: Any) -> None:
    typer.echo(json.dumps(jsonable(payload), ensure_ascii=False, indent=2))


def emit_csv(header: list[str], rows: Iterable[Iterable[Any]]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([str(v) if isinstance(v, Fraction) else v for v in row])
    typer.echo(buffer.getvalue(), nl=False)


def console():
    return theme_manager.console


def logger():
    return theme_manager.logger
