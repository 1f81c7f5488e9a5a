"""
CLI 的配色与输出通道

文本 / JSON / CSV 结果写 stdout，日志与诊断写 stderr，
两者各自持有一个按当前主题构建的 rich Console。
"""

import logging
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from rich.console import Console
from rich.logging import RichHandler
from rich.theme import Theme

LOGGER_NAME = "midconvex"


class Palette(BaseModel):
    """按结果语义划分的颜色"""

    label: str = Field(default="#00BCFF", description="表头与键名")
    exact: str = Field(default="#96f7e4", description="精确有理值、最优估计")
    passed: str = Field(default="#2D8C2A", description="恒等式成立 / 估计已认证")
    uncertified: str = Field(default="#F2A20C", description="有界搜索得到的未认证估计")
    violated: str = Field(default="#A60321", description="反例、失败项")
    muted: str = Field(default="#7d8590", description="说明文字")
    frame: str = Field(default="#30363d", description="表格边框")

    @field_validator("*", mode="before")
    @classmethod
    def normalize_color(cls, v: str) -> str:
        """接受 #RGB / #RRGGBB（可省略 #），或 rich 的 "default" """
        v = v.strip()
        if v == "default":
            return v
        if not v.startswith("#"):
            v = "#" + v
        if len(v) not in (4, 7) or any(ch not in "0123456789abcdefABCDEF" for ch in v[1:]):
            raise ValueError(f"无效的颜色: {v}")
        return v


class ThemeConfig(BaseModel):
    name: str = Field(default="default", description="主题名称")
    palette: Palette = Field(default_factory=Palette, description="配色")

    def to_rich_theme(self) -> Theme:
        """命令模块里用的标记名 → 颜色"""
        p = self.palette
        return Theme({
            "primary": p.label,
            "accent": p.exact,
            "success": p.passed,
            "warning": p.uncertified,
            "error": p.violated,
            "dim": p.muted,
            "border": p.frame,
            "best": f"bold {p.exact}",
            "table.header": f"bold {p.label}",
        })


BUILTIN_THEMES: dict[str, ThemeConfig] = {
    theme.name: theme
    for theme in (
        ThemeConfig(),
        ThemeConfig(name="nord", palette=Palette(
            label="#88c0d0", exact="#b48ead", passed="#a3be8c", uncertified="#ebcb8b",
            violated="#bf616a", muted="#4c566a", frame="#4c566a",
        )),
        # CI 日志里不着色
        ThemeConfig(name="plain", palette=Palette(
            label="default", exact="default", passed="default", uncertified="default",
            violated="default", muted="default", frame="default",
        )),
    )
}


class ThemeManager:
    """进程内唯一的主题、控制台与日志器"""

    _instance: Optional["ThemeManager"] = None

    def __new__(cls) -> "ThemeManager":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._theme = BUILTIN_THEMES["default"]
            cls._instance._console = None
            cls._instance._err_console = None
            cls._instance._logger = None
        return cls._instance

    @property
    def theme(self) -> ThemeConfig:
        return self._theme

    @property
    def console(self) -> Console:
        if self._console is None:
            self._build()
        return self._console

    @property
    def err_console(self) -> Console:
        if self._err_console is None:
            self._build()
        return self._err_console

    @property
    def logger(self) -> logging.Logger:
        if self._logger is None:
            self._build()
        return self._logger

    def set_theme(self, theme: "ThemeConfig | str") -> None:
        if isinstance(theme, str):
            if theme not in BUILTIN_THEMES:
                raise ValueError(f"未知主题: {theme}，可用: {', '.join(BUILTIN_THEMES)}")
            theme = BUILTIN_THEMES[theme]
        self._theme = theme
        self._build()

    def set_level(self, level: int) -> None:
        self.logger.setLevel(level)

    def _build(self) -> None:
        rich_theme = self._theme.to_rich_theme()
        self._console = Console(theme=rich_theme)
        self._err_console = Console(theme=rich_theme, stderr=True)

        # 库模块用 getLogger(__name__)，都挂在 midconvex 之下
        level = self._logger.level if self._logger is not None else logging.WARNING
        logger = logging.getLogger(LOGGER_NAME)
        logger.handlers.clear()
        logger.addHandler(RichHandler(
            console=self._err_console,
            show_path=False,
            rich_tracebacks=True,
            markup=False,
        ))
        logger.setLevel(level)
        logger.propagate = False
        self._logger = logger


theme_manager = ThemeManager()
