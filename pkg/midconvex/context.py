from dataclasses import dataclass


@dataclass
class Context:
    rel_tol: float = 1e-12          # 浮点路径的相对容差
    abs_tol: float = 1e-15          # 浮点路径的绝对容差
    search_depth: int = 64          # BoundedSearch 的 m_max
    series_terms: int = 32          # 截断级数的项数
    keep_zero_terms: bool = False   # 闭式中是否保留 scale 为 0 的项
