import os
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class StepEntry(BaseModel):
    """报告中的一步：一个阶段的分隔集（或 Claim）检查结果。"""
    stage: int
    case: Optional[Literal["i", "ii"]] = None
    n0: Optional[int] = None
    separator: Optional[List[int]] = None
    separator_labels: Optional[List[str]] = None
    strict: bool = False
    claims: Optional[Dict[str, bool]] = None
    error: Optional[str] = None


class Report(BaseModel):
    command: str
    ok: bool
    stages: Optional[int] = None
    injection: Optional[Dict[str, Any]] = None
    steps: List[StepEntry] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)
    counterexample: Optional[Any] = None


def build_step_entries(results: list) -> List[StepEntry]:
    """根据并行验证的结果构造报告条目。

    参数:
    - results: 元素为 `(stage, entry)` 的列表，函数内部按 stage 排序。

    返回:
    - 按阶段升序的 StepEntry 列表。
    """
    results.sort(key=lambda x: x[0])
    return [entry for _, entry in results]


def report_to_text(report: Report) -> str:
    lines = [f"{report.command}: {'ok' if report.ok else 'FAILED'}"]
    for step in report.steps:
        status = "strict" if step.strict else "not strict"
        case = f" case {step.case}" if step.case else ""
        n0 = f" n0={step.n0}" if step.n0 is not None else ""
        sep = f" separator {{{', '.join(step.separator_labels or map(str, step.separator or []))}}}" \
            if step.separator is not None else ""
        claims = f" claims {step.claims}" if step.claims else ""
        error = f" ERROR {step.error}" if step.error else ""
        lines.append(f"  stage {step.stage}:{case}{n0}{sep} {status}{claims}{error}")
    for key, value in report.details.items():
        lines.append(f"  {key}: {value}")
    if report.counterexample is not None:
        lines.append(f"  counterexample: {report.counterexample}")
    return "\n".join(lines) + "\n"


def render_report(report: Report, fmt: str = "json") -> str:
    if fmt == "text":
        return report_to_text(report)
    return report.model_dump_json(indent=2) + "\n"


def write_text(text: str, output_path: Optional[str]) -> Optional[str]:
    """写到 output_path；为 None 时返回文本由调用方打印。

    副作用:
    - 必要时创建 output_path 的上级目录。
    """
    if output_path is None:
        return text
    parent = os.path.dirname(output_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(output_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return None


def report_schema() -> Dict[str, Any]:
    return Report.model_json_schema()


def load_report(text: str) -> Report:
    """按 Report 模型校验 JSON 文本；不合法时抛出 pydantic.ValidationError。"""
    return Report.model_validate_json(text)
