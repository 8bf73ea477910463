"""Corpus evaluation harness: load sentence pairs, simplify, score, report.

The corpus format is plain TSV (original TAB reference, one pair per
line). Model outputs are cached to a JSONL sidecar as they arrive, so
scoring can be re-run later without repeating any model calls.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import metrics
from .core import Audience, CorpusPair, MetricReport, ModelConfig
from .gateway import CompletionRequest, GatewayError
from .prompting import build_simplify_prompt

FAILURE_TOLERANCE = 0.02


class MalformedLine(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class EvalAbort(RuntimeError):
    """Raised when more than the tolerated share of pairs fail."""


@dataclass(frozen=True)
class CorpusFile:
    path: Path
    pairs: tuple[CorpusPair, ...]

    def __len__(self) -> int:
        return len(self.pairs)


def load_corpus(path: str | Path) -> CorpusFile:
    """Parse a TSV corpus; blank lines are skipped, bad lines are errors."""
    p = Path(path)
    pairs: list[CorpusPair] = []
    with open(p, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise MalformedLine(line_no, f"expected 2 tab-separated fields, got {len(fields)}")
            original, reference = fields
            if not original.strip() or not reference.strip():
                raise MalformedLine(line_no, "empty original or reference field")
            pairs.append(CorpusPair(original=original, reference=reference))
    return CorpusFile(path=p, pairs=tuple(pairs))


def sample_pairs(
    pairs: Sequence[CorpusPair], sample: Optional[int], seed: Optional[int]
) -> list[CorpusPair]:
    """Deterministic corpus subsample; corpus order is preserved."""
    if sample is None or sample == len(pairs):
        return list(pairs)
    if sample > len(pairs):
        raise ValueError(f"sample {sample} exceeds corpus size {len(pairs)}")
    if sample < 1:
        raise ValueError("sample must be >= 1")
    rng = random.Random(seed)
    indices = sorted(rng.sample(range(len(pairs)), sample))
    return [pairs[i] for i in indices]


def _load_output_cache(path: Path) -> dict[tuple[str, int], dict]:
    cache: dict[tuple[str, int], dict] = {}
    if not path.exists():
        return cache
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            cache[(entry["audience"], entry["index"])] = entry
    return cache


def run_evaluation(
    corpus: CorpusFile,
    audiences: Sequence[Audience],
    gateway,
    model: ModelConfig,
    sample: Optional[int] = None,
    seed: Optional[int] = None,
    outputs_path: Optional[str | Path] = None,
) -> list[MetricReport]:
    """Simplify every sampled pair per audience and aggregate the scores.

    Per-pair failures (model errors, unscoreable outputs) are excluded
    from the means when they stay within FAILURE_TOLERANCE; beyond that
    the run aborts rather than silently biasing the aggregate.
    """
    if not corpus.pairs:
        raise ValueError("corpus is empty")
    if not audiences:
        raise ValueError("at least one audience is required")
    selected = sample_pairs(corpus.pairs, sample, seed)

    cache: dict[tuple[str, int], dict] = {}
    cache_fh = None
    if outputs_path is not None:
        outputs_path = Path(outputs_path)
        cache = _load_output_cache(outputs_path)
        if not cache:
            outputs_path.parent.mkdir(parents=True, exist_ok=True)
            cache_fh = open(outputs_path, "w", encoding="utf-8")

    try:
        reports: list[MetricReport] = []
        for audience in audiences:
            scored_pairs: list[CorpusPair] = []
            outputs: list[str] = []
            failures: list[tuple[int, str]] = []
            for index, pair in enumerate(selected):
                entry = cache.get((audience.label, index))
                if entry is not None:
                    if entry.get("original") != pair.original:
                        raise ValueError(
                            "output cache does not match the sampled corpus "
                            f"(audience {audience.label}, index {index})"
                        )
                    error = entry.get("error")
                    output = entry.get("output", "")
                else:
                    output, error = _complete_one(gateway, model, pair, audience)
                    if cache_fh is not None:
                        record = {
                            "audience": audience.label,
                            "index": index,
                            "original": pair.original,
                            "reference": pair.reference,
                        }
                        if error is None:
                            record["output"] = output
                        else:
                            record["error"] = error
                        cache_fh.write(json.dumps(record, ensure_ascii=False) + "\n")
                if error is not None:
                    failures.append((index, error))
                    continue
                if not _scoreable(pair, output):
                    failures.append((index, "output not scoreable"))
                    continue
                scored_pairs.append(pair)
                outputs.append(output)

            if len(failures) > FAILURE_TOLERANCE * len(selected):
                raise EvalAbort(
                    f"{len(failures)}/{len(selected)} pairs failed for "
                    f"{audience.label}; exceeds the {FAILURE_TOLERANCE:.0%} tolerance"
                )
            reports.append(
                metrics.evaluate_corpus(scored_pairs, outputs, audience, model.model_name)
            )
        return reports
    finally:
        if cache_fh is not None:
            cache_fh.close()


def _complete_one(gateway, model, pair, audience) -> tuple[str, Optional[str]]:
    try:
        bundle = build_simplify_prompt(pair.original, audience)
        response = gateway.complete(CompletionRequest(bundle=bundle, model=model))
        return response.text, None
    except GatewayError as exc:
        return "", f"{type(exc).__name__}: {exc}"


def _scoreable(pair: CorpusPair, output: str) -> bool:
    if not output.strip():
        return False
    try:
        metrics.flesch_reading_ease(output)
    except metrics.NoWords:
        return False
    return True


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

REPORT_FORMATS = ("tsv", "markdown", "json")

_COLUMNS = ("User Group", "Model", "BLEU", "SARI", "FK Ease", "FK Grade")


def _formatted_row(report: MetricReport) -> tuple[str, ...]:
    return (
        report.audience.display_name,
        report.model_name,
        f"{report.bleu:.3f}",
        f"{report.sari:.2f}",
        f"{report.fk_ease:.2f}",
        f"{report.fk_grade:.2f}",
    )


def render_report(reports: Sequence[MetricReport], format: str = "markdown") -> str:
    """Render reports as a TSV table, a markdown table, or a JSON array."""
    if not reports:
        raise ValueError("nothing to render")
    if format == "json":
        return json.dumps([r.to_json_dict() for r in reports], indent=2, ensure_ascii=False)
    if format == "tsv":
        lines = ["\t".join(_COLUMNS)]
        lines += ["\t".join(_formatted_row(r)) for r in reports]
        return "\n".join(lines) + "\n"
    if format == "markdown":
        header = "| " + " | ".join(_COLUMNS) + " |"
        divider = "|" + "|".join(["---"] * len(_COLUMNS)) + "|"
        lines = [header, divider]
        lines += ["| " + " | ".join(_formatted_row(r)) + " |" for r in reports]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format: {format!r}")
