"""Command-line interface: corpus evaluation and the HTTP service."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .core import Audience, audience_from_label
from .evalcli import REPORT_FORMATS, load_corpus, render_report, run_evaluation
from .gateway import HttpGateway, MockGateway, MOCK_MODES, model_config_from_env
from .metrics import corpus_bleu
from .analysis import tokenize


def _parse_audiences(raw: str) -> list[Audience]:
    if raw.strip().lower() == "all":
        return list(Audience)
    return [audience_from_label(part) for part in raw.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plainlang")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="score simplifications over a TSV corpus")
    ev.add_argument("--corpus", required=True, help="TSV file: original<TAB>reference")
    ev.add_argument(
        "--audience",
        default="all",
        help="comma-separated audience labels, or 'all' (default)",
    )
    ev.add_argument("--sample", type=int, default=None, help="evaluate only N sampled pairs")
    ev.add_argument("--seed", type=int, default=None, help="sampling seed")
    ev.add_argument(
        "--mock",
        choices=MOCK_MODES,
        default=None,
        help="use an offline mock backend instead of a live endpoint",
    )
    ev.add_argument("--transcript", default=None, help="transcript file for --mock scripted")
    ev.add_argument(
        "--outputs",
        default=None,
        help="JSONL sidecar for raw model outputs; reused for re-scoring if it exists",
    )
    ev.add_argument("--report", choices=REPORT_FORMATS, default="markdown")
    ev.add_argument("--out", default=None, help="write the report here instead of stdout")
    ev.add_argument("--figures", default=None, help="also render metric charts into this directory")
    ev.add_argument(
        "--corpus-bleu",
        action="store_true",
        help="additionally print aggregate-count corpus BLEU per audience (stderr)",
    )

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="0.0.0.0")
    sv.add_argument("--port", type=int, default=None, help="default: $PORT or 8080")
    return parser


def cmd_evaluate(args) -> int:
    corpus = load_corpus(args.corpus)
    audiences = _parse_audiences(args.audience)
    if args.mock:
        gateway = MockGateway(args.mock, transcript_path=args.transcript)
    else:
        gateway = HttpGateway()
    model = model_config_from_env()
    reports = run_evaluation(
        corpus,
        audiences,
        gateway,
        model,
        sample=args.sample,
        seed=args.seed,
        outputs_path=args.outputs,
    )
    rendered = render_report(reports, args.report)
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)

    if args.figures:
        from .figures import render_report_figures

        written = render_report_figures(reports, args.figures)
        print(f"wrote {len(written)} figures to {args.figures}", file=sys.stderr)

    if args.corpus_bleu:
        selected = _selected_pairs(corpus, args)
        for report in reports:
            value = _corpus_bleu_for(selected, gateway, model, report.audience)
            print(f"corpus_bleu\t{report.audience.label}\t{value:.6f}", file=sys.stderr)
    return 0


def _selected_pairs(corpus, args):
    from .evalcli import sample_pairs

    return sample_pairs(corpus.pairs, args.sample, args.seed)


def _corpus_bleu_for(pairs, gateway, model, audience) -> float:
    from .evalcli import _complete_one

    candidates = []
    references = []
    for pair in pairs:
        output, error = _complete_one(gateway, model, pair, audience)
        if error is not None or not output.strip():
            continue
        candidates.append(tokenize(output))
        references.append(tokenize(pair.reference))
    return corpus_bleu(candidates, references)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceSettings, create_app

    port = args.port if args.port is not None else int(os.environ.get("PORT", "8080"))
    app = create_app(ServiceSettings.from_env())
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "evaluate":
        return cmd_evaluate(args)
    return cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
