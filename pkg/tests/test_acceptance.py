"""Acceptance suite: one test per release criterion.

Each test appends a PASS line (with measured details where relevant) to
the acceptance summary printed at the end of the run.
"""

import json
import math
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from plainlang import metrics
from plainlang.analysis import TokenSequence, tokenize
from plainlang.core import Audience, ModelConfig
from plainlang.evalcli import load_corpus, render_report, run_evaluation
from plainlang.feedback import FeedbackStore
from plainlang.gateway import HttpGateway, MockGateway, model_config_from_env
from plainlang.ingestion import IngestionError, extract_text
from plainlang.service import ERROR_CODES, ServiceSettings, create_app

from .conftest import ACCEPTANCE_LINES, build_docx, build_image_only_pdf, build_pdf
from .oracles import naive_bleu, naive_sari

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_100 = FIXTURES / "corpus_100.tsv"
READABILITY_PAIR = FIXTURES / "readability_pair.json"


def record(line):
    ACCEPTANCE_LINES.append(line)


def toks(*words):
    return TokenSequence.of(words)


class TestMetricHandCases:
    def test_metric_hand_case_suite(self):
        started = time.perf_counter()

        assert metrics.bleu(toks("the", "cat", "sat"), toks("the", "cat", "sat")) == 1.0
        three_vs_six = metrics.bleu(
            toks("the", "cat", "sat"), toks("the", "cat", "sat", "on", "the", "mat")
        )
        assert abs(three_vs_six - math.exp(-1)) < 1e-9
        assert metrics.bleu(toks("dogs", "run"), toks("the", "cat", "sat")) == 0.0

        breakdown = metrics.sari(
            toks("the", "big", "cat"), toks("the", "cat"), toks("the", "cat")
        )
        assert breakdown.f_add == 0.25
        assert breakdown.f_keep == 0.25
        assert breakdown.p_del == 0.75
        assert abs(breakdown.sari - 41.6667) < 1e-4

        s = toks("a", "b", "c", "d")
        assert abs(metrics.sari(s, s, s).sari - 33.3333) < 1e-4

        fre = metrics.flesch_reading_ease("The cat sat on the mat.")
        fkg = metrics.fk_grade("The cat sat on the mat.")
        assert abs(fre - 116.145) < 1e-6
        assert abs(fkg - (-1.45)) < 1e-6

        elapsed = time.perf_counter() - started
        assert elapsed < 0.5, f"hand cases took {elapsed:.3f}s, expected milliseconds"
        record(f"PASS metric hand-case suite ({elapsed * 1000:.1f} ms)")


class TestOracleEquivalence:
    def test_bleu_sari_agree_with_bruteforce_oracle(self):
        started = time.perf_counter()
        rng = random.Random(0xACCE97)
        alphabet = ["a", "b", "c", "d", "e"]
        n_triples = 10_000
        for _ in range(n_triples):
            source = rng.choices(alphabet, k=rng.randrange(1, 13))
            candidate = rng.choices(alphabet, k=rng.randrange(1, 13))
            reference = rng.choices(alphabet, k=rng.randrange(1, 13))

            fast_bleu = metrics.bleu(TokenSequence.of(candidate), TokenSequence.of(reference))
            assert abs(fast_bleu - naive_bleu(candidate, reference)) < 1e-9

            got = metrics.sari(
                TokenSequence.of(source),
                TokenSequence.of(candidate),
                TokenSequence.of(reference),
            )
            f_add, f_keep, p_del, total = naive_sari(source, candidate, reference)
            assert abs(got.f_add - f_add) < 1e-9
            assert abs(got.f_keep - f_keep) < 1e-9
            assert abs(got.p_del - p_del) < 1e-9
            assert abs(got.sari - total) < 1e-9
        elapsed = time.perf_counter() - started
        assert elapsed < 60.0, f"oracle run took {elapsed:.1f}s, budget is 60s"
        record(f"PASS oracle equivalence on {n_triples} random triples ({elapsed:.1f} s)")


class TestEndToEndMockRun:
    def test_hundred_pair_echo_run_all_audiences(self):
        corpus = load_corpus(CORPUS_100)
        assert len(corpus) == 100
        reports = run_evaluation(
            corpus,
            list(Audience),
            MockGateway("echo_source"),
            ModelConfig(model_name="echo-mock"),
        )
        assert len(reports) == 5

        # Independent recomputation: with the echo mock the output IS the
        # original, so each report's BLEU must equal this mean bit-exactly.
        expected_bleu = math.fsum(
            metrics.bleu(tokenize(p.original), tokenize(p.reference)) for p in corpus.pairs
        ) / len(corpus.pairs)
        for report in reports:
            assert report.bleu == expected_bleu
            assert report.n_pairs == 100
            assert 0.0 <= report.bleu <= 1.0
            assert 0.0 <= report.sari <= 100.0

        rendered = render_report(reports, "markdown")
        header = rendered.splitlines()[0]
        for column in ("BLEU", "SARI", "FK Ease", "FK Grade"):
            assert column in header
        assert "BLEU | SARI | FK Ease | FK Grade" in header
        record(
            "PASS end-to-end mock run: 5 audiences x 100 pairs, "
            f"bleu={expected_bleu:.6f} recomputed bit-exactly"
        )


@pytest.mark.skipif(
    not os.environ.get("LLM_API_KEY"),
    reason="live smoke test needs LLM_API_KEY",
)
class TestLiveSmoke:
    def test_live_ranges_on_ten_pairs(self):
        corpus = load_corpus(CORPUS_100)
        reports = run_evaluation(
            corpus,
            [Audience.STUDENTS_ACADEMICS],
            HttpGateway(),
            model_config_from_env(),
            sample=10,
            seed=0,
        )
        report = reports[0]
        assert 0.1 <= report.bleu <= 0.9
        assert 25.0 <= report.sari <= 55.0
        assert 3.0 <= report.fk_grade <= 12.0
        record(
            f"PASS live smoke: bleu={report.bleu:.3f} sari={report.sari:.2f} "
            f"fk_grade={report.fk_grade:.2f}"
        )


class TestReadabilityDirection:
    def test_simplified_text_reads_easier(self):
        pair = json.loads(READABILITY_PAIR.read_text(encoding="utf-8"))
        fre_original = metrics.flesch_reading_ease(pair["original"])
        fre_simplified = metrics.flesch_reading_ease(pair["simplified"])
        gap = fre_simplified - fre_original
        assert gap > 0, f"expected simplified text to score higher, gap={gap:.3f}"
        record(
            f"PASS directional readability: FRE {fre_original:.2f} -> "
            f"{fre_simplified:.2f} (gap +{gap:.2f})"
        )


class TestIngestionAcceptance:
    def test_round_trip_and_fuzz(self):
        paragraphs = ["A first paragraph with plain words.", "A second paragraph."]
        docx_doc = extract_text(build_docx(paragraphs, runs_per_paragraph=3))
        assert docx_doc.text.split() == "\n\n".join(paragraphs).split()

        pages = [["Line one of page one", "Line two of page one"], ["Page two text"]]
        pdf_doc = extract_text(build_pdf(pages, compress=1))
        flat = " ".join(" ".join(lines) for lines in pages)
        assert pdf_doc.text.split() == flat.split()

        rng = random.Random(0xFBAD)
        prefixes = [b"", b"", b"", b"%PDF-", b"%PDF-1.4\n1 0 obj\n<<", b"PK\x03\x04"]
        n_blobs = 10_000
        outcomes = {"value": 0, "declared_error": 0}
        for i in range(n_blobs):
            blob = rng.choice(prefixes) + rng.randbytes(rng.randrange(0, 300))
            try:
                extract_text(blob, declared_name=f"fuzz_{i}.bin")
                outcomes["value"] += 1
            except IngestionError:
                outcomes["declared_error"] += 1
            # Anything else propagates and fails the criterion.
        record(
            f"PASS ingestion: round-trips ok; fuzz {n_blobs} blobs -> "
            f"{outcomes['value']} values, {outcomes['declared_error']} declared errors, 0 crashes"
        )


class TestServiceConformance:
    @pytest.fixture
    def client(self, tmp_path):
        settings = ServiceSettings(
            model=ModelConfig(model_name="gpt-4o", api_key="sk-acceptance"),
            feedback_path=tmp_path / "feedback",
            mock_mode="echo_source",
        )
        app = create_app(settings)
        with TestClient(app, raise_server_exceptions=False) as c:
            yield c

    def _assert_error_schema(self, response, status, code):
        assert response.status_code == status
        body = response.json()
        assert set(body) == {"code", "message", "http_status"}
        assert body["code"] in ERROR_CODES
        assert body["code"] == code

    def test_full_endpoint_suite(self, client, tmp_path):
        # Simplify: echo round trip plus the default-audience contract.
        text = "The neural network computes probability distributions."
        r = client.post("/api/simplify", json={"text": text})
        assert r.status_code == 200
        body = r.json()
        assert body["simplified_text"] == text
        assert body["audience"] == "general_public"
        assert set(body["readability"]) == {"fre", "fk_grade"}
        job_id = body["job_id"]

        self._assert_error_schema(
            client.post("/api/simplify", json={"text": ""}), 400, "empty_text"
        )
        self._assert_error_schema(
            client.post("/api/simplify", json={"text": "x", "audience": "nobody"}),
            400,
            "unknown_audience",
        )

        # Upload: all three formats plus the declared error codes.
        assert (
            client.post(
                "/api/upload", files={"file": ("a.docx", build_docx(["Hi there"]))}
            ).json()["text"]
            == "Hi there"
        )
        assert (
            client.post(
                "/api/upload",
                files={"file": ("a.pdf", build_pdf([["From a pdf"]], compress=1))},
            ).json()["text"]
            == "From a pdf"
        )
        self._assert_error_schema(
            client.post("/api/upload", files={"file": ("x.pdf", build_image_only_pdf())}),
            422,
            "no_text_content",
        )
        self._assert_error_schema(
            client.post(
                "/api/upload",
                files={"file": ("x.pdf", build_pdf([["s"]], encrypt="pw"))},
            ),
            422,
            "encrypted_pdf",
        )

        # Expert mode input validation and upstream-format policing.
        self._assert_error_schema(
            client.post("/api/expert/rephrase", json={"sentence": "a b", "level": 4}),
            400,
            "invalid_level",
        )
        self._assert_error_schema(
            client.post(
                "/api/expert/synonyms",
                json={"word": "gpu", "sentence": "We used CPUs."},
            ),
            400,
            "word_not_in_context",
        )
        # Echo mock returns prose, not JSON, twice -> documented 502.
        self._assert_error_schema(
            client.post(
                "/api/expert/synonyms",
                json={"word": "model", "sentence": "The model worked."},
            ),
            502,
            "malformed_model_output",
        )
        rephrased = client.post(
            "/api/expert/rephrase", json={"sentence": "The model worked.", "level": 1}
        )
        assert rephrased.status_code == 200
        assert rephrased.json()["variant"] == "The model worked."

        # Feedback: 204, unknown job, invalid stars, last-write-wins.
        assert (
            client.post("/api/feedback", json={"job_id": job_id, "stars": 2}).status_code
            == 204
        )
        assert (
            client.post("/api/feedback", json={"job_id": job_id, "stars": 5}).status_code
            == 204
        )
        agg = client.get("/api/feedback/aggregate").json()
        assert agg["count"] == 1
        assert agg["mean_stars"] == 5.0
        self._assert_error_schema(
            client.post("/api/feedback", json={"job_id": "0" * 32, "stars": 3}),
            404,
            "unknown_job",
        )
        self._assert_error_schema(
            client.post("/api/feedback", json={"job_id": job_id, "stars": 9}),
            400,
            "invalid_stars",
        )

        # Health and the sentence-split helper.
        assert client.get("/api/health").json() == {"status": "ok", "model": "gpt-4o"}
        assert client.get(
            "/api/split", params={"text": "One here. Two here."}
        ).json() == {"sentences": ["One here.", "Two here."]}

        # The service never leaks its API key.
        for path in ("/api/health", "/api/audiences"):
            assert "sk-acceptance" not in client.get(path).text

        record("PASS service conformance: endpoint schema suite under echo mock")

    def test_sixteen_concurrent_simplify_no_bleed(self, client):
        texts = [f"Concurrent request {i} carries its own payload." for i in range(16)]
        with ThreadPoolExecutor(max_workers=16) as pool:
            responses = list(
                pool.map(lambda t: client.post("/api/simplify", json={"text": t}), texts)
            )
        ids = set()
        for text, response in zip(texts, responses):
            assert response.status_code == 200
            assert response.json()["simplified_text"] == text
            ids.add(response.json()["job_id"])
        assert len(ids) == 16
        record("PASS service conformance: 16-way concurrent simplify, no cross-request bleed")

    def test_feedback_log_truncation_property(self, tmp_path, client):
        # Write ratings through the API, then replay truncated logs.
        job_ids = []
        for i in range(3):
            r = client.post("/api/simplify", json={"text": f"Crash safety text {i}."})
            job_ids.append(r.json()["job_id"])
            assert (
                client.post(
                    "/api/feedback", json={"job_id": job_ids[-1], "stars": (i % 5) + 1}
                ).status_code
                == 204
            )
        feedback_dir = tmp_path / "feedback"
        log = (feedback_dir / "ratings.jsonl").read_bytes()
        jobs_log = (feedback_dir / "jobs.jsonl").read_bytes()
        for cut in range(len(log) + 1):
            case_dir = tmp_path / "cases" / f"cut_{cut}"
            case_dir.mkdir(parents=True)
            (case_dir / "jobs.jsonl").write_bytes(jobs_log)
            (case_dir / "ratings.jsonl").write_bytes(log[:cut])
            reopened = FeedbackStore(case_dir)
            agg = reopened.aggregate()
            full = log[:cut].count(b"\n")
            assert agg.count in (full, full + 1)
            if agg.count:
                assert 1.0 <= agg.mean_stars <= 5.0
        record("PASS service conformance: crash-safe feedback-log truncation")
