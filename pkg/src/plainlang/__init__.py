"""plainlang: audience-targeted plain-language simplification toolkit.

Library modules:

* :mod:`plainlang.core` -- shared domain types
* :mod:`plainlang.analysis` -- tokenization, sentences, syllables, n-grams
* :mod:`plainlang.metrics` -- BLEU, SARI, Flesch readability, aggregation
* :mod:`plainlang.prompting` -- audience-conditioned prompt construction
* :mod:`plainlang.gateway` -- OpenAI-compatible transport plus mock backends
* :mod:`plainlang.ingestion` -- TXT/DOCX/PDF text extraction
* :mod:`plainlang.feedback` -- append-only rating store
* :mod:`plainlang.service` -- the HTTP API
* :mod:`plainlang.evalcli` -- corpus evaluation harness
"""

__version__ = "0.1.0"
