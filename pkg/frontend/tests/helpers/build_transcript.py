"""Writes a scripted-mock transcript from a JSON spec on stdin.

Prompt construction and hashing live in the service package; this keeps
the UI tests keyed to the exact prompts the service will send.
"""

import json
import sys

from plainlang.core import audience_from_label
from plainlang.gateway import append_transcript_entry
from plainlang.prompting import (
    ComplexityLevel,
    build_definition_prompt,
    build_rephrase_prompt,
    build_simplify_prompt,
    build_synonym_prompt,
)


def bundle_for(entry):
    kind = entry["kind"]
    if kind == "simplify":
        return build_simplify_prompt(
            entry["text"], audience_from_label(entry.get("audience", "general_public"))
        )
    if kind == "rephrase":
        return build_rephrase_prompt(entry["sentence"], ComplexityLevel(entry["level"]))
    if kind == "synonyms":
        return build_synonym_prompt(entry["word"], entry["sentence"])
    if kind == "definition":
        return build_definition_prompt(entry["word"], entry["sentence"])
    raise ValueError(f"unknown entry kind: {kind}")


def main():
    spec = json.load(sys.stdin)
    for entry in spec["entries"]:
        append_transcript_entry(spec["path"], bundle_for(entry).user_message, entry["response"])
    print(f"wrote {len(spec['entries'])} transcript entries")


if __name__ == "__main__":
    main()
