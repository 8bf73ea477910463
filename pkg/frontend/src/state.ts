/** Session state and its pure transitions.
 *
 * All text mutations (synonym/variant acceptance) operate on plain
 * strings and push the previous version onto an undo history, so every
 * change stays local and reversible. The one invariant enforced here:
 * a simplified text always has the job id it came from.
 */

import type { Readability } from "./api.js";

export interface Selection {
  kind: "word" | "sentence";
  value: string;
}

export interface SessionState {
  sourceText: string;
  audience: string;
  jobId?: string;
  simplifiedText?: string;
  readability?: Readability;
  expertMode: boolean;
  selection?: Selection;
  pending: boolean;
  history: string[];
  rated: boolean;
  error?: string;
}

export const DEFAULT_AUDIENCE = "general_public";

export function initialState(): SessionState {
  return {
    sourceText: "",
    audience: DEFAULT_AUDIENCE,
    expertMode: false,
    pending: false,
    history: [],
    rated: false,
  };
}

function checkInvariant(state: SessionState): SessionState {
  if (state.simplifiedText !== undefined && state.jobId === undefined) {
    throw new Error("invariant violation: simplified text without a job id");
  }
  return state;
}

export function canSimplify(state: SessionState): boolean {
  return state.sourceText.trim().length > 0 && !state.pending;
}

export function setSourceText(state: SessionState, text: string): SessionState {
  return checkInvariant({ ...state, sourceText: text });
}

export function setAudience(state: SessionState, audience: string): SessionState {
  return checkInvariant({ ...state, audience });
}

export function beginSimplify(state: SessionState): SessionState {
  if (!canSimplify(state)) {
    throw new Error("cannot simplify: empty text or a request is in flight");
  }
  return checkInvariant({ ...state, pending: true, error: undefined });
}

export function completeSimplify(
  state: SessionState,
  jobId: string,
  simplifiedText: string,
  readability: Readability,
): SessionState {
  return checkInvariant({
    ...state,
    pending: false,
    jobId,
    simplifiedText,
    readability,
    history: [],
    rated: false,
    selection: undefined,
    error: undefined,
  });
}

export function failSimplify(state: SessionState, message: string): SessionState {
  return checkInvariant({ ...state, pending: false, error: message });
}

export function toggleExpertMode(state: SessionState, on: boolean): SessionState {
  return checkInvariant({ ...state, expertMode: on, selection: undefined });
}

export function select(state: SessionState, selection: Selection | undefined): SessionState {
  return checkInvariant({ ...state, selection });
}

export function markRated(state: SessionState): SessionState {
  return checkInvariant({ ...state, rated: true });
}

/** Replace the text at [offset, offset + length) with a replacement. */
export function replaceSpan(
  state: SessionState,
  offset: number,
  length: number,
  replacement: string,
): SessionState {
  const text = state.simplifiedText;
  if (text === undefined) {
    throw new Error("no simplified text to edit");
  }
  if (offset < 0 || offset + length > text.length) {
    throw new Error("edit span out of bounds");
  }
  const next = text.slice(0, offset) + replacement + text.slice(offset + length);
  return checkInvariant({
    ...state,
    simplifiedText: next,
    history: [...state.history, text],
    selection: undefined,
  });
}

export function canUndo(state: SessionState): boolean {
  return state.history.length > 0;
}

export function undo(state: SessionState): SessionState {
  const previous = state.history[state.history.length - 1];
  if (previous === undefined) {
    return state;
  }
  return checkInvariant({
    ...state,
    simplifiedText: previous,
    history: state.history.slice(0, -1),
    selection: undefined,
  });
}

/** A token with its position inside the enclosing text. */
export interface WordSpan {
  /** The raw whitespace-delimited chunk ("dropout'," included). */
  raw: string;
  /** The clickable word with edge punctuation stripped. */
  word: string;
  /** Absolute offset of `word` inside the full text. */
  offset: number;
}

const EDGE_PUNCT = /^[^\p{L}\p{N}]+|[^\p{L}\p{N}]+$/gu;

/** Split a sentence into word spans with absolute offsets. */
export function wordSpans(text: string, sentence: string, sentenceOffset: number): WordSpan[] {
  const spans: WordSpan[] = [];
  const chunkRe = /\S+/g;
  let match: RegExpExecArray | null;
  while ((match = chunkRe.exec(sentence)) !== null) {
    const raw = match[0];
    const word = raw.replace(EDGE_PUNCT, "");
    if (!word) {
      continue;
    }
    const leading = raw.indexOf(word);
    spans.push({
      raw,
      word,
      offset: sentenceOffset + match.index + leading,
    });
  }
  return spans;
}

export interface SentenceSpan {
  sentence: string;
  offset: number;
}

/** Locate each (server-provided) sentence inside the full text, in order. */
export function sentenceSpans(text: string, sentences: string[]): SentenceSpan[] {
  const spans: SentenceSpan[] = [];
  let searchFrom = 0;
  for (const sentence of sentences) {
    const at = text.indexOf(sentence, searchFrom);
    if (at < 0) {
      continue;
    }
    spans.push({ sentence, offset: at });
    searchFrom = at + sentence.length;
  }
  return spans;
}
