/** DOM construction and event wiring for the simplification workspace. */

import { ApiClient, ServiceError } from "./api.js";
import * as s from "./state.js";

export interface AppHandles {
  /** Resolves once audiences and health have loaded. */
  ready: Promise<void>;
  getState(): s.SessionState;
  root: HTMLElement;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function buildApp(root: HTMLElement, api: ApiClient): AppHandles {
  let state = s.initialState();

  // ---- static skeleton ------------------------------------------------

  root.innerHTML = "";
  const header = el("header");
  header.append(el("h1", {}, "plainlang"));
  const modelChip = el("span", { class: "model-chip", "data-testid": "model-chip" });
  header.append(modelChip);

  const banner = el("div", { class: "banner hidden", "data-testid": "error-banner" });
  const bannerText = el("span", { class: "banner-text" });
  const bannerRetry = el("button", { "data-testid": "banner-retry", class: "hidden" }, "Retry");
  const bannerClose = el("button", { class: "banner-close" }, "×");
  banner.append(bannerText, bannerRetry, bannerClose);

  const main = el("main");

  const sourcePane = el("section", { class: "pane" });
  sourcePane.append(el("h2", {}, "Original text"));
  const sourceInput = el("textarea", {
    "data-testid": "source-input",
    placeholder: "Paste text here or upload a document…",
    rows: "14",
  });
  const controls = el("div", { class: "controls" });
  const fileInput = el("input", {
    type: "file",
    "data-testid": "file-input",
    accept: ".txt,.docx,.pdf",
  });
  const audienceSelect = el("select", {
    "data-testid": "audience-select",
    "aria-label": "Target audience",
  });
  const simplifyButton = el(
    "button",
    { "data-testid": "simplify-button", class: "primary", disabled: "" },
    "Simplify Text",
  );
  controls.append(fileInput, audienceSelect, simplifyButton);
  sourcePane.append(sourceInput, controls);

  const resultPane = el("section", { class: "pane" });
  resultPane.append(el("h2", {}, "Plain-language version"));
  const resultArea = el("div", { class: "result", "data-testid": "result-pane" });
  resultArea.append(el("p", { class: "placeholder" }, "The simplified text will appear here."));
  const readabilityRow = el("div", { class: "scores", "data-testid": "readability" });
  const resultControls = el("div", { class: "result-controls" });
  const expertLabel = el("label", { class: "toggle" });
  const expertToggle = el("input", { type: "checkbox", "data-testid": "expert-toggle", disabled: "" });
  expertLabel.append(expertToggle, document.createTextNode(" Expert Mode"));
  const undoButton = el("button", { "data-testid": "undo-button", disabled: "" }, "Undo");
  const ratingBox = el("span", { class: "rating", "data-testid": "rating" });
  const starButtons: HTMLButtonElement[] = [];
  for (let stars = 1; stars <= 5; stars++) {
    const star = el(
      "button",
      { class: "star", "data-stars": String(stars), disabled: "", title: `${stars} stars` },
      "★",
    );
    ratingBox.append(star);
    starButtons.push(star);
  }
  const ratingStatus = el("span", { class: "rating-status", "data-testid": "rating-status" });
  ratingBox.append(ratingStatus);
  resultControls.append(expertLabel, undoButton, ratingBox);
  resultPane.append(resultArea, readabilityRow, resultControls);

  main.append(sourcePane, resultPane);

  const popover = el("div", { class: "popover hidden", "data-testid": "word-popover" });
  const sentencePanel = el("div", { class: "sentence-panel hidden", "data-testid": "sentence-panel" });

  root.append(header, banner, main, popover, sentencePanel);

  // ---- rendering -------------------------------------------------------

  function setState(next: s.SessionState): void {
    state = next;
    syncControls();
  }

  function syncControls(): void {
    simplifyButton.disabled = !s.canSimplify(state);
    simplifyButton.textContent = state.pending ? "Simplifying…" : "Simplify Text";
    expertToggle.disabled = state.simplifiedText === undefined;
    undoButton.disabled = !s.canUndo(state);
    const canRate = state.jobId !== undefined && !state.rated && !state.pending;
    for (const star of starButtons) {
      star.disabled = !canRate;
    }
  }

  function showBanner(message: string, retryable: boolean): void {
    bannerText.textContent = message;
    banner.classList.remove("hidden");
    bannerRetry.classList.toggle("hidden", !retryable);
  }

  function hideBanner(): void {
    banner.classList.add("hidden");
  }

  function describeError(error: unknown): { message: string; retryable: boolean } {
    if (error instanceof ServiceError) {
      return { message: `${error.message} (${error.code})`, retryable: error.retryable };
    }
    return { message: String(error), retryable: true };
  }

  function renderReadability(): void {
    readabilityRow.innerHTML = "";
    if (!state.readability) {
      return;
    }
    readabilityRow.append(
      el("span", { class: "score-chip" }, `Reading ease ${state.readability.fre.toFixed(1)}`),
      el("span", { class: "score-chip" }, `Grade level ${state.readability.fk_grade.toFixed(1)}`),
    );
  }

  async function renderResult(): Promise<void> {
    closePopover();
    closeSentencePanel();
    renderReadability();
    resultArea.innerHTML = "";
    const text = state.simplifiedText;
    if (text === undefined) {
      resultArea.append(el("p", { class: "placeholder" }, "The simplified text will appear here."));
      return;
    }
    if (!state.expertMode) {
      for (const paragraph of text.split(/\n{2,}/)) {
        resultArea.append(el("p", {}, paragraph));
      }
      return;
    }
    await renderExpertText(text);
  }

  async function renderExpertText(text: string): Promise<void> {
    let sentences: string[];
    try {
      sentences = await api.split(text);
    } catch (error) {
      const { message } = describeError(error);
      showBanner(message, false);
      return;
    }
    if (state.simplifiedText !== text) {
      return; // a newer render superseded this one
    }
    resultArea.innerHTML = "";
    const hint = el(
      "p",
      { class: "hint" },
      "Click a word for synonyms and a definition; use ↻ to rephrase a sentence.",
    );
    resultArea.append(hint);
    for (const span of s.sentenceSpans(text, sentences)) {
      const block = el("span", { class: "sentence", "data-offset": String(span.offset) });
      for (const word of s.wordSpans(text, span.sentence, span.offset)) {
        const token = el(
          "button",
          {
            class: "word",
            "data-testid": "word-token",
            "data-word": word.word,
            "data-offset": String(word.offset),
          },
          word.raw,
        );
        token.addEventListener("click", () => {
          void openWordPopover(word.word, span.sentence, word.offset);
        });
        block.append(token, document.createTextNode(" "));
      }
      const rephraseButton = el(
        "button",
        { class: "sentence-rephrase", "data-testid": "sentence-rephrase", title: "Rephrase sentence" },
        "↻",
      );
      rephraseButton.addEventListener("click", () => {
        void openSentencePanel(span.sentence, span.offset);
      });
      block.append(rephraseButton, document.createTextNode(" "));
      resultArea.append(block);
    }
  }

  // ---- word popover ----------------------------------------------------

  function closePopover(): void {
    popover.classList.add("hidden");
    popover.innerHTML = "";
  }

  /** True when the text at the span still matches what the control was
   * built for; stale controls from a superseded render must not edit. */
  function spanIsCurrent(offset: number, value: string): boolean {
    const text = state.simplifiedText;
    return text !== undefined && text.slice(offset, offset + value.length) === value;
  }

  async function openWordPopover(word: string, sentence: string, offset: number): Promise<void> {
    if (state.pending || !spanIsCurrent(offset, word)) {
      return;
    }
    setState(s.select(state, { kind: "word", value: word }));
    closeSentencePanel();
    popover.innerHTML = "";
    popover.classList.remove("hidden");
    popover.append(el("h3", {}, `“${word}”`));
    const loading = el("p", { class: "placeholder" }, "Looking up…");
    popover.append(loading);
    const close = el("button", { class: "popover-close", "data-testid": "popover-close" }, "Close");
    close.addEventListener("click", () => {
      setState(s.select(state, undefined));
      closePopover();
    });
    popover.append(close);

    // Synonyms and definition load in parallel; either may fail alone.
    const [synonymsResult, definitionResult] = await Promise.allSettled([
      api.synonyms(word, sentence),
      api.definition(word, sentence),
    ]);
    if (popover.classList.contains("hidden")) {
      return;
    }
    loading.remove();

    const definitionBlock = el("div", { class: "definition" });
    if (definitionResult.status === "fulfilled") {
      definitionBlock.append(
        el("p", { "data-testid": "definition-text" }, definitionResult.value.definition),
      );
    } else {
      definitionBlock.append(
        el("p", { class: "inline-error" }, describeError(definitionResult.reason).message),
      );
    }

    const synonymsBlock = el("div", { class: "synonyms" });
    if (synonymsResult.status === "fulfilled") {
      for (const synonym of synonymsResult.value.synonyms) {
        const option = el(
          "button",
          { class: "synonym-option", "data-testid": "synonym-option" },
          synonym,
        );
        option.addEventListener("click", () => {
          if (!spanIsCurrent(offset, word)) {
            closePopover();
            return;
          }
          setState(s.replaceSpan(state, offset, word.length, synonym));
          closePopover();
          void renderResult();
        });
        synonymsBlock.append(option);
      }
      if (!synonymsResult.value.synonyms.length) {
        synonymsBlock.append(el("p", { class: "placeholder" }, "No simpler synonyms found."));
      }
    } else {
      synonymsBlock.append(
        el("p", { class: "inline-error" }, describeError(synonymsResult.reason).message),
      );
    }
    popover.insertBefore(synonymsBlock, close);
    popover.insertBefore(definitionBlock, close);
  }

  // ---- sentence rephrasing ----------------------------------------------

  function closeSentencePanel(): void {
    sentencePanel.classList.add("hidden");
    sentencePanel.innerHTML = "";
  }

  async function openSentencePanel(sentence: string, offset: number): Promise<void> {
    if (state.pending || !spanIsCurrent(offset, sentence)) {
      return;
    }
    setState(s.select(state, { kind: "sentence", value: sentence }));
    closePopover();
    sentencePanel.innerHTML = "";
    sentencePanel.classList.remove("hidden");
    sentencePanel.append(el("h3", {}, "Rephrase sentence"));
    sentencePanel.append(el("p", { class: "original-sentence" }, sentence));

    const sliderRow = el("div", { class: "slider-row" });
    sliderRow.append(el("span", {}, "simplest"));
    const slider = el("input", {
      type: "range",
      min: "1",
      max: "3",
      step: "1",
      value: "1",
      "data-testid": "level-slider",
      "aria-label": "Complexity level",
    });
    sliderRow.append(slider, el("span", {}, "closest to original"));
    sentencePanel.append(sliderRow);

    const preview = el("p", { class: "variant-preview", "data-testid": "variant-preview" }, "…");
    sentencePanel.append(preview);

    const buttonRow = el("div", { class: "panel-buttons" });
    const accept = el(
      "button",
      { class: "primary", "data-testid": "variant-accept", disabled: "" },
      "Accept",
    );
    const reject = el("button", { "data-testid": "variant-reject" }, "Reject");
    buttonRow.append(accept, reject);
    sentencePanel.append(buttonRow);

    let currentVariant: string | undefined;

    async function fetchVariant(level: number): Promise<void> {
      accept.disabled = true;
      currentVariant = undefined;
      preview.textContent = "Fetching variant…";
      try {
        const { variant } = await api.rephrase(sentence, level);
        currentVariant = variant;
        preview.textContent = variant;
        accept.disabled = false;
      } catch (error) {
        preview.textContent = describeError(error).message;
      }
    }

    slider.addEventListener("change", () => {
      void fetchVariant(Number(slider.value));
    });
    slider.addEventListener("input", () => {
      void fetchVariant(Number(slider.value));
    });
    accept.addEventListener("click", () => {
      if (currentVariant === undefined) {
        return;
      }
      if (!spanIsCurrent(offset, sentence)) {
        closeSentencePanel();
        return;
      }
      setState(s.replaceSpan(state, offset, sentence.length, currentVariant));
      closeSentencePanel();
      void renderResult();
    });
    reject.addEventListener("click", () => {
      // The simplified text is untouched on reject.
      setState(s.select(state, undefined));
      closeSentencePanel();
    });

    await fetchVariant(1);
  }

  // ---- top-level flows ---------------------------------------------------

  async function runSimplify(): Promise<void> {
    if (!s.canSimplify(state)) {
      return;
    }
    hideBanner();
    setState(s.beginSimplify(state));
    try {
      const response = await api.simplify(state.sourceText, state.audience);
      setState(
        s.completeSimplify(state, response.job_id, response.simplified_text, response.readability),
      );
      ratingStatus.textContent = "";
      await renderResult();
    } catch (error) {
      const { message, retryable } = describeError(error);
      setState(s.failSimplify(state, message));
      showBanner(message, retryable);
    }
  }

  sourceInput.addEventListener("input", () => {
    setState(s.setSourceText(state, sourceInput.value));
  });

  audienceSelect.addEventListener("change", () => {
    setState(s.setAudience(state, audienceSelect.value));
  });

  simplifyButton.addEventListener("click", () => {
    void runSimplify();
  });

  bannerRetry.addEventListener("click", () => {
    void runSimplify();
  });

  bannerClose.addEventListener("click", hideBanner);

  expertToggle.addEventListener("change", () => {
    setState(s.toggleExpertMode(state, expertToggle.checked));
    void renderResult();
  });

  undoButton.addEventListener("click", () => {
    setState(s.undo(state));
    void renderResult();
  });

  for (const star of starButtons) {
    star.addEventListener("click", () => {
      const jobId = state.jobId;
      if (jobId === undefined) {
        return;
      }
      const stars = Number(star.dataset.stars);
      ratingStatus.textContent = "Sending…";
      api
        .feedback(jobId, stars)
        .then(() => {
          setState(s.markRated(state));
          ratingStatus.textContent = "Thanks for the feedback!";
        })
        .catch((error) => {
          ratingStatus.textContent = "";
          const { message } = describeError(error);
          showBanner(message, false);
        });
    });
  }

  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) {
      return;
    }
    hideBanner();
    api
      .upload(file, file.name)
      .then((response) => {
        sourceInput.value = response.text;
        setState(s.setSourceText(state, response.text));
        if (response.warnings.length) {
          showBanner(`Extracted with warnings: ${response.warnings.join("; ")}`, false);
        }
      })
      .catch((error) => {
        const { message } = describeError(error);
        showBanner(message, false);
      })
      .finally(() => {
        fileInput.value = "";
      });
  });

  // ---- boot ---------------------------------------------------------------

  const ready = (async () => {
    const [audiences, health] = await Promise.all([api.audiences(), api.health()]);
    audienceSelect.innerHTML = "";
    for (const audience of audiences.audiences) {
      const option = el("option", { value: audience.label }, audience.display_name);
      audienceSelect.append(option);
    }
    audienceSelect.value = audiences.default;
    setState(s.setAudience(state, audiences.default));
    modelChip.textContent = health.model;
  })();

  syncControls();
  return { ready, getState: () => state, root };
}
