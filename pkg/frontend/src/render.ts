/**
 * DOM construction for the reading view.
 *
 * Sections always show their title and TLDR; paragraphs start folded to
 * their first sentence and unfold to the full text. In the intent
 * condition a labeled intent chip with its rationale precedes each
 * paragraph and each citation tooltip carries the citation intent ahead
 * of the snippet; the baseline condition renders neither. Every
 * paragraph and every citation gets its own rating widget.
 */

import { createLikertWidget } from "./likert.js";
import type { ViewState } from "./state.js";
import { attachTooltip } from "./tooltip.js";
import type {
  CitationEntry,
  IntentInfo,
  ItemClass,
  ParagraphPayload,
  ReportPayload,
} from "./types.js";

export type RatingHandler = (
  itemId: string,
  itemClass: ItemClass,
  rating: number
) => Promise<void>;

function intentChip(intent: IntentInfo): HTMLElement {
  const chip = document.createElement("div");
  chip.className = "intent-chip";
  const label = document.createElement("span");
  label.className = "intent-label";
  label.textContent = intent.label;
  const rationale = document.createElement("span");
  rationale.className = "intent-rationale";
  rationale.textContent = intent.rationale;
  chip.append(label, rationale);
  return chip;
}

function tooltipContent(citation: CitationEntry, intentMode: boolean): HTMLElement {
  const box = document.createElement("div");
  box.className = "citation-tip";
  if (intentMode && citation.intent) {
    box.appendChild(intentChip(citation.intent));
  }
  if (citation.title) {
    const title = document.createElement("div");
    title.className = "tip-title";
    title.textContent = citation.title;
    box.appendChild(title);
  }
  const snippet = document.createElement("div");
  snippet.className = "tip-snippet";
  snippet.textContent =
    citation.snippet ?? (citation.is_memory ? "From the model's own knowledge." : "");
  box.appendChild(snippet);
  return box;
}

function paragraphBody(
  paragraph: ParagraphPayload,
  intentMode: boolean
): HTMLElement {
  const body = document.createElement("div");
  body.className = "paragraph-body";
  for (const segment of paragraph.segments) {
    const span = document.createElement("span");
    span.textContent = segment.text + " ";
    body.appendChild(span);
    for (const citation of segment.citations ?? []) {
      const marker = document.createElement("span");
      marker.className = "citation-marker";
      marker.dataset.ordinal = String(citation.ordinal);
      marker.textContent = citation.key + " ";
      attachTooltip(marker, () => tooltipContent(citation, intentMode));
      body.appendChild(marker);
    }
  }
  return body;
}

function renderParagraph(
  paragraph: ParagraphPayload,
  state: ViewState,
  onRate: RatingHandler
): HTMLElement {
  const intentMode = state.mode === "intent";
  const block = document.createElement("article");
  block.className = "paragraph";
  block.dataset.paragraphId = paragraph.id;

  if (intentMode && paragraph.intent) {
    block.appendChild(intentChip(paragraph.intent));
  }

  const preview = document.createElement("p");
  preview.className = "paragraph-preview";
  preview.textContent = paragraph.first_sentence;
  const full = paragraphBody(paragraph, intentMode);
  full.hidden = !state.isExpanded(paragraph.id);
  preview.hidden = !full.hidden;

  const toggle = document.createElement("button");
  toggle.type = "button";
  toggle.className = "fold-toggle";
  toggle.textContent = full.hidden ? "Expand" : "Collapse";
  toggle.addEventListener("click", () => {
    const expanded = state.toggle(paragraph.id);
    full.hidden = !expanded;
    preview.hidden = expanded;
    toggle.textContent = expanded ? "Collapse" : "Expand";
  });

  block.append(toggle, preview, full);

  block.appendChild(
    createLikertWidget({
      itemId: paragraph.id,
      itemClass: "paragraph",
      initial: state.ratingFor(paragraph.id)?.rating,
      onSelect: onRate,
    })
  );

  const citations = (paragraph.segments ?? []).flatMap(
    (segment) => segment.citations ?? []
  );
  if (citations.length) {
    const list = document.createElement("div");
    list.className = "citation-list";
    for (const citation of citations) {
      const row = document.createElement("div");
      row.className = "citation-row";
      const marker = document.createElement("span");
      marker.className = "citation-marker";
      marker.textContent = citation.key;
      attachTooltip(marker, () => tooltipContent(citation, intentMode));
      row.appendChild(marker);
      const itemId = `${paragraph.id}.c${citation.ordinal}`;
      row.appendChild(
        createLikertWidget({
          itemId,
          itemClass: "citation",
          initial: state.ratingFor(itemId)?.rating,
          onSelect: onRate,
        })
      );
      list.appendChild(row);
    }
    block.appendChild(list);
  }
  return block;
}

export function renderReport(
  container: HTMLElement,
  payload: ReportPayload,
  state: ViewState,
  onRate: RatingHandler
): void {
  container.textContent = "";
  if (!payload.sections || payload.sections.length === 0) {
    const banner = document.createElement("div");
    banner.className = "banner error-banner";
    banner.textContent =
      "This report could not be displayed: the payload has no sections.";
    container.appendChild(banner);
    return;
  }
  const heading = document.createElement("h2");
  heading.className = "report-query";
  heading.textContent = payload.query;
  container.appendChild(heading);

  for (const section of payload.sections) {
    const sectionEl = document.createElement("section");
    sectionEl.className = "report-section";
    const title = document.createElement("h3");
    title.textContent = section.title || "(untitled section)";
    sectionEl.appendChild(title);
    if (section.tldr) {
      const tldr = document.createElement("p");
      tldr.className = "tldr";
      tldr.textContent = `TLDR; ${section.tldr}`;
      sectionEl.appendChild(tldr);
    }
    for (const paragraph of section.paragraphs) {
      sectionEl.appendChild(renderParagraph(paragraph, state, onRate));
    }
    container.appendChild(sectionEl);
  }
}
