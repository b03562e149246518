/**
 * Five-point Likert widget: the survey question above five buttons from
 * Strongly Disagree to Strongly Agree. Selecting posts the rating; the
 * widget then locks to the stored value but stays revisable
 * (latest-wins). Server rejections surface inline.
 */

import type { ItemClass } from "./types.js";

export const SCALE_LABELS: Record<number, string> = {
  1: "Strongly Disagree",
  2: "Disagree",
  3: "Neutral",
  4: "Agree",
  5: "Strongly Agree",
};

export const QUESTIONS: Record<ItemClass, string> = {
  paragraph:
    "The displayed information helps me understand whether I want to read " +
    "this section without opening up the paragraphs.",
  citation:
    "I feel confident that I know what I will learn if I follow the " +
    "citation and read the cited paper.",
};

export interface LikertOptions {
  itemId: string;
  itemClass: ItemClass;
  initial?: number;
  /** Resolves when the rating is stored; rejects to show an error. */
  onSelect: (itemId: string, itemClass: ItemClass, rating: number) => Promise<void>;
}

export function createLikertWidget(options: LikertOptions): HTMLElement {
  const root = document.createElement("div");
  root.className = "likert";
  root.dataset.itemId = options.itemId;
  root.dataset.itemClass = options.itemClass;

  const question = document.createElement("p");
  question.className = "likert-question";
  question.textContent = QUESTIONS[options.itemClass];
  root.appendChild(question);

  const row = document.createElement("div");
  row.className = "likert-row";
  root.appendChild(row);

  const status = document.createElement("span");
  status.className = "likert-status";
  root.appendChild(status);

  const buttons: HTMLButtonElement[] = [];

  function markStored(rating: number) {
    root.dataset.stored = String(rating);
    for (const button of buttons) {
      button.classList.toggle(
        "selected",
        Number(button.dataset.rating) === rating
      );
    }
    status.textContent = `Saved: ${rating} (${SCALE_LABELS[rating]})`;
    status.classList.remove("error");
  }

  for (let rating = 1; rating <= 5; rating++) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "likert-option";
    button.dataset.rating = String(rating);
    button.textContent = String(rating);
    button.title = SCALE_LABELS[rating];
    button.setAttribute("aria-label", `${rating}: ${SCALE_LABELS[rating]}`);
    button.addEventListener("click", async () => {
      status.textContent = "Saving…";
      status.classList.remove("error");
      try {
        await options.onSelect(options.itemId, options.itemClass, rating);
        markStored(rating);
      } catch (error) {
        status.textContent =
          error instanceof Error ? error.message : "Could not save rating";
        status.classList.add("error");
      }
    });
    buttons.push(button);
    row.appendChild(button);
  }

  const low = document.createElement("span");
  low.className = "likert-anchor";
  low.textContent = SCALE_LABELS[1];
  row.insertBefore(low, row.firstChild);
  const high = document.createElement("span");
  high.className = "likert-anchor";
  high.textContent = SCALE_LABELS[5];
  row.appendChild(high);

  if (options.initial) {
    markStored(options.initial);
  }
  return root;
}
