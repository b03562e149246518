/**
 * Study instructions: shown in full before the task starts, then kept
 * above the report behind a "Click to Expand Instruction" toggle so
 * participants can re-read them at any point.
 */

const INSTRUCTION_TEXT = [
  "You will read a multi-section report generated for a research question. " +
    "Each section shows its title and a short TLDR; paragraphs start " +
    "collapsed to their first sentence and can be expanded.",
  "Citations such as [1] are highlighted in the text. Hover over a " +
    "citation to see a snippet from the cited paper.",
  "For each paragraph and each highlighted citation, answer the question " +
    "shown next to it on a 1-5 scale from Strongly Disagree to Strongly " +
    "Agree. You can revise an answer at any time; the latest one counts.",
  "Once every item is rated, a finish screen appears where you can leave " +
    "an optional free-form reflection and download your annotations.",
].join("\n\n");

export function createInstructions(started: boolean): HTMLElement {
  const box = document.createElement("div");
  box.className = "instructions";

  const toggle = document.createElement("button");
  toggle.type = "button";
  toggle.className = "instructions-toggle";
  toggle.textContent = "Click to Expand Instruction";

  const body = document.createElement("div");
  body.className = "instructions-body";
  for (const paragraph of INSTRUCTION_TEXT.split("\n\n")) {
    const p = document.createElement("p");
    p.textContent = paragraph;
    body.appendChild(p);
  }
  body.hidden = started;

  toggle.addEventListener("click", () => {
    body.hidden = !body.hidden;
  });

  box.append(toggle, body);
  return box;
}
