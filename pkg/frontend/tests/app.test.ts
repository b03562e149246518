import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { payloads } from "./fixtures.js";
import { MockServer } from "./mockserver.js";

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.appendChild(root);
});

async function bootApp(condition: "baseline" | "intent") {
  const server = new MockServer(condition, payloads());
  const client = await ApiClient.forSession(server.fetch);
  const downloads: Array<{ name: string; content: string }> = [];
  const app = new App(root, client, {
    annotator: "participant-1",
    download: (name, content) => downloads.push({ name, content }),
  });
  await app.start();
  return { server, app, downloads };
}

/** Population mean/std computed directly from the definition. */
function directFormula(ratings: number[]): { mean: number; std: number } {
  const mean = ratings.reduce((a, b) => a + b, 0) / ratings.length;
  const variance =
    ratings.reduce((a, r) => a + (r - mean) ** 2, 0) / ratings.length;
  return { mean, std: Math.sqrt(variance) };
}

describe("session flow", () => {
  it("shows instructions with a re-expand toggle", async () => {
    await bootApp("intent");
    const toggle = root.querySelector(".instructions-toggle")!;
    expect(toggle.textContent).toBe("Click to Expand Instruction");
    const body = root.querySelector(".instructions-body") as HTMLElement;
    expect(body.hidden).toBe(false);
    (toggle as HTMLButtonElement).click();
    expect(body.hidden).toBe(true);
    (toggle as HTMLButtonElement).click();
    expect(body.hidden).toBe(false);
  });

  it("lists reports and opens one in the session mode", async () => {
    const { app } = await bootApp("intent");
    const select = root.querySelector("#report-select") as HTMLSelectElement;
    expect(select.options).toHaveLength(1);
    await app.openReport("r-golden");
    expect(root.querySelector(".intent-chip")).not.toBeNull();
    expect(root.querySelector("#progress")?.textContent).toBe(
      "Rated 0 of 3 items"
    );
  });

  it("baseline sessions render no intents and never request them", async () => {
    const { server, app } = await bootApp("baseline");
    await app.openReport("r-golden");
    expect(root.querySelectorAll(".intent-chip")).toHaveLength(0);
    expect(server.requests.some((r) => r.includes("mode=intent"))).toBe(false);
  });
});

describe("rating and completion", () => {
  it("posts ratings with the right class and enables the finish screen", async () => {
    const { server, app } = await bootApp("intent");
    await app.openReport("r-golden");

    await app.submitRating("s0.p0", "paragraph", 5);
    expect(server.annotations.at(-1)).toMatchObject({
      item_class: "paragraph",
      item_id: "s0.p0",
      rating: 5,
      condition: "intent",
      annotator: "participant-1",
    });
    expect((root.querySelector("#finish") as HTMLElement).hidden).toBe(true);

    await app.submitRating("s0.p0.c0", "citation", 4);
    await app.submitRating("s0.p0.c1", "citation", 3);
    expect(root.querySelector("#progress")?.textContent).toBe(
      "Rated 3 of 3 items"
    );
    const finish = root.querySelector("#finish") as HTMLElement;
    expect(finish.hidden).toBe(false);
    expect(finish.querySelector("#reflection")).not.toBeNull();
    expect(finish.textContent).toContain("Optional free-form reflection");
  });

  it("revising a rating keeps only the latest in the export", async () => {
    const { app, downloads } = await bootApp("intent");
    await app.openReport("r-golden");
    await app.submitRating("s0.p0", "paragraph", 4);
    await app.submitRating("s0.p0", "paragraph", 5);
    await app.submitRating("s0.p0.c0", "citation", 4);
    await app.submitRating("s0.p0.c1", "citation", 3);
    await app.exportAnnotations();
    const lines = downloads[0].content
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line));
    expect(lines).toHaveLength(3);
    const paragraphRatings = lines.filter(
      (record) => record.item_class === "paragraph"
    );
    expect(paragraphRatings).toEqual([
      expect.objectContaining({ item_id: "s0.p0", rating: 5 }),
    ]);
  });

  it("export summary matches the direct-formula oracle (3 items)", async () => {
    const { app, downloads } = await bootApp("intent");
    await app.openReport("r-golden");
    await app.submitRating("s0.p0", "paragraph", 5);
    await app.submitRating("s0.p0.c0", "citation", 4);
    await app.submitRating("s0.p0.c1", "citation", 3);
    await app.exportAnnotations();

    const lines = downloads[0].content
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line));
    expect(lines).toHaveLength(3);

    const citationRatings = lines
      .filter((record) => record.item_class === "citation")
      .map((record) => record.rating as number);
    const summary = directFormula(citationRatings);
    expect(summary.mean).toBeCloseTo(3.5, 10);
    expect(summary.std).toBeCloseTo(0.5, 10);

    const paragraphRatings = lines
      .filter((record) => record.item_class === "paragraph")
      .map((record) => record.rating as number);
    expect(directFormula(paragraphRatings)).toEqual({ mean: 5, std: 0 });
  });

  it("download carries the verbatim export plus a reflection sidecar", async () => {
    const { server, app, downloads } = await bootApp("intent");
    await app.openReport("r-golden");
    await app.submitRating("s0.p0", "paragraph", 5);
    await app.submitRating("s0.p0.c0", "citation", 4);
    await app.submitRating("s0.p0.c1", "citation", 3);
    const reflection = root.querySelector("#reflection") as HTMLTextAreaElement;
    reflection.value = "The intents guided my reading.";
    await app.exportAnnotations();

    const serverExport = await (
      await server.fetch("/api/annotations/export")
    ).text();
    expect(downloads[0]).toEqual({
      name: "annotations.jsonl",
      content: serverExport,
    });
    expect(downloads[1]).toEqual({
      name: "reflection.txt",
      content: "The intents guided my reading.",
    });
  });
});
