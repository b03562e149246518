/**
 * Application wiring: session meta, report selection, reading view,
 * rating submission, completion tracking, and export download.
 *
 * The view is read-only over reports and write-only over annotations;
 * the session's condition (baseline or intent) comes from the server
 * once and never changes within the session.
 */

import { ApiClient } from "./api.js";
import { createInstructions } from "./instructions.js";
import { renderReport } from "./render.js";
import { ViewState } from "./state.js";
import type { ItemClass, ReportPayload } from "./types.js";

export interface AppHooks {
  /** Triggers a file download; injectable for tests. */
  download?: (filename: string, content: string, type: string) => void;
  annotator?: string;
}

function browserDownload(filename: string, content: string, type: string): void {
  const blob = new Blob([content], { type });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}

export class App {
  private state: ViewState | null = null;
  private payload: ReportPayload | null = null;
  private readonly annotator: string;
  private readonly download: (f: string, c: string, t: string) => void;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    hooks: AppHooks = {}
  ) {
    this.annotator = hooks.annotator ?? `participant-${Date.now() % 100000}`;
    this.download = hooks.download ?? browserDownload;
  }

  async start(): Promise<void> {
    this.root.textContent = "";
    this.root.appendChild(createInstructions(false));

    const picker = document.createElement("div");
    picker.className = "report-picker";
    const label = document.createElement("label");
    label.textContent = "Report: ";
    const select = document.createElement("select");
    select.id = "report-select";
    const reports = await this.api.listReports();
    for (const report of reports) {
      const option = document.createElement("option");
      option.value = report.report_id;
      option.textContent = `${report.report_id} — ${report.query}`;
      select.appendChild(option);
    }
    const open = document.createElement("button");
    open.type = "button";
    open.id = "open-report";
    open.textContent = "Start reading";
    open.addEventListener("click", () => {
      if (select.value) void this.openReport(select.value);
    });
    label.appendChild(select);
    picker.append(label, open);
    this.root.appendChild(picker);

    const stage = document.createElement("div");
    stage.id = "stage";
    this.root.appendChild(stage);
  }

  async openReport(reportId: string): Promise<void> {
    const stage = this.root.querySelector<HTMLElement>("#stage");
    if (!stage) return;
    try {
      this.payload = await this.api.getReport(reportId);
    } catch (error) {
      stage.textContent = "";
      const banner = document.createElement("div");
      banner.className = "banner error-banner";
      banner.textContent =
        error instanceof Error ? error.message : "Failed to load report";
      stage.appendChild(banner);
      return;
    }
    this.state = new ViewState(this.payload, this.api.mode);
    this.renderStage();
  }

  private renderStage(): void {
    const stage = this.root.querySelector<HTMLElement>("#stage");
    if (!stage || !this.state || !this.payload) return;
    stage.textContent = "";

    const progress = document.createElement("div");
    progress.id = "progress";
    stage.appendChild(progress);

    const view = document.createElement("div");
    view.id = "report-view";
    stage.appendChild(view);

    const finish = document.createElement("div");
    finish.id = "finish";
    finish.hidden = true;
    stage.appendChild(finish);

    renderReport(view, this.payload, this.state, (itemId, itemClass, rating) =>
      this.submitRating(itemId, itemClass, rating)
    );
    this.updateProgress();
  }

  async submitRating(
    itemId: string,
    itemClass: ItemClass,
    rating: number,
    comment?: string | null
  ): Promise<void> {
    if (!this.state) throw new Error("no report open");
    await this.api.postAnnotation({
      report_id: this.state.reportId,
      item_class: itemClass,
      item_id: itemId,
      rating,
      condition: this.api.mode,
      comment: comment ?? null,
      annotator: this.annotator,
    });
    this.state.storeRating(itemId, rating, comment);
    this.updateProgress();
  }

  private updateProgress(): void {
    const progress = this.root.querySelector<HTMLElement>("#progress");
    if (!progress || !this.state) return;
    progress.textContent =
      `Rated ${this.state.ratedCount()} of ${this.state.items.length} items`;
    if (this.state.isComplete()) {
      this.showFinish();
    }
  }

  private showFinish(): void {
    const finish = this.root.querySelector<HTMLElement>("#finish");
    if (!finish || !finish.hidden) return;
    finish.hidden = false;
    finish.textContent = "";

    const done = document.createElement("h3");
    done.textContent = "All items rated — thank you!";
    finish.appendChild(done);

    const reflectionLabel = document.createElement("label");
    reflectionLabel.textContent = "Optional free-form reflection:";
    const reflection = document.createElement("textarea");
    reflection.id = "reflection";
    reflection.rows = 4;
    finish.append(reflectionLabel, reflection);

    const exportButton = document.createElement("button");
    exportButton.type = "button";
    exportButton.id = "export-annotations";
    exportButton.textContent = "Download annotations";
    exportButton.addEventListener("click", () => void this.exportAnnotations());
    finish.appendChild(exportButton);
  }

  /** Downloads the server export verbatim, plus the reflection (if any)
   * as a separate sidecar file so the export stays untouched. */
  async exportAnnotations(): Promise<void> {
    const exported = await this.api.exportAnnotations();
    if (!exported.trim()) {
      const finish = this.root.querySelector<HTMLElement>("#finish");
      if (finish) {
        const note = document.createElement("p");
        note.className = "banner";
        note.textContent = "No annotations stored in this session yet.";
        finish.appendChild(note);
      }
      return;
    }
    this.download("annotations.jsonl", exported, "application/jsonl");
    const reflection =
      this.root.querySelector<HTMLTextAreaElement>("#reflection")?.value ?? "";
    if (reflection.trim()) {
      this.download("reflection.txt", reflection, "text/plain");
    }
  }
}

export async function boot(root: HTMLElement): Promise<App> {
  const api = await ApiClient.forSession();
  const app = new App(root, api);
  await app.start();
  return app;
}
