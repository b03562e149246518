/**
 * Session view state: fixed mode, fold state, and rating progress.
 *
 * The ratable items of a report are enumerated once from its payload;
 * every rating widget maps onto exactly one of these item ids, and the
 * finish screen unlocks when all of them carry a stored rating.
 */

import type { ItemClass, Mode, ReportPayload } from "./types.js";

export interface RatableItem {
  itemId: string;
  itemClass: ItemClass;
}

export interface StoredRating {
  rating: number;
  comment?: string | null;
}

export function enumerateItems(payload: ReportPayload): RatableItem[] {
  const items: RatableItem[] = [];
  for (const section of payload.sections) {
    for (const paragraph of section.paragraphs) {
      items.push({ itemId: paragraph.id, itemClass: "paragraph" });
      for (const segment of paragraph.segments) {
        for (const citation of segment.citations ?? []) {
          items.push({
            itemId: `${paragraph.id}.c${citation.ordinal}`,
            itemClass: "citation",
          });
        }
      }
    }
  }
  return items;
}

export class ViewState {
  readonly mode: Mode;
  readonly reportId: string;
  readonly items: RatableItem[];
  private readonly expanded = new Set<string>();
  private readonly ratings = new Map<string, StoredRating>();

  constructor(payload: ReportPayload, mode: Mode) {
    this.mode = mode;
    this.reportId = payload.report_id;
    this.items = enumerateItems(payload);
    const ids = this.items.map((item) => item.itemId);
    if (new Set(ids).size !== ids.length) {
      throw new Error("duplicate item ids in report payload");
    }
  }

  isExpanded(paragraphId: string): boolean {
    return this.expanded.has(paragraphId);
  }

  /** Returns the new fold state. */
  toggle(paragraphId: string): boolean {
    if (this.expanded.has(paragraphId)) {
      this.expanded.delete(paragraphId);
      return false;
    }
    this.expanded.add(paragraphId);
    return true;
  }

  ratingFor(itemId: string): StoredRating | undefined {
    return this.ratings.get(itemId);
  }

  /** Latest-wins: revisions overwrite the stored value. */
  storeRating(itemId: string, rating: number, comment?: string | null): void {
    if (!this.items.some((item) => item.itemId === itemId)) {
      throw new Error(`unknown item ${itemId}`);
    }
    this.ratings.set(itemId, { rating, comment });
  }

  ratedCount(): number {
    return this.ratings.size;
  }

  isComplete(): boolean {
    return this.ratings.size === this.items.length && this.items.length > 0;
  }
}
