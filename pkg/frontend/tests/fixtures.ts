/** Golden payloads generated by the backend's payload builder. */

import type { ReportPayload } from "../src/types.js";
import baseline from "./fixtures/golden_baseline.json";
import intent from "./fixtures/golden_intent.json";

export const GOLDEN_INTENT = intent as unknown as ReportPayload;
export const GOLDEN_BASELINE = baseline as unknown as ReportPayload;

export function payloads() {
  return {
    intent: structuredClone(GOLDEN_INTENT),
    baseline: structuredClone(GOLDEN_BASELINE),
  };
}
