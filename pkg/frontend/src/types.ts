/** Payload and record shapes of the reading-service JSON API. */

export type Mode = "baseline" | "intent";
export type ItemClass = "paragraph" | "citation";

export interface ReportListing {
  report_id: string;
  query: string;
  variant: string;
}

export interface IntentInfo {
  category: string;
  kind: string;
  label: string;
  rationale: string;
}

export interface CitationEntry {
  ordinal: number;
  key: string;
  index: number | null;
  is_memory: boolean;
  title: string | null;
  snippet: string | null;
  intent?: IntentInfo;
}

export interface SegmentPayload {
  type: "text" | "claim";
  text: string;
  citations?: CitationEntry[];
}

export interface ParagraphPayload {
  id: string;
  first_sentence: string;
  text: string;
  segments: SegmentPayload[];
  intent?: IntentInfo;
}

export interface SectionPayload {
  index: number;
  title: string;
  tldr: string;
  paragraphs: ParagraphPayload[];
}

export interface ReportPayload {
  report_id: string;
  query: string;
  variant: string;
  mode: Mode;
  sections: SectionPayload[];
  candidates: Record<
    string,
    { paper_id: string; title: string; snippet: string; citation_count: number }
  >;
}

export interface AnnotationBody {
  report_id: string;
  item_class: ItemClass;
  item_id: string;
  rating: number;
  condition: Mode;
  comment?: string | null;
  annotator: string;
}

export interface MetaPayload {
  condition: Mode;
  reports: number;
}
