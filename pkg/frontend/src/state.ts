/** Session state: the sketch in progress, the confirmed query, and the
 * last results page.
 *
 * The server is stateless, so the full query is resubmitted on every
 * change.  Monotone sequence numbers pair each response with the request
 * that produced it: a response whose number is no longer the latest is
 * stale and must never render.
 */

import type { IconQuery, Prediction, ResultRow, Stroke } from "./api.js";
import { strokesBounds } from "./strokes.js";

export interface ConfirmedIcon {
  iconClass: string;
  bbox: [number, number, number, number];
}

export class SessionStore {
  strokes: Stroke[] = [];
  predictions: Prediction[] = [];
  selected = 0;
  icons: ConfirmedIcon[] = [];
  texts: string[] = [];
  /** null until the first search lands; [] is a landed empty page. */
  results: ResultRow[] | null = null;

  private recognizeSeq = 0;
  private searchSeq = 0;

  addStroke(stroke: Stroke): void {
    this.strokes.push(stroke);
  }

  clearSketch(): void {
    this.strokes = [];
    this.predictions = [];
    this.selected = 0;
    // a recognition still in flight now describes strokes that are gone
    this.recognizeSeq++;
  }

  /** Mark every in-flight search stale without issuing a new one; used
   * when the query empties and the grid is cleared locally. */
  invalidateSearch(): void {
    this.searchSeq++;
  }

  selectPrediction(index: number): void {
    if (index >= 0 && index < this.predictions.length) this.selected = index;
  }

  /** Start a recognition request; the returned number tags its response. */
  beginRecognize(): number {
    return ++this.recognizeSeq;
  }

  /** Accept a recognition response unless a newer request superseded it. */
  acceptRecognize(seq: number, predictions: Prediction[]): boolean {
    if (seq !== this.recognizeSeq) return false;
    this.predictions = predictions;
    this.selected = 0;
    return true;
  }

  beginSearch(): number {
    return ++this.searchSeq;
  }

  acceptSearch(seq: number, rows: ResultRow[]): boolean {
    if (seq !== this.searchSeq) return false;
    this.results = rows;
    return true;
  }

  /** Turn the current sketch into a confirmed icon; null when there is
   * nothing to confirm (no strokes, or no prediction to name them). */
  confirmIcon(): ConfirmedIcon | null {
    const bbox = strokesBounds(this.strokes);
    const prediction = this.predictions[this.selected];
    if (bbox === null || prediction === undefined) return null;
    const icon = { iconClass: prediction.icon_class, bbox };
    this.icons.push(icon);
    this.clearSketch();
    return icon;
  }

  removeIcon(index: number): void {
    this.icons.splice(index, 1);
  }

  /** Add a raw text query; returns a validation message instead when the
   * input is blank. */
  addText(raw: string): string | null {
    const trimmed = raw.trim();
    if (!trimmed) return "Type a term first, e.g. settings or tl:settings";
    this.texts.push(trimmed);
    return null;
  }

  removeText(index: number): void {
    this.texts.splice(index, 1);
  }

  hasQuery(): boolean {
    return this.icons.length > 0 || this.texts.length > 0;
  }

  /** The full current query, as the search endpoint expects it. */
  query(): { icons: IconQuery[]; texts: string[] } {
    return {
      icons: this.icons.map((icon) => ({ icon_class: icon.iconClass, bbox: icon.bbox })),
      texts: [...this.texts],
    };
  }
}
