/** Canvas wiring: pointer events in, completed normalized strokes out. */

import type { Point, Stroke } from "./api.js";
import type { ConfirmedIcon } from "./state.js";
import { isDegenerate, normalizeStroke } from "./strokes.js";

export class SketchPad {
  /** Called once per completed stroke, at pointer-up. */
  onStroke: (stroke: Stroke) => void = () => {};

  private ctx: CanvasRenderingContext2D | null;
  private drag: Point[] = [];
  private drawing = false;

  constructor(private canvas: HTMLCanvasElement) {
    this.ctx = canvas.getContext("2d");
    canvas.addEventListener("pointerdown", (e) => this.start(e));
    canvas.addEventListener("pointermove", (e) => this.move(e));
    canvas.addEventListener("pointerup", (e) => this.finish(e));
    canvas.addEventListener("pointercancel", () => this.cancel());
  }

  private start(e: PointerEvent): void {
    e.preventDefault();
    try {
      this.canvas.setPointerCapture?.(e.pointerId);
    } catch {
      // capture is cosmetic; environments without it still work
    }
    this.drawing = true;
    this.drag = [this.position(e)];
  }

  private move(e: PointerEvent): void {
    if (!this.drawing) return;
    const point = this.position(e);
    const last = this.drag[this.drag.length - 1];
    if (point[0] === last[0] && point[1] === last[1]) return;
    this.drag.push(point);
    this.segment(last, point);
  }

  private finish(e: PointerEvent): void {
    if (!this.drawing) return;
    this.move(e);
    this.drawing = false;
    const stroke = normalizeStroke(this.drag, this.canvas.width, this.canvas.height);
    this.drag = [];
    if (!isDegenerate(stroke)) this.onStroke(stroke);
  }

  private cancel(): void {
    this.drawing = false;
    this.drag = [];
  }

  /** Pointer position in canvas pixel coordinates. */
  private position(e: PointerEvent): Point {
    const rect = this.canvas.getBoundingClientRect();
    const w = rect.width || this.canvas.width;
    const h = rect.height || this.canvas.height;
    const x = ((e.clientX - rect.left) / w) * this.canvas.width;
    const y = ((e.clientY - rect.top) / h) * this.canvas.height;
    return [x, y];
  }

  /** Repaint everything: confirmed icons as labeled boxes, then strokes. */
  paint(strokes: Stroke[], icons: ConfirmedIcon[]): void {
    const ctx = this.ctx;
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);

    ctx.strokeStyle = "#7aa2f7";
    ctx.fillStyle = "#7aa2f7";
    ctx.lineWidth = 1;
    ctx.font = "12px sans-serif";
    for (const icon of icons) {
      const [l, t, r, b] = icon.bbox;
      ctx.strokeRect(l * width, t * height, (r - l) * width, (b - t) * height);
      ctx.fillText(icon.iconClass, l * width + 3, t * height + 13);
    }

    ctx.strokeStyle = "#e8e8e8";
    ctx.lineWidth = 2;
    for (const stroke of strokes) {
      ctx.beginPath();
      ctx.moveTo(stroke[0][0] * width, stroke[0][1] * height);
      for (const [x, y] of stroke.slice(1)) ctx.lineTo(x * width, y * height);
      ctx.stroke();
    }
  }

  private segment(from: Point, to: Point): void {
    const ctx = this.ctx;
    if (!ctx) return;
    ctx.strokeStyle = "#e8e8e8";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(from[0], from[1]);
    ctx.lineTo(to[0], to[1]);
    ctx.stroke();
  }
}
