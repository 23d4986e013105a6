/** Stroke geometry helpers, kept pure so they are trivially testable.
 *
 * Strokes live in normalized [0,1]^2 canvas coordinates from capture
 * onward; the server does its own resampling, so these points are sent
 * exactly as captured.
 */

import type { Point, Stroke } from "./api.js";

const clamp01 = (v: number) => Math.min(1, Math.max(0, v));

/** Map pixel points to [0,1]^2 by the canvas dimensions. */
export function normalizeStroke(points: Point[], width: number, height: number): Stroke {
  return points.map(([x, y]) => [clamp01(x / width), clamp01(y / height)]);
}

/** A click without movement is not a stroke. */
export function isDegenerate(stroke: Stroke): boolean {
  if (stroke.length < 2) return true;
  const [x0, y0] = stroke[0];
  return stroke.every(([x, y]) => x === x0 && y === y0);
}

/** Bounding box [left, top, right, bottom] over all points, or null if empty. */
export function strokesBounds(strokes: Stroke[]): [number, number, number, number] | null {
  let left = Infinity;
  let top = Infinity;
  let right = -Infinity;
  let bottom = -Infinity;
  for (const stroke of strokes) {
    for (const [x, y] of stroke) {
      if (x < left) left = x;
      if (y < top) top = y;
      if (x > right) right = x;
      if (y > bottom) bottom = y;
    }
  }
  if (left > right) return null;
  return [left, top, right, bottom];
}
