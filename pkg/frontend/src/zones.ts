/** The 12 positional query prefixes and what they restrict a term to. */

export const POSITIONAL_PREFIXES: ReadonlyArray<readonly [string, string]> = [
  ["tl", "top-left quadrant"],
  ["lt", "top-left quadrant"],
  ["tr", "top-right quadrant"],
  ["rt", "top-right quadrant"],
  ["bl", "bottom-left quadrant"],
  ["lb", "bottom-left quadrant"],
  ["br", "bottom-right quadrant"],
  ["rb", "bottom-right quadrant"],
  ["t", "top half"],
  ["b", "bottom half"],
  ["l", "left half"],
  ["r", "right half"],
];
