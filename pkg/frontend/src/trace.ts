/** Expands a walk's stop list into the full cell path for animation.
 * The server reports where the finger stops; the frames in between are
 * straight scans along a row or column, the way a finger actually
 * moves. Header stops carry row or col of -1 plus the edge they sit on. */

import { TraceStop } from "./api.js";

export interface Cell {
  row: number;
  col: number;
  kind: "header" | "scan" | "stop";
  letter?: string;
  edge?: string | null;
}

function range(from: number, to: number): number[] {
  const out: number[] = [];
  const step = to >= from ? 1 : -1;
  for (let v = from; v !== to; v += step) out.push(v);
  return out;
}

/** Grid cells crossed moving from stop a to stop b, exclusive of both. */
function scanBetween(a: TraceStop, b: TraceStop): Cell[] {
  const aGrid = a.row >= 0 && a.col >= 0;
  const bGrid = b.row >= 0 && b.col >= 0;
  if (aGrid && bGrid) {
    if (a.row === b.row) {
      return range(a.col, b.col).slice(1).map((col) => ({ row: a.row, col, kind: "scan" as const }));
    }
    if (a.col === b.col) {
      return range(a.row, b.row).slice(1).map((row) => ({ row, col: a.col, kind: "scan" as const }));
    }
    return [];
  }
  if (!aGrid && bGrid) {
    // Entering the grid from a header: scan from the matching edge.
    if (a.edge === "top") return range(0, b.row).map((row) => ({ row, col: b.col, kind: "scan" as const }));
    if (a.edge === "left") return range(0, b.col).map((col) => ({ row: b.row, col, kind: "scan" as const }));
    return [];
  }
  if (aGrid && !bGrid) {
    // Leaving toward a header: scan out to the named edge.
    if (b.edge === "top") return range(a.row - 1, -1).map((row) => ({ row, col: a.col, kind: "scan" as const }));
    if (b.edge === "bottom") return range(a.row + 1, 26).map((row) => ({ row, col: a.col, kind: "scan" as const }));
    if (b.edge === "left") return range(a.col - 1, -1).map((col) => ({ row: a.row, col, kind: "scan" as const }));
    if (b.edge === "right") return range(a.col + 1, 26).map((col) => ({ row: a.row, col, kind: "scan" as const }));
  }
  return [];
}

export function expandTrace(stops: TraceStop[]): Cell[] {
  const cells: Cell[] = [];
  for (let i = 0; i < stops.length; i++) {
    const stop = stops[i];
    if (i > 0) cells.push(...scanBetween(stops[i - 1], stop));
    cells.push({
      row: stop.row,
      col: stop.col,
      kind: stop.row < 0 || stop.col < 0 ? "header" : "stop",
      letter: stop.letter,
      edge: stop.edge,
    });
  }
  return cells;
}

/** The header letter the animation must end on. */
export function finalHighlight(stops: TraceStop[]): { letter: string; edge: string | null } {
  const last = stops[stops.length - 1];
  return { letter: last.letter, edge: last.edge ?? null };
}
