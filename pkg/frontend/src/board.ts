// Board view model: cells rendered straight from server snapshots (the
// client never computes amplitudes) plus the pending-move click builder.
// Selections always form a prefix of a grammatical QCAN move; completing
// one yields the move text to post.

import { composeMerge, composeSplit, composeStandard, Mode } from "./qcan";
import { Snapshot, SquareCell } from "./types";

export interface CellView {
  square: string;
  piece: string | null;
  probability: number; // verbatim from the snapshot
  selected: boolean;
  selectionIndex: number | null; // order badge for split/merge clicks
}

export type ClickResult =
  | { kind: "pending" }
  | { kind: "move"; text: string }
  | { kind: "needs-promotion"; source: string; target: string }
  | { kind: "cleared"; reason: string };

const SELECTIONS_NEEDED: Record<Mode, number> = {
  standard: 2,
  split: 3,
  merge: 3,
};

export class BoardViewModel {
  snapshot: Snapshot | null = null;
  mode: Mode = "standard";
  selections: string[] = [];

  setSnapshot(snapshot: Snapshot): void {
    this.snapshot = snapshot;
    this.selections = [];
  }

  setMode(mode: Mode): void {
    this.mode = mode;
    this.selections = [];
  }

  cells(): CellView[] {
    if (!this.snapshot) return [];
    return this.snapshot.squares.map((cell: SquareCell) => {
      const index = this.selections.indexOf(cell.square);
      return {
        square: cell.square,
        piece: cell.piece,
        probability: cell.probability,
        selected: index >= 0,
        selectionIndex: index >= 0 ? index : null,
      };
    });
  }

  /** Handles one square click; returns what the UI should do next. */
  click(square: string, promotionPiece?: string): ClickResult {
    if (this.selections.includes(square)) {
      this.selections = [];
      return { kind: "cleared", reason: "square already selected" };
    }
    this.selections.push(square);
    if (this.selections.length < SELECTIONS_NEEDED[this.mode]) {
      return { kind: "pending" };
    }
    const picked = this.selections;
    this.selections = [];
    try {
      if (this.mode === "split") {
        return { kind: "move", text: composeSplit(picked[0], picked[1], picked[2]) };
      }
      if (this.mode === "merge") {
        return { kind: "move", text: composeMerge(picked[0], picked[1], picked[2]) };
      }
      const [source, target] = picked;
      if (this.needsPromotion(source, target) && !promotionPiece) {
        this.selections = picked; // keep the selection while the picker is open
        return { kind: "needs-promotion", source, target };
      }
      return {
        kind: "move",
        text: composeStandard(source, target, promotionPiece),
      };
    } catch (err) {
      return { kind: "cleared", reason: String(err) };
    }
  }

  /** Completes a pending promotion with the picked piece letter. */
  pickPromotion(piece: string): ClickResult {
    if (this.selections.length !== 2) {
      return { kind: "cleared", reason: "no pending promotion" };
    }
    const [source, target] = this.selections;
    this.selections = [];
    try {
      return { kind: "move", text: composeStandard(source, target, piece) };
    } catch (err) {
      return { kind: "cleared", reason: String(err) };
    }
  }

  needsPromotion(source: string, target: string): boolean {
    if (!this.snapshot) return false;
    const cell = this.snapshot.squares.find((c) => c.square === source);
    if (!cell || !cell.piece) return false;
    return (
      (cell.piece === "P" && target[1] === "8") ||
      (cell.piece === "p" && target[1] === "1")
    );
  }
}

/** Banner line for a measurement outcome event. */
export function outcomeBanner(notation: string, outcome: number | null): string {
  if (outcome === null) return `played ${notation}`;
  if (outcome === 1) return `played ${notation} — measured 1: the move acts`;
  return `played ${notation} — measured 0: the move is held back`;
}
