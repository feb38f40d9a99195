// Server document shapes (all versioned with `version: 1`).

export interface SquareCell {
  square: string;
  piece: string | null;
  probability: number;
}

export interface CapturedEntry {
  ancilla: number;
  piece: string;
  origin: string;
  ply: number;
  probability: number;
}

export interface Snapshot {
  version: number;
  status: string;
  turn: string;
  flags: string;
  squares: SquareCell[];
  captured: CapturedEntry[];
  last_move: { notation: string; outcome: number | null } | null;
  term_count: number;
  move_count: number;
}

export interface MoveResponse {
  version: number;
  accepted: boolean;
  reason: string | null;
  message: string;
  outcome: number | null;
  notation: string;
  status: string;
  warnings: string[];
  snapshot: Snapshot;
}

export interface CreateResponse {
  version: number;
  id: string;
  snapshot: Snapshot;
}
