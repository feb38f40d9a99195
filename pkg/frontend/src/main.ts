// DOM wiring for the browser board.

import { BoardViewModel, outcomeBanner } from "./board";
import { Mode } from "./qcan";
import { GameSession } from "./session";
import { Snapshot } from "./types";

const GLYPHS: Record<string, string> = {
  K: "♔", Q: "♕", R: "♖", B: "♗", N: "♘", P: "♙",
  k: "♚", q: "♛", r: "♜", b: "♝", n: "♞", p: "♟",
};

const vm = new BoardViewModel();
let session: GameSession;

const boardEl = document.getElementById("board") as HTMLElement;
const bannerEl = document.getElementById("banner") as HTMLElement;
const statusEl = document.getElementById("status") as HTMLElement;
const logEl = document.getElementById("log") as HTMLElement;
const capturedEl = document.getElementById("captured") as HTMLElement;
const pickerEl = document.getElementById("promotion-picker") as HTMLElement;

function render(snapshot: Snapshot): void {
  vm.setSnapshot(snapshot);
  renderBoard();
  statusEl.textContent =
    `${snapshot.status} — ${snapshot.turn} to move — ` +
    `${snapshot.term_count} basis states — flags ${snapshot.flags}`;
  capturedEl.textContent = snapshot.captured.length
    ? "captured: " +
      snapshot.captured
        .map((c) => `${GLYPHS[c.piece] ?? c.piece}@${c.origin} (${pct(c.probability)})`)
        .join(", ")
    : "";
  if (snapshot.last_move) {
    bannerEl.textContent = outcomeBanner(
      snapshot.last_move.notation,
      snapshot.last_move.outcome,
    );
  }
  void refreshLog();
}

function pct(p: number): string {
  return `${Math.round(p * 100)}%`;
}

function renderBoard(): void {
  boardEl.replaceChildren();
  const cells = vm.cells();
  // ranks 8..1 top to bottom, files a..h left to right
  for (let rank = 7; rank >= 0; rank--) {
    for (let file = 0; file < 8; file++) {
      const cell = cells[rank * 8 + file];
      const button = document.createElement("button");
      button.className = "cell " + (((rank + file) % 2 === 0) ? "dark" : "light");
      if (cell.selected) button.classList.add("selected");
      button.dataset.square = cell.square;
      if (cell.piece) {
        const glyph = document.createElement("span");
        glyph.className = "glyph";
        glyph.textContent = GLYPHS[cell.piece] ?? cell.piece;
        glyph.style.opacity = String(Math.max(0.25, cell.probability));
        button.appendChild(glyph);
        const prob = document.createElement("span");
        prob.className = "prob";
        prob.textContent = pct(cell.probability);
        button.appendChild(prob);
      }
      if (cell.selectionIndex !== null) {
        const badge = document.createElement("span");
        badge.className = "order";
        badge.textContent = String(cell.selectionIndex + 1);
        button.appendChild(badge);
      }
      button.addEventListener("click", () => onSquareClick(cell.square));
      boardEl.appendChild(button);
    }
  }
}

function onSquareClick(square: string): void {
  const result = vm.click(square);
  if (result.kind === "needs-promotion") {
    pickerEl.classList.remove("hidden");
    renderBoard();
    return;
  }
  if (result.kind === "move") {
    void postMove(result.text);
  } else if (result.kind === "cleared") {
    bannerEl.textContent = result.reason;
  }
  renderBoard();
}

async function postMove(text: string): Promise<void> {
  try {
    const response = await session.submitMove(text);
    if (!response.accepted) {
      // rejection: show the verdict, leave the board untouched
      bannerEl.textContent = `rejected (${response.reason}): ${response.message} — repeat your turn`;
      return;
    }
    // the accepted snapshot arrives via the update stream
  } catch (err) {
    bannerEl.textContent = String(err);
  }
}

async function refreshLog(): Promise<void> {
  const moves = await session.fetchLog();
  logEl.textContent = moves.join("\n");
}

function wireControls(): void {
  for (const mode of ["standard", "split", "merge"] as Mode[]) {
    const button = document.getElementById(`mode-${mode}`) as HTMLButtonElement;
    button.addEventListener("click", () => {
      vm.setMode(mode);
      for (const other of ["standard", "split", "merge"]) {
        document
          .getElementById(`mode-${other}`)!
          .classList.toggle("active", other === mode);
      }
      renderBoard();
    });
  }
  pickerEl.querySelectorAll("button").forEach((button) => {
    button.addEventListener("click", () => {
      pickerEl.classList.add("hidden");
      const result = vm.pickPromotion(button.dataset.piece as string);
      if (result.kind === "move") void postMove(result.text);
      renderBoard();
    });
  });
  (document.getElementById("new-game") as HTMLButtonElement).addEventListener(
    "click",
    () => void session.createGame(),
  );
}

async function start(): Promise<void> {
  const base = (document.getElementById("server-url") as HTMLInputElement).value;
  session = new GameSession(base, {
    onSnapshot: render,
    onStatus: (text) => (statusEl.textContent = text),
  });
  wireControls();
  await session.createGame();
}

document.addEventListener("DOMContentLoaded", () => void start());
