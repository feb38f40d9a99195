// QCAN move composition. The engine's grammar is the contract: everything
// this module emits must parse server-side, so keep the shapes in sync
// with the conformance corpus.

export const SQUARE_RE = /^[a-h][1-8]$/;

// standard (with optional promotion), split, merge — optional .m0/.m1
export const QCAN_MOVE_RE =
  /^([a-h][1-8][a-h][1-8][QRBNqrbn]?|[a-h][1-8]\^[a-h][1-8][a-h][1-8]|[a-h][1-8][a-h][1-8]\^[a-h][1-8])(\.[a-z]+[01])?$/;

export type Mode = "standard" | "split" | "merge";

export function isSquare(name: string): boolean {
  return SQUARE_RE.test(name);
}

export function composeStandard(source: string, target: string, promotion?: string): string {
  assertSquares(source, target);
  if (source === target) throw new Error("source equals target");
  let text = source + target;
  if (promotion) {
    if (!/^[QRBNqrbn]$/.test(promotion)) throw new Error(`bad promotion ${promotion}`);
    text += promotion;
  }
  return checked(text);
}

// Target order is semantic: the engine applies sqrt-iSwap toward the
// first target, so preserve the click order verbatim.
export function composeSplit(source: string, target1: string, target2: string): string {
  assertSquares(source, target1, target2);
  if (target1 === target2) throw new Error("split targets must differ");
  if (source === target1 || source === target2) throw new Error("source collides with target");
  return checked(`${source}^${target1}${target2}`);
}

export function composeMerge(source1: string, source2: string, target: string): string {
  assertSquares(source1, source2, target);
  if (source1 === source2) throw new Error("merge sources must differ");
  if (target === source1 || target === source2) throw new Error("target collides with source");
  return checked(`${source1}${source2}^${target}`);
}

function assertSquares(...names: string[]): void {
  for (const name of names) {
    if (!isSquare(name)) throw new Error(`bad square ${name}`);
  }
}

function checked(text: string): string {
  if (!QCAN_MOVE_RE.test(text)) throw new Error(`composed ungrammatical move ${text}`);
  return text;
}
