// Live game session: REST for state/moves, a websocket for push updates.
// Snapshots render in arrival order; on connection loss we reconnect and
// refetch so no accepted move is ever missed. The board never mutates
// optimistically — only server events change it.

import { CreateResponse, MoveResponse, Snapshot } from "./types";

export interface SessionCallbacks {
  onSnapshot: (snapshot: Snapshot) => void;
  onStatus?: (text: string) => void;
}

export interface Transport {
  fetchJson(url: string, init?: RequestInit): Promise<unknown>;
  openSocket(url: string, onMessage: (data: unknown) => void, onClose: () => void): () => void;
}

export const browserTransport: Transport = {
  async fetchJson(url: string, init?: RequestInit): Promise<unknown> {
    const response = await fetch(url, init);
    if (!response.ok) {
      throw new Error(`${url}: HTTP ${response.status}`);
    }
    return response.json();
  },
  openSocket(url, onMessage, onClose) {
    const socket = new WebSocket(url);
    socket.onmessage = (event) => onMessage(JSON.parse(event.data));
    socket.onclose = onClose;
    return () => {
      socket.onclose = null;
      socket.close();
    };
  },
};

export class GameSession {
  readonly baseUrl: string;
  gameId: string | null = null;
  private callbacks: SessionCallbacks;
  private transport: Transport;
  private closeSocket: (() => void) | null = null;
  private reconnectDelayMs = 500;
  closed = false;

  constructor(baseUrl: string, callbacks: SessionCallbacks, transport: Transport = browserTransport) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.callbacks = callbacks;
    this.transport = transport;
  }

  async createGame(position?: string, seed?: number): Promise<string> {
    const body = JSON.stringify({ position: position ?? null, seed: seed ?? null });
    const created = (await this.transport.fetchJson(`${this.baseUrl}/games`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body,
    })) as CreateResponse;
    await this.bind(created.id, created.snapshot);
    return created.id;
  }

  async bind(gameId: string, initial?: Snapshot): Promise<void> {
    this.gameId = gameId;
    if (initial) {
      this.callbacks.onSnapshot(initial);
    } else {
      await this.refetch();
    }
    this.subscribe();
  }

  async refetch(): Promise<void> {
    if (!this.gameId) return;
    const body = (await this.transport.fetchJson(`${this.baseUrl}/games/${this.gameId}`)) as {
      snapshot: Snapshot;
    };
    this.callbacks.onSnapshot(body.snapshot);
  }

  private subscribe(): void {
    if (!this.gameId || this.closed) return;
    const wsUrl =
      this.baseUrl.replace(/^http/, "ws") + `/games/${this.gameId}/updates`;
    this.closeSocket = this.transport.openSocket(
      wsUrl,
      (data) => this.callbacks.onSnapshot(data as Snapshot),
      () => {
        if (this.closed) return;
        this.callbacks.onStatus?.("connection lost; reconnecting");
        setTimeout(() => {
          void this.refetch().then(() => this.subscribe());
        }, this.reconnectDelayMs);
      },
    );
  }

  async submitMove(text: string): Promise<MoveResponse> {
    if (!this.gameId) throw new Error("no game bound");
    return (await this.transport.fetchJson(`${this.baseUrl}/games/${this.gameId}/moves`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ move: text }),
    })) as MoveResponse;
  }

  async fetchLog(): Promise<string[]> {
    if (!this.gameId) return [];
    const body = (await this.transport.fetchJson(
      `${this.baseUrl}/games/${this.gameId}/log`,
    )) as { moves: string[] };
    return body.moves;
  }

  close(): void {
    this.closed = true;
    this.closeSocket?.();
  }
}
