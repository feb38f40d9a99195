"""Local game service.

JSON-over-HTTP endpoints plus a websocket update stream. Every response
document is versioned. Move submission takes the raw QCAN string; rule
rejections come back as structured documents (accepted=false), not
transport errors. Per-session mutation is serialized under a lock, and
subscribers receive exactly one snapshot per accepted move, in move
order.
"""

from __future__ import annotations

import asyncio
import threading
import uuid
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .errors import PositionError, QchessError
from .game import Game

API_VERSION = 1


class CreateGameRequest(BaseModel):
    position: Optional[str] = None
    seed: Optional[int] = None


class MoveRequest(BaseModel):
    move: str


class GameSession:
    """One game, one writer lock, a set of update subscribers."""

    def __init__(self, game_id: str, game: Game):
        self.game_id = game_id
        self.game = game
        self.lock = threading.Lock()
        self.subscribers: list = []  # (event loop, asyncio.Queue)

    def broadcast(self, snapshot: dict) -> None:
        for loop, queue in list(self.subscribers):
            loop.call_soon_threadsafe(queue.put_nowait, snapshot)


def create_app() -> FastAPI:
    app = FastAPI(title="qchess", version=str(API_VERSION))
    # the browser board is served from another origin (or file://)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict = {}

    def get_session(game_id: str) -> GameSession:
        session = sessions.get(game_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown game id")
        return session

    @app.post("/games")
    def create_game(request: CreateGameRequest) -> dict:
        try:
            game = Game(request.position, seed=request.seed or 0)
        except (PositionError, QchessError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"bad position: {exc}")
        game_id = uuid.uuid4().hex
        sessions[game_id] = GameSession(game_id, game)
        return {"version": API_VERSION, "id": game_id, "snapshot": game.snapshot()}

    @app.get("/games/{game_id}")
    def get_state(game_id: str) -> dict:
        session = get_session(game_id)
        with session.lock:
            return {
                "version": API_VERSION,
                "id": game_id,
                "snapshot": session.game.snapshot(),
            }

    @app.post("/games/{game_id}/moves")
    def post_move(game_id: str, request: MoveRequest) -> dict:
        session = get_session(game_id)
        with session.lock:
            result = session.game.submit_move(request.move)
            snapshot = session.game.snapshot()
            if result.accepted:
                session.broadcast(snapshot)
        return {
            "version": API_VERSION,
            "accepted": result.accepted,
            "reason": result.reason,
            "message": result.message,
            "outcome": result.outcome,
            "notation": result.notation,
            "status": result.status.value,
            "warnings": list(result.warnings),
            "snapshot": snapshot,
        }

    @app.get("/games/{game_id}/log")
    def get_log(game_id: str) -> dict:
        session = get_session(game_id)
        with session.lock:
            return {"version": API_VERSION, "moves": list(session.game.log)}

    @app.get("/games/{game_id}/log.txt", response_class=PlainTextResponse)
    def export_log(game_id: str) -> str:
        session = get_session(game_id)
        with session.lock:
            return "\n".join(session.game.log) + ("\n" if session.game.log else "")

    @app.get("/games/{game_id}/save", response_class=PlainTextResponse)
    def export_save(game_id: str) -> str:
        session = get_session(game_id)
        with session.lock:
            return session.game.save()

    @app.get("/games/{game_id}/legal-moves")
    def get_legal_moves(game_id: str) -> dict:
        session = get_session(game_id)
        with session.lock:
            return {"version": API_VERSION, "moves": session.game.legal_moves()}

    @app.websocket("/games/{game_id}/updates")
    async def stream_updates(websocket: WebSocket, game_id: str):
        session = sessions.get(game_id)
        if session is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        queue: asyncio.Queue = asyncio.Queue()
        subscriber = (asyncio.get_running_loop(), queue)
        session.subscribers.append(subscriber)
        try:
            while True:
                snapshot = await queue.get()
                await websocket.send_json(snapshot)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            if subscriber in session.subscribers:
                session.subscribers.remove(subscriber)

    return app
