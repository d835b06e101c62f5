from __future__ import annotations

from typing import Optional

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import Session, sessionmaker

engine: Optional[Engine] = None
SessionLocal: Optional[sessionmaker[Session]] = None


def init_engine(dsn: str) -> None:
    global engine
    if engine is None:
        engine = create_engine(dsn, future=True, echo=False)


def init_sessionmaker() -> None:
    global SessionLocal
    if SessionLocal is None:
        assert engine is not None, "Engine not initialized"
        SessionLocal = sessionmaker(engine, expire_on_commit=False)


def set_sqlite_pragmas() -> None:
    assert engine is not None
    if engine.dialect.name != "sqlite" or not engine.url.database:
        return
    with engine.begin() as conn:
        conn.exec_driver_sql("PRAGMA journal_mode=WAL;")


def dispose() -> None:
    """Drop the engine and session factory (tests switch databases)."""
    global engine, SessionLocal
    if engine is not None:
        engine.dispose()
    engine = None
    SessionLocal = None
