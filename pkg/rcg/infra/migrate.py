from __future__ import annotations

import logging

from sqlalchemy.engine import make_url

from . import db
from .models import Base

log = logging.getLogger(__name__)


def migrate() -> None:
    assert db.engine is not None, "Engine not initialized"
    with db.engine.begin() as conn:
        Base.metadata.create_all(conn)
    db.set_sqlite_pragmas()
    log.debug("Run store schema ready at %s", db.engine.url)


def open_store(dsn: str) -> None:
    """Initialize engine, session factory and schema for ``dsn``."""
    if db.engine is not None and db.engine.url != make_url(dsn):
        db.dispose()
    db.init_engine(dsn)
    db.init_sessionmaker()
    migrate()
