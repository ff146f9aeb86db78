import threading
import time
import typing as t

from pydantic import BaseModel, Field


class Event(BaseModel):
    timestamp: float = Field(default_factory=time.time)
    name: str
    data: t.Any | None = None


_listeners: list[t.Callable[[Event], None]] = []
# replicas publish from worker threads
_lock = threading.Lock()


def add_event_listener(listener: t.Callable[[Event], None]) -> None:
    """Add a listener function for events."""

    with _lock:
        if listener not in _listeners:
            _listeners.append(listener)


def remove_event_listener(listener: t.Callable[[Event], None]) -> None:
    with _lock:
        if listener in _listeners:
            _listeners.remove(listener)


def on_event(name: str, data: t.Any | None = None) -> Event:
    """Register an event and dispatch it to every listener."""

    event = Event(name=name, data=data)
    with _lock:
        listeners = list(_listeners)

    for listener in listeners:
        listener(event)

    return event
