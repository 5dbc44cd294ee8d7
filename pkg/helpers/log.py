from dataclasses import dataclass, field
from typing import Any


@dataclass
class LogItem:
    no: int
    type: str = ""
    heading: str = ""
    content: str = ""
    kvps: dict[str, Any] = field(default_factory=dict)

    def update(self, heading=None, content=None, kvps=None):
        if heading is not None:
            self.heading = heading
        if content is not None:
            self.content = content
        if kvps is not None:
            self.kvps.update(kvps)
        return self


class Log:
    """In-memory record of one verification run; reports are assembled from its items."""

    def __init__(self):
        self.items: list[LogItem] = []

    def log(self, type="", heading="", content="", kvps=None):
        item = LogItem(no=len(self.items), type=type, heading=heading, content=content, kvps=dict(kvps or {}))
        self.items.append(item)
        return item

    def of_type(self, type: str) -> list[LogItem]:
        return [item for item in self.items if item.type == type]
