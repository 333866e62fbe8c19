"""Tweet corpora: loading, saving and collection through providers."""

import json
import logging
import os
import urllib.error
import urllib.parse
import urllib.request
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .errors import ConfigError, MalformedLine, ProviderUnavailable, QuotaExceeded

logger = logging.getLogger(__name__)

BRAND = "Brand"
CELEBRITY = "Celebrity"


@dataclass(frozen=True)
class RawTweet:
    id: str
    entity: str
    text: str
    created_at: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("tweet id must be non-empty")

    def to_json(self) -> dict:
        obj = {"id": self.id, "entity": self.entity, "text": self.text}
        if self.created_at is not None:
            obj["created_at"] = self.created_at
        return obj


@dataclass(frozen=True)
class EntityProfile:
    name: str
    kind: str
    query_terms: tuple = ()

    def __post_init__(self):
        if self.kind not in (BRAND, CELEBRITY):
            raise ValueError(f"unknown entity kind {self.kind!r}")
        object.__setattr__(self, "query_terms", tuple(self.query_terms))

    @classmethod
    def from_json(cls, obj, kind):
        if "name" not in obj:
            raise ConfigError("entity profile without a name")
        return cls(obj["name"], obj.get("kind", kind), tuple(obj.get("query_terms", ())))


@dataclass(frozen=True)
class CampaignSpec:
    """One brand and the two celebrities it has used as endorsers."""

    brand: EntityProfile
    celebrities: tuple

    def __post_init__(self):
        object.__setattr__(self, "celebrities", tuple(self.celebrities))
        if self.brand.kind != BRAND:
            raise ConfigError(f"{self.brand.name!r} is not a Brand profile")
        if len(self.celebrities) != 2:
            raise ConfigError(
                f"campaign {self.brand.name!r} needs exactly two celebrities, "
                f"got {len(self.celebrities)}"
            )
        if any(c.kind != CELEBRITY for c in self.celebrities):
            raise ConfigError("celebrity entries must have kind Celebrity")
        names = [self.brand.name] + [c.name for c in self.celebrities]
        if len(set(names)) != 3:
            raise ConfigError(f"duplicate entity names in campaign: {names}")

    @property
    def entities(self):
        return (self.brand,) + self.celebrities

    @classmethod
    def from_json(cls, obj):
        try:
            brand = EntityProfile.from_json(obj["brand"], BRAND)
            celebs = [EntityProfile.from_json(c, CELEBRITY) for c in obj["celebrities"]]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"invalid campaign config: {exc}") from exc
        return cls(brand, tuple(celebs))

    def to_json(self):
        def prof(p):
            return {"name": p.name, "kind": p.kind, "query_terms": list(p.query_terms)}

        return {"brand": prof(self.brand), "celebrities": [prof(c) for c in self.celebrities]}


def load_campaign(path) -> CampaignSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return CampaignSpec.from_json(obj)


class Corpus(Mapping):
    """Read-only mapping of entity name to its tweets, in insertion order."""

    def __init__(self, groups=None):
        self._groups = {name: tuple(tweets) for name, tweets in (groups or {}).items()}

    @classmethod
    def from_tweets(cls, tweets: Iterable[RawTweet]) -> "Corpus":
        groups = {}
        for tw in tweets:
            groups.setdefault(tw.entity, []).append(tw)
        return cls(groups)

    def __getitem__(self, entity):
        return self._groups[entity]

    def __iter__(self) -> Iterator[str]:
        return iter(self._groups)

    def __len__(self):
        return len(self._groups)

    def __eq__(self, other):
        if isinstance(other, Corpus):
            return self._groups == other._groups
        return NotImplemented

    def __repr__(self):
        sizes = ", ".join(f"{k!r}: {len(v)}" for k, v in self._groups.items())
        return f"Corpus({{{sizes}}})"

    def tweets(self) -> Iterator[RawTweet]:
        for group in self._groups.values():
            yield from group

    def merged(self, other: "Corpus") -> "Corpus":
        groups = {k: list(v) for k, v in self._groups.items()}
        for name, tweets in other.items():
            groups.setdefault(name, []).extend(tweets)
        return Corpus(groups)


def _parse_tweet(line, line_no):
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLine(line_no, str(exc)) from exc
    if not isinstance(obj, dict):
        raise MalformedLine(line_no, "not a JSON object")
    for key in ("id", "entity", "text"):
        if key not in obj:
            raise MalformedLine(line_no, f"missing key {key!r}")
        if not isinstance(obj[key], str):
            raise MalformedLine(line_no, f"{key!r} must be a string")
    created = obj.get("created_at")
    if created is not None and not isinstance(created, str):
        raise MalformedLine(line_no, "'created_at' must be a string")
    if not obj["id"]:
        raise MalformedLine(line_no, "empty id")
    return RawTweet(obj["id"], obj["entity"], obj["text"], created)


def load_jsonl(path) -> Corpus:
    """Read a tweets JSONL file into a Corpus grouped by entity.

    Blank lines are skipped. Raises MalformedLine with the 1-based line
    number for invalid JSON or a missing id/entity/text key.
    """
    tweets = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            tweets.append(_parse_tweet(line, line_no))
    return Corpus.from_tweets(tweets)


def save_jsonl(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tw in corpus.tweets():
            fh.write(json.dumps(tw.to_json(), ensure_ascii=False) + "\n")


class TweetProvider:
    """Source of raw tweets; ``stream`` yields candidates in a stable order."""

    def stream(self, query_terms, max_count) -> Iterator[RawTweet]:
        raise NotImplementedError


class FileProvider(TweetProvider):
    """Serves tweets from a local JSONL file, matched by substring.

    Matching is case-insensitive. The entity attribution of each yielded
    tweet is left as stored; ``fetch`` re-labels it to the requesting
    entity.
    """

    def __init__(self, path):
        self.path = Path(path) if path else None

    def stream(self, query_terms, max_count):
        if self.path is None or not self.path.is_file():
            raise ProviderUnavailable(f"no backing file for file provider: {self.path}")
        terms = [t.lower() for t in query_terms]
        with open(self.path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                tw = _parse_tweet(line, line_no)
                text = tw.text.lower()
                if any(t in text for t in terms):
                    yield tw


class HttpProvider(TweetProvider):
    """Minimal client for a search endpoint speaking bearer-token auth.

    Issues ``GET {base}/search?q=...&max_results=N`` and expects
    ``{"data": [{"id", "text", "created_at"?}, ...]}``. No pagination or
    rate-limit back-off; HTTP 429 raises QuotaExceeded.
    """

    def __init__(self, base_url=None, token=None, timeout=30.0):
        self.base_url = base_url or os.environ.get("ENDORSE_API_BASE")
        self.token = token or os.environ.get("ENDORSE_API_TOKEN")
        self.timeout = timeout

    def _request(self, query_terms, max_count):
        query = " OR ".join(query_terms)
        params = urllib.parse.urlencode({"q": query, "max_results": max_count})
        url = f"{self.base_url.rstrip('/')}/search?{params}"
        return urllib.request.Request(url, headers={"Authorization": f"Bearer {self.token}"})

    def stream(self, query_terms, max_count):
        if not self.base_url or not self.token:
            raise ProviderUnavailable("ENDORSE_API_BASE and ENDORSE_API_TOKEN must be set")
        req = self._request(query_terms, max_count)
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = json.load(resp)
        except urllib.error.HTTPError as exc:
            if exc.code == 429:
                raise QuotaExceeded(f"quota exceeded at {self.base_url}") from exc
            raise ProviderUnavailable(f"HTTP {exc.code} from {self.base_url}") from exc
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise ProviderUnavailable(f"cannot reach {self.base_url}: {exc}") from exc
        for item in payload.get("data", []):
            yield RawTweet(str(item["id"]), "", item.get("text", ""), item.get("created_at"))


def fetch(provider: TweetProvider, query_terms, max_count: int, entity: str = "") -> list:
    """Collect at most ``max_count`` tweets matching any of ``query_terms``."""
    if max_count < 1:
        raise ConfigError(f"max_count must be >= 1, got {max_count}")
    if not query_terms:
        raise ConfigError("at least one query term is required")
    out = []
    for tw in provider.stream(list(query_terms), max_count):
        if entity:
            tw = RawTweet(tw.id, entity, tw.text, tw.created_at)
        out.append(tw)
        if len(out) == max_count:
            break
    return out


def make_provider(settings: dict, base_dir=None) -> TweetProvider:
    kind = settings.get("type", "file")
    if kind == "file":
        path = settings.get("path")
        if path and base_dir is not None:
            path = Path(base_dir) / path
        return FileProvider(path)
    if kind == "http":
        return HttpProvider(settings.get("base_url"), settings.get("token"))
    raise ConfigError(f"unknown provider type {kind!r}")
