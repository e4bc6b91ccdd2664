"""Optional dictionary fetcher with an on-disk page cache.

Cached pages are UTF-8 files named ``<sha256(url)>.html``; an ``index.json``
sidecar maps hashes back to URLs and fetch times. Everything downstream runs
from the cache (or from bundled fixture pages in the same format), so the
fetcher only matters for full reproduction against the live site.

A category listing page is expected to link its entry pages from within a
``<div class="category-list">``; a ``rel="next"`` anchor continues a paged
listing.
"""

from __future__ import annotations

import hashlib
import json
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from html.parser import HTMLParser
from pathlib import Path
from urllib.parse import urljoin

from .records import RawEntry

USER_AGENT = "nomtax/0.1 (batch lexicon pipeline)"


@dataclass(frozen=True)
class FetchError:
    url: str
    message: str


def url_hash(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()


class _ListingParser(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.links: list[str] = []
        self.next_url: str | None = None
        self._in_listing = 0

    def handle_starttag(self, tag, attrs):
        a = dict(attrs)
        cls = set((a.get("class") or "").split())
        if tag == "div":
            if "category-list" in cls:
                self._in_listing += 1
            elif self._in_listing:
                self._in_listing += 1
        elif tag == "a":
            href = a.get("href")
            if not href:
                return
            if a.get("rel") == "next":
                self.next_url = href
            elif self._in_listing:
                self.links.append(href)

    def handle_endtag(self, tag):
        if tag == "div" and self._in_listing:
            self._in_listing -= 1


def _get(url: str, timeout: float) -> str:
    req = urllib.request.Request(url, headers={"User-Agent": USER_AGENT})
    with urllib.request.urlopen(req, timeout=timeout) as resp:
        return resp.read().decode("utf-8")


def _load_index(cache_dir: Path) -> dict:
    index_path = cache_dir / "index.json"
    if index_path.exists():
        return json.loads(index_path.read_text(encoding="utf-8"))
    return {}


def _save_index(cache_dir: Path, index: dict) -> None:
    (cache_dir / "index.json").write_text(
        json.dumps(index, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def fetch_category_pages(
    base_url: str,
    category: str,
    cache_dir: str | Path,
    rate_limit: float,
    timeout: float = 10.0,
) -> tuple[list[RawEntry], list[FetchError]]:
    """Fetch every entry page under a category, persisting to the cache.

    Cached pages are never refetched. Per-page failures are recorded and the
    fetch continues; a dead listing yields an empty result plus errors.
    """
    if rate_limit <= 0:
        raise ValueError("rate_limit must be > 0 requests per second")
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    index = _load_index(cache_dir)
    errors: list[FetchError] = []
    entries: list[RawEntry] = []
    interval = 1.0 / rate_limit
    last_request = 0.0

    def throttled_get(url: str) -> str:
        nonlocal last_request
        wait = interval - (time.monotonic() - last_request)
        if wait > 0:
            time.sleep(wait)
        last_request = time.monotonic()
        return _get(url, timeout)

    # walk listing pages; listings cache as `.listing` so a warm cache makes
    # zero network requests (at the cost of never seeing new entries until
    # the cache is cleared)
    page_urls: list[str] = []
    listing_url: str | None = urljoin(base_url.rstrip("/") + "/", f"category/{category}")
    while listing_url:
        listing_path = cache_dir / f"{url_hash(listing_url)}.listing"
        if listing_path.exists():
            listing_html = listing_path.read_text(encoding="utf-8")
        else:
            try:
                listing_html = throttled_get(listing_url)
            except (urllib.error.URLError, OSError, ValueError) as exc:
                errors.append(FetchError(listing_url, f"listing fetch failed: {exc}"))
                break
            listing_path.write_text(listing_html, encoding="utf-8")
        parser = _ListingParser()
        parser.feed(listing_html)
        parser.close()
        page_urls.extend(urljoin(listing_url, href) for href in parser.links)
        listing_url = urljoin(listing_url, parser.next_url) if parser.next_url else None

    if not page_urls and not errors:
        errors.append(FetchError(base_url, f"category {category!r} lists no pages"))
        return [], errors

    for url in page_urls:
        h = url_hash(url)
        page_path = cache_dir / f"{h}.html"
        if page_path.exists():
            meta = index.get(h, {})
            entries.append(
                RawEntry(
                    source_url=meta.get("url", url),
                    body=page_path.read_text(encoding="utf-8"),
                    fetched_at=float(meta.get("fetched_at", page_path.stat().st_mtime)),
                )
            )
            continue
        try:
            body = throttled_get(url)
        except (urllib.error.URLError, OSError, ValueError) as exc:
            errors.append(FetchError(url, str(exc)))
            continue
        if not body:
            errors.append(FetchError(url, "empty response body"))
            continue
        fetched_at = time.time()
        page_path.write_text(body, encoding="utf-8")
        index[h] = {"url": url, "fetched_at": fetched_at}
        _save_index(cache_dir, index)
        entries.append(RawEntry(source_url=url, body=body, fetched_at=fetched_at))

    return entries, errors


def load_cached_pages(cache_dir: str | Path) -> list[RawEntry]:
    """All cached/fixture pages, ordered by filename (offline entry point)."""
    cache_dir = Path(cache_dir)
    index = _load_index(cache_dir)
    entries = []
    for page_path in sorted(cache_dir.glob("*.html")):
        meta = index.get(page_path.stem, {})
        entries.append(
            RawEntry(
                source_url=meta.get("url", page_path.name),
                body=page_path.read_text(encoding="utf-8"),
                fetched_at=float(meta.get("fetched_at", 0.0)),
            )
        )
    return entries
