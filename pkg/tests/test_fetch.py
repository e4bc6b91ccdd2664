"""Fetcher behavior against a local static-file server."""

import http.server
import threading

import pytest

from nomtax.fetch import fetch_category_pages, load_cached_pages, url_hash

LISTING = """<html><body>
<div class="category-list">
  <a href="/page/neno1">neno1</a>
  <a href="/page/neno2">neno2</a>
  <a href="/page/neno3">neno3</a>
</div>
</body></html>"""

PAGE = """<html><body><div class="entry">
<span class="headword">neno{n}</span>
<div class="sense-group"><span class="concord">a-/wa-</span>
<ol class="meanings"><li>meaning {n}.</li></ol></div>
</div></body></html>"""


class _Handler(http.server.BaseHTTPRequestHandler):
    hits: list[str] = []

    def do_GET(self):
        _Handler.hits.append(self.path)
        if self.path == "/category/empty":
            body = "<html><body><div class='category-list'></div></body></html>"
        elif self.path.startswith("/category/"):
            body = LISTING
        elif self.path.startswith("/page/neno"):
            body = PAGE.format(n=self.path[-1])
        else:
            self.send_error(404)
            return
        data = body.encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "text/html; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def server():
    httpd = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    _Handler.hits = []
    yield f"http://127.0.0.1:{httpd.server_address[1]}"
    httpd.shutdown()


class TestFetch:
    def test_cold_cache_persists_every_page(self, server, tmp_path):
        entries, errors = fetch_category_pages(server, "nouns", tmp_path, rate_limit=1000)
        assert errors == []
        assert len(entries) == 3
        cached = sorted(p.name for p in tmp_path.glob("*.html"))
        assert len(cached) == 3
        for e in entries:
            assert (tmp_path / f"{url_hash(e.source_url)}.html").read_text() == e.body

    def test_warm_cache_makes_zero_network_requests(self, server, tmp_path):
        fetch_category_pages(server, "nouns", tmp_path, rate_limit=1000)
        hits_before = list(_Handler.hits)
        entries, errors = fetch_category_pages(server, "nouns", tmp_path, rate_limit=1000)
        assert errors == []
        assert len(entries) == 3
        assert _Handler.hits == hits_before

    def test_unreachable_host_records_errors(self, tmp_path):
        entries, errors = fetch_category_pages(
            "http://127.0.0.1:1", "nouns", tmp_path, rate_limit=1000, timeout=0.2
        )
        assert entries == []
        assert len(errors) >= 1

    def test_empty_category_warns(self, server, tmp_path):
        entries, errors = fetch_category_pages(server, "empty", tmp_path, rate_limit=1000)
        assert entries == []
        assert any("lists no pages" in e.message for e in errors)

    def test_rate_limit_must_be_positive(self, tmp_path):
        with pytest.raises(ValueError):
            fetch_category_pages("http://x", "nouns", tmp_path, rate_limit=0)

    def test_cache_round_trips_through_offline_loader(self, server, tmp_path):
        fetch_category_pages(server, "nouns", tmp_path, rate_limit=1000)
        pages = load_cached_pages(tmp_path)
        assert len(pages) == 3
        assert all(p.source_url.startswith("http://127.0.0.1") for p in pages)
