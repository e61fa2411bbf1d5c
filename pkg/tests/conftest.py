"""Shared fixtures: live HTTP nodes for client/CLI tests."""

import socket
import threading
import time

import pytest
import uvicorn

from pchain.config import NodeConfig
from pchain.node import Node
from pchain.service import create_app


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture
def start_node(tmp_path):
    """Factory fixture: boot a node with an HTTP server, return its base URL.

    Each call gets its own block log under tmp_path; everything is shut down
    when the test finishes.
    """
    running = []

    def boot(**overrides) -> str:
        port = _free_port()
        overrides.setdefault("block_log_path", str(tmp_path / f"node{len(running)}.blocklog"))
        config = NodeConfig(listen_host="127.0.0.1", listen_port=port, **overrides)
        node = Node(config)
        server = uvicorn.Server(uvicorn.Config(
            create_app(node), host="127.0.0.1", port=port, log_level="warning",
        ))
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        deadline = time.monotonic() + 15
        while not server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("node server did not start in time")
            time.sleep(0.01)
        running.append((server, thread))
        return f"http://127.0.0.1:{port}"

    yield boot

    for server, thread in running:
        server.should_exit = True
        thread.join(timeout=15)
