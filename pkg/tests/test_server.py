import json
import threading
import urllib.error
import urllib.request

import pytest

from signface import LayerPolicy, MappingMode, PleasureArousal, grid_save, pa_to_pose
from signface.cli import load_default_grid, load_default_lexicon
from signface.server import ServeContext, make_server

from conftest import CORPUS_DIR


@pytest.fixture(scope="module")
def server_url():
    ctx = ServeContext(grid=load_default_grid(), lexicon=load_default_lexicon(),
                       policy=LayerPolicy.default())
    server = make_server(ctx, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


def _get(url):
    with urllib.request.urlopen(url, timeout=10) as resp:
        return resp.status, resp.read()


def _post(url, body):
    req = urllib.request.Request(url, data=body.encode("utf-8"), method="POST")
    with urllib.request.urlopen(req, timeout=10) as resp:
        return resp.status, resp.read()


def test_health(server_url):
    status, body = _get(server_url + "/health")
    assert status == 200
    assert json.loads(body) == {"ok": True}


def test_grid_endpoint_matches_grid_save(server_url):
    status, body = _get(server_url + "/grid")
    assert status == 200
    assert body == grid_save(load_default_grid())


def test_pose_center_is_neutral(server_url):
    status, body = _get(server_url + "/pose?p=0&a=0")
    assert status == 200
    doc = json.loads(body)
    assert all(v == 0.0 for v in doc["values"])
    assert len(doc["units"]) == 20


def test_pose_corner_reproduction(server_url):
    status, body = _get(server_url + "/pose?p=1&a=1")
    assert status == 200
    doc = json.loads(body)
    expected = pa_to_pose(PleasureArousal(1, 1), load_default_grid(),
                          MappingMode.CONTINUOUS)
    assert doc["values"] == [round(v, 6) for v in expected.values]


def test_pose_out_of_range(server_url):
    with pytest.raises(urllib.error.HTTPError) as err:
        _get(server_url + "/pose?p=2&a=0")
    assert err.value.code == 400
    doc = json.loads(err.value.read())
    assert doc["error"]["kind"] == "OutOfRange"


def test_pose_missing_param(server_url):
    with pytest.raises(urllib.error.HTTPError) as err:
        _get(server_url + "/pose?p=1")
    assert err.value.code == 400


def test_unknown_endpoint_404(server_url):
    with pytest.raises(urllib.error.HTTPError) as err:
        _get(server_url + "/nope")
    assert err.value.code == 404


def test_compile_matches_cli_bytes(server_url, tmp_path):
    from signface.cli import main
    text = (CORPUS_DIR / "greeting.nmt").read_text()
    status, body = _post(server_url + "/compile?format=json", text)
    assert status == 200
    out = tmp_path / "cli.json"
    assert main(["compile", str(CORPUS_DIR / "greeting.nmt"), "-o", str(out)]) == 0
    assert body == out.read_bytes()


def test_compile_csv(server_url):
    text = (CORPUS_DIR / "wait.nmt").read_text()
    status, body = _post(server_url + "/compile?format=csv&fps=10", text)
    assert status == 200
    assert body.startswith(b"time,")
    assert len(body.strip().split(b"\n")) == int(3.4 * 10) + 2


def test_compile_overlap_error_400(server_url):
    bad = "duration 1.0\nemotion 0.0 0.8 p=1 a=1\nemotion 0.5 1.0 p=-1 a=0\n"
    with pytest.raises(urllib.error.HTTPError) as err:
        _post(server_url + "/compile", bad)
    assert err.value.code == 400
    doc = json.loads(err.value.read())
    assert doc["error"]["kind"] == "OverlapError"
    assert doc["error"]["line"] == 3


def test_compile_identical_responses(server_url):
    text = (CORPUS_DIR / "apology.nmt").read_text()
    _, first = _post(server_url + "/compile?format=json&fps=15", text)
    _, second = _post(server_url + "/compile?format=json&fps=15", text)
    assert first == second


def test_compile_discrete_mode(server_url):
    text = "duration 0.5\nemotion 0.0 0.5 p=0.6 a=0.6 attack=0 release=0\n"
    _, body = _post(server_url + "/compile?mode=discrete", text)
    doc = json.loads(body)
    expected = pa_to_pose(PleasureArousal(1, 1), load_default_grid(),
                          MappingMode.DISCRETE)
    assert doc["frames"][0] == [round(v, 6) for v in expected.values]


def test_compile_bad_fps(server_url):
    with pytest.raises(urllib.error.HTTPError) as err:
        _post(server_url + "/compile?fps=0", "duration 1.0\n")
    assert err.value.code == 400


def test_static_dir_serving(tmp_path):
    (tmp_path / "index.html").write_text("<html>ui</html>")
    ctx = ServeContext(grid=load_default_grid(), lexicon=load_default_lexicon(),
                       policy=LayerPolicy.default(), static_dir=tmp_path)
    server = make_server(ctx, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        host, port = server.server_address[:2]
        status, body = _get(f"http://{host}:{port}/")
        assert status == 200
        assert b"ui" in body
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)
