import pytest

from braidlab._text import load_config_document, parse_float_grid, read_sysfs_int


def test_read_sysfs_int(tmp_path):
    assert read_sysfs_int("/not_a_real_file/cpu.cfs_quota_us") is None
    p = tmp_path / "cpu.cfs_quota_us"
    p.write_text("150000\n")
    assert read_sysfs_int(p) == 150000
    p.write_text("max\n")
    assert read_sysfs_int(p) is None


def test_load_config_document(tmp_path):
    assert load_config_document("{seed: 3, threads: 1}") == {"seed": 3, "threads": 1}

    p = tmp_path / "cfg.yaml"
    p.write_text("system:\n  kind: ten_qubit\n")
    assert load_config_document(str(p)) == {"system": {"kind": "ten_qubit"}}

    with pytest.raises(ValueError, match="inline config"):
        load_config_document("just-a-word")

    p.write_text("- 1\n- 2\n")
    with pytest.raises(ValueError, match="cfg.yaml"):
        load_config_document(str(p))


def test_load_config_document_remote(httpserver):
    httpserver.expect_request("/sweep-s.yaml").respond_with_data(
        """
    operation: sweep
    seed: 3
    """
    )
    content = load_config_document(httpserver.url_for("/sweep-s.yaml"))
    assert content == {"operation": "sweep", "seed": 3}
    with pytest.raises(FileNotFoundError, match=r".*something_non_exist.yaml"):
        load_config_document(httpserver.url_for("/something_non_exist.yaml"))


def test_parse_float_grid():
    assert parse_float_grid("2:3:0.5") == [2.0, 2.5, 3.0]
    assert parse_float_grid("2:10:0.1")[-1] == 10.0
    assert len(parse_float_grid("2:10:0.1")) == 81
    assert parse_float_grid("1, 2.5,4") == [1.0, 2.5, 4.0]
    assert parse_float_grid("6.3") == [6.3]

    for bad in ("1:2", "1:2:3:4", "3:1:1", "1:2:0", "a,b", ",", "1:x:1"):
        with pytest.raises(ValueError):
            parse_float_grid(bad)
