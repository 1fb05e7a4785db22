import pytest

from magbot.scenario import (ScenarioError, load_scenario, parse_scenario,
                             scenario_text)


def test_empty_scenario_is_all_defaults():
    sc = parse_scenario("")
    assert sc.geometry.k == 156.0
    assert sc.geometry.z_m == 1.0
    assert sc.grid.nx == 4 and sc.grid.ny == 3
    assert sc.workspace.z_range == (205.0, 280.0)
    assert sc.motion.v_max == 500.0
    assert sc.pid_set == 1
    assert sc.dock_tol.pos_tol == 0.5


def test_flight_altitude_override():
    sc = parse_scenario("z_m = 2.5\n")
    assert sc.geometry.z_m == 2.5
    # distance limits re-derive against the shifted altitude
    assert sc.geometry.d_max != parse_scenario("").geometry.d_max


def test_bad_value_reports_line_number():
    text = "# comment line\n\nk = -5\n"
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text)
    assert "line 3" in str(exc.value)


def test_unknown_key_rejected_with_line():
    with pytest.raises(ScenarioError) as exc:
        parse_scenario("frobnicate = 1\n")
    assert "line 1" in str(exc.value) and "frobnicate" in str(exc.value)


def test_unknown_section_rejected():
    with pytest.raises(ScenarioError) as exc:
        parse_scenario("[warp_drive]\n")
    assert "line 1" in str(exc.value)


def test_malformed_line_rejected():
    with pytest.raises(ScenarioError) as exc:
        parse_scenario("just some words\n")
    assert "line 1" in str(exc.value)


def test_sections_and_comments_parse():
    text = """
    [geometry]
    k = 150        # shorter legs
    [grid]
    nx = 5
    ny = 4
    [workspace]
    z_min = 210
    z_max = 270
    """
    sc = parse_scenario(text)
    assert sc.geometry.k == 150.0
    assert (sc.grid.nx, sc.grid.ny) == (5, 4)
    assert sc.workspace.z_range == (210.0, 270.0)


def test_custom_pid_needs_all_four():
    with pytest.raises(ScenarioError):
        parse_scenario("kp = 20\ntn = 0.1\n")
    sc = parse_scenario("kp = 20\ntn = 0.1\ntv = 0.05\nt1 = 0.01\n")
    assert sc.pid_custom is not None and sc.pid_custom.kp == 20.0


def test_unreachable_height_band_rejected():
    with pytest.raises(ScenarioError):
        parse_scenario("z_max = 400\n")


def test_parse_emit_parse_fixed_point():
    base = parse_scenario("k = 156.5\nnx = 5\npayload_mass = 0.75\nseed = 7\n")
    text = scenario_text(base)
    again = parse_scenario(text)
    assert again == base
    assert scenario_text(again) == text


def test_emit_round_trips_arbitrary_floats():
    sc = parse_scenario("tile_edge = 239.87654321987\n")
    again = parse_scenario(scenario_text(sc))
    assert again.grid.tile_edge == sc.grid.tile_edge


def test_load_scenario_none_is_defaults():
    assert load_scenario(None) == parse_scenario("")
