"""Figure rendering for campaign results."""

from densetest.report import (
    plot_null_distribution,
    plot_power_curve,
    render_campaign_figures,
)
from densetest.simulate import KNOWN_SIGMA, SimConfig, run_campaign


def small_result():
    config = SimConfig(n=40, p=10, reps=15, h_grid=(0.0, 0.4, 0.8),
                       method=KNOWN_SIGMA, base_seed=2, workers=1)
    return run_campaign(config)[KNOWN_SIGMA]


def test_power_curve_file(tmp_path):
    path = tmp_path / "power.png"
    plot_power_curve(small_result(), path)
    assert path.stat().st_size > 0


def test_null_distribution_file(tmp_path):
    path = tmp_path / "null.png"
    plot_null_distribution(small_result(), path)
    assert path.stat().st_size > 0


def test_render_campaign_figures(tmp_path):
    stem = str(tmp_path / "campaign")
    written = render_campaign_figures(small_result(), stem)
    assert written == [f"{stem}_power.png", f"{stem}_null.png"]
    for path in written:
        assert (tmp_path / path.split("/")[-1]).stat().st_size > 0
