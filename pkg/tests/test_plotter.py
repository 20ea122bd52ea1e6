import matplotlib.pyplot as plt
import pytest

from core.anytime import IncumbentEvent
from core.plotter import ConvergencePlotter, convergence_figures, render_svg, render_trace_svg
from reports.curves import Curve, CurvePoint
from reports.event_log import RunRecord
from reports.templates import BenchReportTemplate


def curve(algo='aecbs', agents=10, bounds=(3.0, 1.5, 1.0)):
    points = [CurvePoint(t, b) for t, b in zip((0.0, 10.0, 100.0), bounds)]
    return Curve(map='room', agents=agents, algo=algo, params='eps0=10;res=1',
                 points=points, n_scenarios=4 if bounds else 0)


def run(algo, bounds):
    events = [IncumbentEvent(i + 1, 10.0 * (i + 1), b, 20 - i, 10, i, 10 * i)
              for i, b in enumerate(bounds)]
    return RunRecord(run_id=f"room-s1-k10-{algo}", map='room', scen=1, agents=10, algo=algo,
                     events=events, final_status='budget-exhausted', wall_ms=100.0)


def test_svg_is_byte_stable():
    curves = [curve(), curve('abcbs', bounds=(2.0, 1.2, 1.1))]
    assert render_svg(curves) == render_svg(curves)


def test_svg_has_one_line_per_curve():
    svg = render_svg([curve(), curve('abcbs', bounds=())])
    assert svg.lstrip().startswith('<?xml')
    assert 'id="curve-0"' in svg
    assert 'id="curve-1"' in svg
    assert '(no solution)' in svg


def test_custom_labels_and_axis_text():
    svg = render_svg([curve()], labels=['anytime ECBS'], xlabel='Seconds')
    assert 'anytime ECBS' in svg
    assert 'Seconds' in svg


def test_label_count_must_match():
    with pytest.raises(ValueError, match='labels'):
        render_svg([curve()], labels=['a', 'b'])
    with pytest.raises(ValueError):
        render_svg([])


def test_trace_svg():
    svg = render_trace_svg([run('aecbs', [2.0, 1.5]), run('abcbs', [1.8])])
    assert 'id="trace-0"' in svg
    assert 'id="trace-1"' in svg


def test_save_plot_formats(tmp_path):
    plotter = ConvergencePlotter()
    plotter.create_convergence_plot([curve()])
    try:
        assert plotter.save_plot(str(tmp_path / 'c.png'), dpi=50)
        assert plotter.save_plot(str(tmp_path / 'c.svg'))
        assert (tmp_path / 'c.png').read_bytes()[:4] == b'\x89PNG'
        assert '<svg' in (tmp_path / 'c.svg').read_text()
    finally:
        plotter.close()
    assert not ConvergencePlotter().save_plot(str(tmp_path / 'none.png'))


def test_convergence_figures_one_per_agent_count():
    figures = convergence_figures([curve(agents=20), curve(agents=10), curve('abcbs', agents=10)])
    try:
        assert len(figures) == 2
        assert figures[0].axes[0].get_title() == 'room, 10 agents'
    finally:
        for figure in figures:
            plt.close(figure)


def test_pdf_report(tmp_path):
    records = [run('aecbs', [2.0, 1.5]), run('abcbs', [1.8])]
    figures = convergence_figures([curve(), curve('abcbs')])
    target = tmp_path / 'report.pdf'
    try:
        assert BenchReportTemplate().create_report(str(target), records, figures,
                                                   event_log='events.jsonl')
    finally:
        for figure in figures:
            plt.close(figure)
    assert target.read_bytes().startswith(b'%PDF')
