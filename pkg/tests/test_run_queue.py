import pytest

from core.run_queue import (FAILED, NO_SOLUTION, PENDING, SKIPPED, SOLVED, TIMEOUT,
                            RunQueue, make_run_id)


@pytest.fixture
def queue():
    q = RunQueue()
    for k in (10, 20):
        for algo in ('abcbs', 'aecbs'):
            q.add_run('room', 'room-1.scen', 1, k, {'algo': algo})
    return q


def test_run_ids_use_label_when_given():
    q = RunQueue()
    run_id = q.add_run('room', 'room-3.scen', 3, 10, {'algo': 'aecbs', 'label': 'aecbs-cic'})
    assert run_id == 'room-s3-k10-aecbs-cic'
    assert make_run_id('room', 3, 10, 'cbs') == 'room-s3-k10-cbs'


def test_sequential_processing(queue):
    statuses = [SOLVED, TIMEOUT, NO_SOLUTION, SKIPPED]
    for status in statuses:
        assert queue.has_more_runs()
        assert queue.get_current_run()['status'] == PENDING
        queue.mark_current(status, 'scenario exhausted' if status == SKIPPED else None)
    assert not queue.has_more_runs()
    assert queue.get_current_run() is None
    assert not queue.mark_current(SOLVED)
    assert [r['status'] for r in queue.get_all_runs()] == statuses


def test_out_of_order_marking(queue):
    ids = [r['run_id'] for r in queue.get_all_runs()]
    assert queue.mark_run(ids[2], SOLVED)
    assert queue.current_index == 0
    assert queue.mark_run(ids[0], FAILED, 'boom')
    assert queue.current_index == 1
    assert not queue.mark_run('missing', SOLVED)
    failed = [r for r in queue.get_all_runs() if r['status'] == FAILED]
    assert [r['error_message'] for r in failed] == ['boom']


def test_invalid_status_rejected(queue):
    with pytest.raises(ValueError):
        queue.mark_current(PENDING)
    with pytest.raises(ValueError):
        queue.mark_current('great')


def test_summary_excludes_skipped_from_success_rate(queue):
    queue.mark_current(SOLVED)
    queue.mark_current(SKIPPED)
    queue.mark_current(TIMEOUT)
    summary = queue.get_summary()
    assert summary['total_runs'] == 4
    assert summary['no_solution'] == 0
    assert summary['pending'] == 1
    assert not summary['is_complete']
    assert summary['success_rate'] == pytest.approx(50.0)

