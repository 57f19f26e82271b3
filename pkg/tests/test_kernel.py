import pytest
from hypothesis import given, strategies as st

from qsim.kernel import (
    EventTag,
    PastEventError,
    SimEntity,
    Simulation,
    SimulationError,
    UnknownDestinationError,
    emit_log,
    format_time,
)


class Recorder(SimEntity):
    def __init__(self, name="rec"):
        super().__init__(name)
        self.seen = []

    def handle(self, event):
        self.seen.append((event.time, event.payload))


class Chain(SimEntity):
    """Re-schedules itself a fixed number of times."""

    def __init__(self, delays):
        super().__init__("chain")
        self.delays = list(delays)
        self.times = []

    def start(self):
        if self.delays:
            self.send(self.id, EventTag.NOOP, delay=self.delays.pop(0))

    def handle(self, event):
        self.times.append(self.now)
        if self.delays:
            self.send(self.id, EventTag.NOOP, delay=self.delays.pop(0))


def test_schedule_does_not_advance_clock():
    sim = Simulation()
    sim.register(Recorder())
    sim.schedule(0.0, 0, 0, EventTag.NOOP)
    assert len(sim.calendar) == 1
    assert sim.clock == 0.0


def test_simultaneous_events_fifo():
    sim = Simulation()
    rec = Recorder()
    sim.register(rec)
    sim.schedule(5.0, 0, 0, EventTag.NOOP, "A")
    sim.schedule(5.0, 0, 0, EventTag.NOOP, "B")
    sim.run()
    assert [p for _, p in rec.seen] == ["A", "B"]


def test_past_event_rejected():
    sim = Simulation()
    sim.register(Recorder())
    sim.schedule(2.0, 0, 0, EventTag.NOOP)
    sim.calendar.pop()
    assert sim.clock == 2.0
    with pytest.raises(PastEventError):
        sim.schedule(1.0, 0, 0, EventTag.NOOP)


def test_run_single_event():
    sim = Simulation()
    sim.register(Recorder())
    sim.schedule(3.5, 0, 0, EventTag.NOOP)
    assert sim.run() == 3.5


def test_run_empty_calendar():
    sim = Simulation()
    sim.register(Recorder())
    assert sim.run() == 0.0


def test_run_needs_an_entity():
    with pytest.raises(SimulationError):
        Simulation().run()


def test_unknown_destination():
    sim = Simulation()
    sim.register(Recorder())
    sim.schedule(1.0, 0, 7, EventTag.NOOP)
    with pytest.raises(UnknownDestinationError):
        sim.run()


def test_cancelled_event_not_delivered_and_clock_untouched():
    sim = Simulation()
    rec = Recorder()
    sim.register(rec)
    sim.schedule(1.0, 0, 0, EventTag.NOOP, "keep")
    late = sim.schedule(9.0, 0, 0, EventTag.NOOP, "drop")
    sim.cancel(late)
    assert sim.run() == 1.0
    assert rec.seen == [(1.0, "keep")]
    assert sim.delivered + sim.cancelled == sim.calendar.scheduled_count


@pytest.mark.parametrize(
    "t, text",
    [
        (0.0, "0.0"),
        (0.01, "0.01"),
        (153.8557, "153.86"),
        (153.85 + 0.01, "153.86"),
        (173.08692307692309, "173.09"),
        (2.0, "2.00"),
        (0.005, "0.01"),  # half-up
    ],
)
def test_format_time(t, text):
    assert format_time(t) == text


def test_emit_log_lines():
    assert emit_log(0.01, "QBroker", "Sending Qulet 0 to QNode #0") == "0.01: QBroker: Sending Qulet 0 to QNode #0"
    assert emit_log(0.0, "QBroker", "x").startswith("0.0: ")
    assert emit_log(153.8557, "QBroker", "Qulet 0 result received") == "153.86: QBroker: Qulet 0 result received"


def test_log_uses_entity_name_and_clock():
    seen = []
    sim = Simulation(log_sink=seen.append)

    class Talker(SimEntity):
        def handle(self, event):
            self.log("hello")

    sim.register(Talker("T"))
    sim.schedule(1.234, 0, 0, EventTag.NOOP)
    sim.run()
    assert seen == sim.log_lines == ["1.23: T: hello"]


@given(st.lists(st.floats(min_value=0, max_value=1e3, allow_nan=False), max_size=30))
def test_causality_and_conservation(delays):
    sim = Simulation()
    chain = Chain(delays)
    sim.register(chain)
    sim.run()
    assert chain.times == sorted(chain.times)
    assert sim.delivered == sim.calendar.scheduled_count == len(delays)


@given(st.lists(st.tuples(st.floats(0, 100, allow_nan=False), st.integers()), max_size=40))
def test_pop_order_is_time_then_insertion(items):
    sim = Simulation()
    rec = Recorder()
    sim.register(rec)
    for i, (t, _) in enumerate(items):
        sim.schedule(t, 0, 0, EventTag.NOOP, i)
    sim.run()
    expected = sorted(range(len(items)), key=lambda i: (items[i][0], i))
    assert [p for _, p in rec.seen] == expected
