//! Run timers. Benchmark times are CPU seconds of the thread running the
//! search, so concurrent runs do not charge each other; wall-clock time is
//! available as a fallback, and a step clock makes runs fully reproducible.

use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClockKind {
    #[default]
    ThreadCpu,
    Wall,
    /// Time is the number of moves made. The search reads it from its own
    /// step counter; a [`Stopwatch`] of this kind measures nothing.
    Steps,
}

#[derive(Debug, Clone, Copy)]
pub struct Stopwatch {
    kind: ClockKind,
    wall_start: Instant,
    cpu_start: f64,
}

fn thread_cpu_seconds() -> f64 {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: `ts` is a valid, writable timespec.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return f64::NAN;
    }
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

impl Stopwatch {
    pub fn start(kind: ClockKind) -> Self {
        let cpu_start = match kind {
            ClockKind::ThreadCpu => thread_cpu_seconds(),
            ClockKind::Wall | ClockKind::Steps => 0.0,
        };
        // Fall back to wall time where the thread clock is unavailable.
        let kind = if cpu_start.is_nan() { ClockKind::Wall } else { kind };
        Stopwatch { kind, wall_start: Instant::now(), cpu_start }
    }

    pub fn kind(&self) -> ClockKind {
        self.kind
    }

    /// Seconds since `start` (always 0 for the step clock).
    pub fn elapsed(&self) -> f64 {
        match self.kind {
            ClockKind::ThreadCpu => (thread_cpu_seconds() - self.cpu_start).max(0.0),
            ClockKind::Wall => self.wall_start.elapsed().as_secs_f64(),
            ClockKind::Steps => 0.0,
        }
    }
}
