//! Opt-in kernel timers backing the CLI `--profile` flag.
//!
//! Timers are exclusive: a kernel entered while another kernel is already
//! being timed on the same thread is charged to the outer one.

use std::cell::Cell;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    PartitionEnumeration,
    SeriesMultiplication,
    RationalFunction,
    FockOperator,
}

impl Kernel {
    pub const ALL: [Kernel; 4] = [
        Kernel::PartitionEnumeration,
        Kernel::SeriesMultiplication,
        Kernel::RationalFunction,
        Kernel::FockOperator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::PartitionEnumeration => "partition_enumeration",
            Kernel::SeriesMultiplication => "series_multiplication",
            Kernel::RationalFunction => "rational_function",
            Kernel::FockOperator => "fock_operator",
        }
    }
}

static ENABLED: AtomicBool = AtomicBool::new(false);
static NANOS: [AtomicU64; 4] = [
    AtomicU64::new(0),
    AtomicU64::new(0),
    AtomicU64::new(0),
    AtomicU64::new(0),
];

thread_local! {
    static ACTIVE: Cell<bool> = const { Cell::new(false) };
}

pub fn enable(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

pub fn is_enabled() -> bool {
    ENABLED.load(Ordering::Relaxed)
}

pub fn reset() {
    for n in &NANOS {
        n.store(0, Ordering::Relaxed);
    }
}

/// Accumulated seconds per kernel (summed over threads).
pub fn snapshot() -> Vec<(&'static str, f64)> {
    Kernel::ALL
        .iter()
        .map(|k| (k.name(), NANOS[*k as usize].load(Ordering::Relaxed) as f64 * 1e-9))
        .collect()
}

/// Runs `f`, charging its wall time to `kernel` when profiling is on.
#[inline]
pub fn timed<T>(kernel: Kernel, f: impl FnOnce() -> T) -> T {
    if !ENABLED.load(Ordering::Relaxed) || ACTIVE.with(|a| a.get()) {
        return f();
    }
    ACTIVE.with(|a| a.set(true));
    let start = Instant::now();
    let out = f();
    let ns = start.elapsed().as_nanos() as u64;
    ACTIVE.with(|a| a.set(false));
    NANOS[kernel as usize].fetch_add(ns, Ordering::Relaxed);
    out
}
