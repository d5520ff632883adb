//! Optional row-level parallelism. The worker count comes from the
//! `ARZETA_WORKERS` environment variable (default 1); results never depend on it.

use std::sync::OnceLock;

pub const WORKERS_ENV: &str = "ARZETA_WORKERS";

pub fn workers() -> usize {
    static W: OnceLock<usize> = OnceLock::new();
    *W.get_or_init(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&w| w >= 1)
            .unwrap_or(1)
    })
}

/// `(0..count).map(f)`, split into contiguous ranges across the workers.
pub fn map_range<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let w = workers().min(count.max(1));
    if w <= 1 {
        return (0..count).map(f).collect();
    }
    let chunk = count.div_ceil(w);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..w)
            .map(|k| {
                let f = &f;
                scope.spawn(move || {
                    (k * chunk..((k + 1) * chunk).min(count))
                        .map(f)
                        .collect::<Vec<T>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
